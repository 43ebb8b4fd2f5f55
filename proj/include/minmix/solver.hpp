#pragma once

#include <vector>

#include "minmix/assembly.hpp"

namespace minmix {

enum class Preconditioner { None, Diagonal };

struct SolveOptions {
  double tol = 1e-10;
  long max_iters = 0;  // 0 means 20 * total unknowns
  Preconditioner precond = Preconditioner::Diagonal;
  bool pin = true;
  // lattice corner used when pinning a frame coefficient per slab
  int pin_corner_i = 0;
  int pin_corner_j = 0;
};

struct SolveReport {
  long iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::vector<long> pinned;
  double seconds = 0.0;
};

struct SolveResult {
  StressField sigma;
  DisplacementField u;
  SolveReport report;
};

/// DOFs removed to make the redundant shear frames linearly independent:
/// for each pair and each slab, the coefficient at lattice corner (ci, cj).
std::vector<long> pinned_frame_dofs(const DofLayout& layout, int ci = 0, int cj = 0);

/// Symmetric elimination of the pinned DOFs in place (unit diagonal in M,
/// zeroed columns in B and C). Returns the pinned DOF list.
std::vector<long> pin_frame_kernel(SaddleSystem& system, int ci = 0, int cj = 0);

/// Bordered symmetric operator [[M, B^T, C^T],[B,0,0],[C,0,0]].
Eigen::SparseMatrix<double> kkt_matrix(const SaddleSystem& system);
Eigen::VectorXd apply_kkt(const SaddleSystem& system, const Eigen::VectorXd& x);

SolveResult solve(const SaddleSystem& system, const Eigen::VectorXd& F,
                  const SolveOptions& options = {});

/// Dense factorization of the (pinned) KKT matrix; test oracle for small N.
SolveResult solve_dense(const SaddleSystem& system, const Eigen::VectorXd& F,
                        bool pin = true);

}  // namespace minmix
