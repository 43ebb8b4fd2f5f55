#pragma once

#include <string>
#include <vector>

#include "minmix/convergence.hpp"

namespace minmix {

/// Constructive right inverse of the discrete divergence: per axis, face
/// values are cumulative sums of the target cell constants; all shear
/// coefficients stay zero. discrete_divergence of the result equals v.
StressField bb_witness(const DisplacementField& v);

/// One checkerboard vector per pair per slab; columns span the global
/// kernel of the redundant frame representation.
Eigen::MatrixXd frame_kernel_basis(const DofLayout& layout);

enum class KernelHandling { Pin, Project };

/// Smallest generalized singular value of B against the H(div_h) stress
/// Gram and the L2 displacement Gram, on the kernel-free stress space (and
/// the constrained subspaces for the traction problem). Dense; small N.
double infsup_constant(const TensorGrid& grid, ProblemKind problem,
                       KernelHandling kernel = KernelHandling::Pin);

/// Minimum of a(tau,tau)/||tau||_0^2 over the divergence-free subspace.
double ellipticity_constant(const TensorGrid& grid, const IsotropicMaterial& material);

/// The five internal stress modes of one 2x2 macro-element (cells
/// ci..ci+1, cj..cj+1; ci, cj even), m in 1..5.
StressField macro_stress_mode(std::shared_ptr<const DofLayout> layout, int ci, int cj, int m);

struct MacroReport {
  long macro_count = 0;
  double max_div_err = 0.0;    // div sigma_m vs the matching nodal column
  double max_trace_err = 0.0;  // normal trace on macro boundaries
  double max_orth_err = 0.0;   // rigid-motion basis orthogonality
  double max_proj_err = 0.0;   // projection idempotence/symmetry/reproduction
  bool pass = false;
};

MacroReport macro_checks(const TensorGrid& grid);

struct CheckResult {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// Verification sweep used by the CLI: witness suite, dense certificates,
/// macro checks (even N), kernel dimension counts.
std::vector<CheckResult> run_verification(const TensorGrid& grid, unsigned seed = 20240901u);

std::string checks_csv(const std::vector<CheckResult>& checks);
std::string checks_table(const std::vector<CheckResult>& checks);

}  // namespace minmix
