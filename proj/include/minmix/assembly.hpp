#pragma once

#include <Eigen/Sparse>
#include <memory>

#include "minmix/fem_spaces.hpp"
#include "minmix/physics.hpp"

namespace minmix {

enum class ProblemKind { Displacement, Traction };

/// Quadrature used for the load functional (f, v). The table harness uses
/// the cell-center rule; Gauss3 provides near-exact cell integrals.
enum class LoadRule { CellCenter, Gauss3 };

/// Blocks of the discrete saddle problem
///   [ M  B^T ] [sigma]   [0]
///   [ B  0   ] [  u  ] = [F]
/// plus explicit constraint rows C over (sigma, u) with zero right-hand
/// side for the traction problem (bordered symmetric system).
struct SaddleSystem {
  std::shared_ptr<const DofLayout> layout;
  ProblemKind problem = ProblemKind::Displacement;
  Eigen::SparseMatrix<double> M;  // stress x stress
  Eigen::SparseMatrix<double> B;  // displacement x stress
  Eigen::SparseMatrix<double> C;  // constraints x (stress + displacement)
  Eigen::VectorXd F;              // displacement block right-hand side

  long stress_size() const { return layout->stress_size(); }
  long displacement_size() const { return layout->displacement_size(); }
  long constraint_count() const { return C.rows(); }
};

SaddleSystem assemble(const TensorGrid& grid, const IsotropicMaterial& material,
                      ProblemKind problem);

Eigen::VectorXd assemble_load(const TensorGrid& grid, const VectorFn& f,
                              LoadRule rule = LoadRule::Gauss3);

/// Traction constraint rows (2D): boundary normal face DOFs, one midpoint
/// row per boundary edge (one redundant row of the closed boundary chain is
/// dropped to keep the set linearly independent), and three rigid-motion
/// rows on the displacement block.
Eigen::SparseMatrix<double> traction_constraints(const DofLayout& layout);

/// Plain L2 Gram of the stress space (Frobenius pairing, shear weight 2).
Eigen::SparseMatrix<double> stress_l2_gram(const DofLayout& layout);

}  // namespace minmix
