#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

namespace minmix {

/// Isotropic compliance A sigma = (sigma - lambda/(2 mu + n lambda) tr(sigma) I) / (2 mu).
struct IsotropicMaterial {
  double lambda;
  double mu;
  int dim;

  IsotropicMaterial(double lambda_, double mu_, int dim_);
  double trace_coefficient() const { return lambda / (2.0 * mu + dim * lambda); }
  double min_eigenvalue() const { return 1.0 / (2.0 * mu + dim * lambda); }
  double max_eigenvalue() const { return 1.0 / (2.0 * mu); }
};

Eigen::MatrixXd compliance_apply(const IsotropicMaterial& mat, const Eigen::MatrixXd& sigma);
Eigen::MatrixXd stiffness_apply(const IsotropicMaterial& mat, const Eigen::MatrixXd& strain);

/// Closed-form displacement with hand-derived gradient and Hessians;
/// stress and load follow from the material law.
struct ManufacturedSolution {
  std::string tag;
  int dim = 2;
  bool traction = false;

  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> displacement;
  /// gradient(x)(i, j) = d u_i / d x_j
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> gradient;
  /// hessian(x, c)(i, j) = d^2 u_c / (d x_i d x_j)
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&, int)> hessian;

  Eigen::MatrixXd strain(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd stress(const Eigen::VectorXd& x, const IsotropicMaterial& mat) const;
  Eigen::VectorXd load(const Eigen::VectorXd& x, const IsotropicMaterial& mat) const;
};

/// tag in {e1, e2, e3, traction}; e3 is 3D, the others 2D.
ManufacturedSolution make_solution(const std::string& tag);

struct ValidationReport {
  double max_gradient_error = 0.0;
  double max_load_error = 0.0;
  double tolerance = 0.0;
  bool ok = false;
};

/// Central finite differences guard the hand-derived calculus:
/// FD(u) vs gradient and FD(div sigma) vs load at random interior points.
ValidationReport validate_solution(const ManufacturedSolution& sol, const IsotropicMaterial& mat,
                                   int samples, double h_fd, unsigned seed = 7u);

/// Rigid motions in 2D: translations and the rotation (y, -x).
Eigen::VectorXd rigid_motion(int m, const Eigen::VectorXd& x);

}  // namespace minmix
