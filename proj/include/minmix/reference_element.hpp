#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace minmix {

/// Univariate hat pair on [-1,1]: psi0 = (1-x)/2, psi1 = (1+x)/2.
double eval_hat(int k, double x);
double eval_hat_deriv(int k);

/// Four-member frame on [-1,1]^2 attached to the corners
/// (-1,-1), (1,-1), (1,1), (-1,1) in counterclockwise order.
/// The members sum to 1 and satisfy the alternating relation
/// phi0 - phi1 + phi2 - phi3 == 0.
double eval_frame(int k, double x, double y);
double eval_frame_dx(int k);
double eval_frame_dy(int k);

/// Reference-corner offsets of frame member k in the (i,j) plane:
/// 0 or 1 along each of the two axes.
int frame_corner_offset_i(int k);
int frame_corner_offset_j(int k);

/// Tensor-product Gauss rule on [-1,1]^d with g points per axis,
/// exact for per-axis degree <= 2g-1.
struct QuadratureRule {
  Eigen::MatrixXd points;   // n_points x d
  Eigen::VectorXd weights;  // n_points
};
QuadratureRule gauss_rule(int d, int g);

/// Canonical local stress DOF order on one cell:
/// for each axis i: the two face values (k = 0 lower, k = 1 upper);
/// then for each pair (i,j), i < j in lexicographic order: the four frame
/// coefficients k = 0..3. Total 2n + 2n(n-1).
int local_stress_dof_count(int dim);

/// Element compliance Gram (A sigma, tau)_K over all local stress shape
/// functions, Frobenius pairing (off-diagonal pairs carry weight 2).
/// lambda = 0 yields the plain L2 Gram of the stress tensor.
Eigen::MatrixXd local_compliance_gram(int dim, double lambda, double mu,
                                      std::span<const double> half_lengths);

/// Element coupling (div tau, e_d)_K: row per local stress DOF, column per
/// displacement component; entries are the (constant) divergence times the
/// cell volume.
Eigen::MatrixXd local_divergence_coupling(int dim, std::span<const double> half_lengths);

}  // namespace minmix
