#include "minmix/reference_element.hpp"

#include <cmath>
#include <stdexcept>

namespace minmix {

namespace {

constexpr int kSgnX[4] = {-1, 1, 1, -1};
constexpr int kSgnY[4] = {-1, -1, 1, 1};

void gauss_1d(int g, std::vector<double>& x, std::vector<double>& w) {
  switch (g) {
    case 1:
      x = {0.0};
      w = {2.0};
      break;
    case 2: {
      const double a = 1.0 / std::sqrt(3.0);
      x = {-a, a};
      w = {1.0, 1.0};
      break;
    }
    case 3: {
      const double a = std::sqrt(3.0 / 5.0);
      x = {-a, 0.0, a};
      w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      break;
    }
    case 4: {
      const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
      const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
      x = {-b, -a, a, b};
      w = {wb, wa, wa, wb};
      break;
    }
    default:
      throw std::invalid_argument("gauss_rule: g must be in {1,2,3,4}");
  }
}

}  // namespace

double eval_hat(int k, double x) {
  if (k != 0 && k != 1) throw std::invalid_argument("eval_hat: k must be 0 or 1");
  return k == 0 ? 0.5 * (1.0 - x) : 0.5 * (1.0 + x);
}

double eval_hat_deriv(int k) {
  if (k != 0 && k != 1) throw std::invalid_argument("eval_hat_deriv: k must be 0 or 1");
  return k == 0 ? -0.5 : 0.5;
}

double eval_frame(int k, double x, double y) {
  if (k < 0 || k > 3) throw std::invalid_argument("eval_frame: k must be in 0..3");
  return 0.25 * (1.0 + kSgnX[k] * x + kSgnY[k] * y);
}

double eval_frame_dx(int k) {
  if (k < 0 || k > 3) throw std::invalid_argument("eval_frame_dx: k must be in 0..3");
  return 0.25 * kSgnX[k];
}

double eval_frame_dy(int k) {
  if (k < 0 || k > 3) throw std::invalid_argument("eval_frame_dy: k must be in 0..3");
  return 0.25 * kSgnY[k];
}

int frame_corner_offset_i(int k) { return kSgnX[k] > 0 ? 1 : 0; }
int frame_corner_offset_j(int k) { return kSgnY[k] > 0 ? 1 : 0; }

QuadratureRule gauss_rule(int d, int g) {
  if (d < 1) throw std::invalid_argument("gauss_rule: d must be >= 1");
  std::vector<double> x, w;
  gauss_1d(g, x, w);
  long n = 1;
  for (int a = 0; a < d; ++a) n *= g;
  QuadratureRule rule;
  rule.points.resize(n, d);
  rule.weights.resize(n);
  for (long q = 0; q < n; ++q) {
    long rest = q;
    double wq = 1.0;
    for (int a = d - 1; a >= 0; --a) {
      const int idx = static_cast<int>(rest % g);
      rest /= g;
      rule.points(q, a) = x[static_cast<size_t>(idx)];
      wq *= w[static_cast<size_t>(idx)];
    }
    rule.weights(q) = wq;
  }
  return rule;
}

int local_stress_dof_count(int dim) { return 2 * dim + 2 * dim * (dim - 1); }

Eigen::MatrixXd local_compliance_gram(int dim, double lambda, double mu,
                                      std::span<const double> half_lengths) {
  if (mu <= 0.0 || lambda < 0.0) throw std::invalid_argument("inadmissible material");
  double jac = 1.0;
  for (int a = 0; a < dim; ++a) {
    if (half_lengths[static_cast<size_t>(a)] <= 0.0)
      throw std::invalid_argument("degenerate cell");
    jac *= half_lengths[static_cast<size_t>(a)];
  }
  const int nloc = local_stress_dof_count(dim);
  const int npairs = dim * (dim - 1) / 2;
  const double trace_coef = lambda / (2.0 * mu + dim * lambda);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nloc, nloc);

  const QuadratureRule rule = gauss_rule(dim, 2);
  Eigen::VectorXd diag_vals(2 * dim);
  Eigen::VectorXd pair_vals(4 * npairs);
  for (long q = 0; q < rule.weights.size(); ++q) {
    for (int i = 0; i < dim; ++i)
      for (int k = 0; k < 2; ++k) diag_vals(2 * i + k) = eval_hat(k, rule.points(q, i));
    int p = 0;
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j, ++p)
        for (int k = 0; k < 4; ++k)
          pair_vals(4 * p + k) = eval_frame(k, rule.points(q, i), rule.points(q, j));
    const double wq = rule.weights(q) * jac;
    // normal-normal block: (1/2mu)(delta_ij - trace_coef) psi_a psi_b
    for (int a = 0; a < 2 * dim; ++a)
      for (int b = 0; b < 2 * dim; ++b) {
        const double delta = (a / 2 == b / 2) ? 1.0 : 0.0;
        M(a, b) += (delta - trace_coef) / (2.0 * mu) * diag_vals(a) * diag_vals(b) * wq;
      }
    // shear blocks, Frobenius weight 2, block-diagonal per pair
    for (int pp = 0; pp < npairs; ++pp)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          M(2 * dim + 4 * pp + a, 2 * dim + 4 * pp + b) +=
              pair_vals(4 * pp + a) * pair_vals(4 * pp + b) / mu * wq;
  }
  // enforce exact symmetry of the assembled block
  M = 0.5 * (M + M.transpose()).eval();
  return M;
}

Eigen::MatrixXd local_divergence_coupling(int dim, std::span<const double> half_lengths) {
  double vol = 1.0;
  for (int a = 0; a < dim; ++a) {
    if (half_lengths[static_cast<size_t>(a)] <= 0.0)
      throw std::invalid_argument("degenerate cell");
    vol *= 2.0 * half_lengths[static_cast<size_t>(a)];
  }
  const int nloc = local_stress_dof_count(dim);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(nloc, dim);
  for (int i = 0; i < dim; ++i) {
    const double hi = 2.0 * half_lengths[static_cast<size_t>(i)];
    D(2 * i + 0, i) = -vol / hi;
    D(2 * i + 1, i) = vol / hi;
  }
  int p = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j, ++p) {
      const double hi = 2.0 * half_lengths[static_cast<size_t>(i)];
      const double hj = 2.0 * half_lengths[static_cast<size_t>(j)];
      for (int k = 0; k < 4; ++k) {
        // div component i picks d/dx_j of the frame member, and vice versa
        D(2 * dim + 4 * p + k, i) = 2.0 * eval_frame_dy(k) / hj * vol;
        D(2 * dim + 4 * p + k, j) = 2.0 * eval_frame_dx(k) / hi * vol;
      }
    }
  return D;
}

}  // namespace minmix
