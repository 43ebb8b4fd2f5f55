#include "minmix/physics.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace minmix {

namespace {

constexpr double kPi = 3.14159265358979323846;

// bubble b(t) = t(1-t) and its derivatives
double bub(double t) { return t * (1.0 - t); }
double bub1(double t) { return 1.0 - 2.0 * t; }
constexpr double kBub2 = -2.0;

// quartic q(t) = t^2 (1-t)^2
double quart(double t) { return t * t * (1.0 - t) * (1.0 - t); }
double quart1(double t) { return 2.0 * t - 6.0 * t * t + 4.0 * t * t * t; }
double quart2(double t) { return 2.0 - 12.0 * t + 12.0 * t * t; }

}  // namespace

IsotropicMaterial::IsotropicMaterial(double lambda_, double mu_, int dim_)
    : lambda(lambda_), mu(mu_), dim(dim_) {
  if (lambda <= 0.0) throw std::invalid_argument("material: lambda must be positive");
  if (mu <= 0.0) throw std::invalid_argument("material: mu must be positive");
  if (dim < 1) throw std::invalid_argument("material: dim must be >= 1");
}

Eigen::MatrixXd compliance_apply(const IsotropicMaterial& mat, const Eigen::MatrixXd& sigma) {
  const int n = mat.dim;
  return (sigma - mat.trace_coefficient() * sigma.trace() * Eigen::MatrixXd::Identity(n, n)) /
         (2.0 * mat.mu);
}

Eigen::MatrixXd stiffness_apply(const IsotropicMaterial& mat, const Eigen::MatrixXd& strain) {
  const int n = mat.dim;
  return 2.0 * mat.mu * strain +
         mat.lambda * strain.trace() * Eigen::MatrixXd::Identity(n, n);
}

Eigen::MatrixXd ManufacturedSolution::strain(const Eigen::VectorXd& x) const {
  const Eigen::MatrixXd g = gradient(x);
  return 0.5 * (g + g.transpose());
}

Eigen::MatrixXd ManufacturedSolution::stress(const Eigen::VectorXd& x,
                                             const IsotropicMaterial& mat) const {
  return stiffness_apply(mat, strain(x));
}

Eigen::VectorXd ManufacturedSolution::load(const Eigen::VectorXd& x,
                                           const IsotropicMaterial& mat) const {
  // f_d = mu * laplace(u_d) + (mu + lambda) * d_d(div u), from the Hessians
  const int n = dim;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::MatrixXd> H(static_cast<size_t>(n));
  for (int c = 0; c < n; ++c) H[static_cast<size_t>(c)] = hessian(x, c);
  for (int d = 0; d < n; ++d) {
    double lap = 0.0, grad_div = 0.0;
    for (int j = 0; j < n; ++j) {
      lap += H[static_cast<size_t>(d)](j, j);
      grad_div += H[static_cast<size_t>(j)](d, j);
    }
    f(d) = mat.mu * lap + (mat.mu + mat.lambda) * grad_div;
  }
  return f;
}

ManufacturedSolution make_solution(const std::string& tag) {
  ManufacturedSolution s;
  s.tag = tag;
  if (tag == "e1") {
    s.dim = 2;
    s.displacement = [](const Eigen::VectorXd& x) {
      const double w = 4.0 * bub(x(0)) * bub(x(1));
      return Eigen::Vector2d(w, -w);
    };
    s.gradient = [](const Eigen::VectorXd& x) {
      const double wx = 4.0 * bub1(x(0)) * bub(x(1));
      const double wy = 4.0 * bub(x(0)) * bub1(x(1));
      Eigen::Matrix2d g;
      g << wx, wy, -wx, -wy;
      return Eigen::MatrixXd(g);
    };
    s.hessian = [](const Eigen::VectorXd& x, int c) {
      const double wxx = 4.0 * kBub2 * bub(x(1));
      const double wyy = 4.0 * bub(x(0)) * kBub2;
      const double wxy = 4.0 * bub1(x(0)) * bub1(x(1));
      Eigen::Matrix2d h;
      h << wxx, wxy, wxy, wyy;
      if (c == 1) h = -h;
      return Eigen::MatrixXd(h);
    };
  } else if (tag == "e2") {
    s.dim = 2;
    s.displacement = [](const Eigen::VectorXd& x) {
      const double e = std::exp(x(0) - x(1));
      return Eigen::Vector2d(e * bub(x(0)) * bub(x(1)),
                             std::sin(kPi * x(0)) * std::sin(kPi * x(1)));
    };
    s.gradient = [](const Eigen::VectorXd& x) {
      const double e = std::exp(x(0) - x(1));
      Eigen::Matrix2d g;
      g(0, 0) = e * bub(x(1)) * (bub(x(0)) + bub1(x(0)));
      g(0, 1) = e * bub(x(0)) * (bub1(x(1)) - bub(x(1)));
      g(1, 0) = kPi * std::cos(kPi * x(0)) * std::sin(kPi * x(1));
      g(1, 1) = kPi * std::sin(kPi * x(0)) * std::cos(kPi * x(1));
      return Eigen::MatrixXd(g);
    };
    s.hessian = [](const Eigen::VectorXd& x, int c) {
      Eigen::Matrix2d h;
      if (c == 0) {
        const double e = std::exp(x(0) - x(1));
        h(0, 0) = e * bub(x(1)) * (bub(x(0)) + 2.0 * bub1(x(0)) + kBub2);
        h(1, 1) = e * bub(x(0)) * (bub(x(1)) - 2.0 * bub1(x(1)) + kBub2);
        h(0, 1) = h(1, 0) = e * (bub(x(0)) + bub1(x(0))) * (bub1(x(1)) - bub(x(1)));
      } else {
        const double u2 = std::sin(kPi * x(0)) * std::sin(kPi * x(1));
        h(0, 0) = h(1, 1) = -kPi * kPi * u2;
        h(0, 1) = h(1, 0) = kPi * kPi * std::cos(kPi * x(0)) * std::cos(kPi * x(1));
      }
      return Eigen::MatrixXd(h);
    };
  } else if (tag == "e3") {
    s.dim = 3;
    const Eigen::Vector3d amp(16.0, 32.0, 64.0);
    s.displacement = [amp](const Eigen::VectorXd& x) {
      const double p = bub(x(0)) * bub(x(1)) * bub(x(2));
      return Eigen::VectorXd(amp * p);
    };
    s.gradient = [amp](const Eigen::VectorXd& x) {
      Eigen::Vector3d dp;
      dp(0) = bub1(x(0)) * bub(x(1)) * bub(x(2));
      dp(1) = bub(x(0)) * bub1(x(1)) * bub(x(2));
      dp(2) = bub(x(0)) * bub(x(1)) * bub1(x(2));
      return Eigen::MatrixXd(amp * dp.transpose());
    };
    s.hessian = [amp](const Eigen::VectorXd& x, int c) {
      Eigen::Matrix3d h;
      const double b0 = bub(x(0)), b1 = bub(x(1)), b2 = bub(x(2));
      const double d0 = bub1(x(0)), d1 = bub1(x(1)), d2 = bub1(x(2));
      h(0, 0) = kBub2 * b1 * b2;
      h(1, 1) = b0 * kBub2 * b2;
      h(2, 2) = b0 * b1 * kBub2;
      h(0, 1) = h(1, 0) = d0 * d1 * b2;
      h(0, 2) = h(2, 0) = d0 * b1 * d2;
      h(1, 2) = h(2, 1) = b0 * d1 * d2;
      return Eigen::MatrixXd(amp(c) * h);
    };
  } else if (tag == "traction") {
    s.dim = 2;
    s.traction = true;
    s.displacement = [](const Eigen::VectorXd& x) {
      const double q = 100.0 * quart(x(0)) * quart(x(1)) - 1.0 / 9.0;
      return Eigen::Vector2d(q, -q);
    };
    s.gradient = [](const Eigen::VectorXd& x) {
      const double qx = 100.0 * quart1(x(0)) * quart(x(1));
      const double qy = 100.0 * quart(x(0)) * quart1(x(1));
      Eigen::Matrix2d g;
      g << qx, qy, -qx, -qy;
      return Eigen::MatrixXd(g);
    };
    s.hessian = [](const Eigen::VectorXd& x, int c) {
      Eigen::Matrix2d h;
      h(0, 0) = 100.0 * quart2(x(0)) * quart(x(1));
      h(1, 1) = 100.0 * quart(x(0)) * quart2(x(1));
      h(0, 1) = h(1, 0) = 100.0 * quart1(x(0)) * quart1(x(1));
      if (c == 1) h = -h;
      return Eigen::MatrixXd(h);
    };
  } else {
    throw std::invalid_argument("make_solution: unknown tag '" + tag + "'");
  }
  return s;
}

ValidationReport validate_solution(const ManufacturedSolution& sol, const IsotropicMaterial& mat,
                                   int samples, double h_fd, unsigned seed) {
  const int n = sol.dim;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(0.1, 0.9);
  ValidationReport rep;
  rep.tolerance = 100.0 * h_fd * h_fd;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd x(n);
    for (int a = 0; a < n; ++a) x(a) = dist(rng);
    // gradient check
    const Eigen::MatrixXd g = sol.gradient(x);
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd xp = x, xm = x;
      xp(j) += h_fd;
      xm(j) -= h_fd;
      const Eigen::VectorXd fd = (sol.displacement(xp) - sol.displacement(xm)) / (2.0 * h_fd);
      rep.max_gradient_error = std::max(rep.max_gradient_error, (fd - g.col(j)).cwiseAbs().maxCoeff());
    }
    // FD divergence of sigma vs closed-form load
    Eigen::VectorXd div = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd xp = x, xm = x;
      xp(j) += h_fd;
      xm(j) -= h_fd;
      const Eigen::MatrixXd ds = (sol.stress(xp, mat) - sol.stress(xm, mat)) / (2.0 * h_fd);
      div += ds.col(j);
    }
    rep.max_load_error =
        std::max(rep.max_load_error, (div - sol.load(x, mat)).cwiseAbs().maxCoeff());
  }
  rep.ok = rep.max_gradient_error < rep.tolerance && rep.max_load_error < rep.tolerance;
  return rep;
}

Eigen::VectorXd rigid_motion(int m, const Eigen::VectorXd& x) {
  switch (m) {
    case 0:
      return Eigen::Vector2d(1.0, 0.0);
    case 1:
      return Eigen::Vector2d(0.0, 1.0);
    case 2:
      return Eigen::Vector2d(x(1), -x(0));
    default:
      throw std::invalid_argument("rigid_motion: m must be in 0..2");
  }
}

}  // namespace minmix
