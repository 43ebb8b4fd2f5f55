#include "minmix/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace minmix {

namespace {

void zero_columns(Eigen::SparseMatrix<double>& A, const std::vector<char>& drop) {
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      if (drop[static_cast<size_t>(it.col())]) it.valueRef() = 0.0;
}

Eigen::VectorXd full_rhs(const SaddleSystem& sys, const Eigen::VectorXd& F) {
  const long ns = sys.stress_size(), nu = sys.displacement_size(), nc = sys.constraint_count();
  if (F.size() != nu) throw std::invalid_argument("solve: load vector size mismatch");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(ns + nu + nc);
  b.segment(ns, nu) = F;
  return b;
}

// Preconditioned MINRES; P holds the diagonal of the preconditioner.
long minres(const Eigen::SparseMatrix<double>& K, const Eigen::VectorXd& b,
            const Eigen::VectorXd& P, double tol, long max_iters, Eigen::VectorXd& x) {
  const auto prec = [&](const Eigen::VectorXd& r) -> Eigen::VectorXd {
    return r.cwiseQuotient(P);
  };
  Eigen::VectorXd r1 = b - K * x;
  Eigen::VectorXd y = prec(r1);
  const double beta1 = std::sqrt(r1.dot(y));
  if (beta1 == 0.0) return 0;
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;
  Eigen::VectorXd r2 = r1;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(b.size());
  Eigen::VectorXd w2 = w;
  long iter = 0;
  while (iter < max_iters) {
    ++iter;
    const Eigen::VectorXd v = y / beta;
    y = K * v;
    if (iter >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    y = prec(r2);
    oldb = beta;
    beta = std::sqrt(std::max(r2.dot(y), 0.0));
    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), 1e-300);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;
    const Eigen::VectorXd w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    x += phi * w;
    if (phibar <= tol * beta1) break;
  }
  return iter;
}

SolveResult pack_fields(const SaddleSystem& sys, const Eigen::VectorXd& z, SolveReport rep) {
  const long ns = sys.stress_size(), nu = sys.displacement_size();
  SolveResult res{StressField(sys.layout), DisplacementField(sys.layout), std::move(rep)};
  res.sigma.coeffs = z.head(ns);
  res.u.values = z.segment(ns, nu);
  return res;
}

}  // namespace

std::vector<long> pinned_frame_dofs(const DofLayout& layout, int ci, int cj) {
  const TensorGrid& grid = layout.grid();
  std::vector<long> pinned;
  for (int p = 0; p < layout.pair_count(); ++p) {
    const auto [i, j] = layout.pair(p);
    if (ci > grid.cells(i) || cj > grid.cells(j))
      throw std::out_of_range("pinned_frame_dofs: corner outside lattice");
    for (long idx = 0; idx < grid.pair_point_count(i, j); ++idx) {
      const auto t = grid.pair_point_multi(i, j, idx);
      if (t[static_cast<size_t>(i)] == ci && t[static_cast<size_t>(j)] == cj)
        pinned.push_back(layout.pair_offset(p) + idx);
    }
  }
  return pinned;
}

std::vector<long> pin_frame_kernel(SaddleSystem& system, int ci, int cj) {
  const DofLayout& layout = *system.layout;
  const auto pinned = pinned_frame_dofs(layout, ci, cj);
  std::vector<char> drop(static_cast<size_t>(layout.stress_size()), 0);
  for (long d : pinned) drop[static_cast<size_t>(d)] = 1;

  for (int k = 0; k < system.M.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.M, k); it; ++it) {
      if (!drop[static_cast<size_t>(it.row())] && !drop[static_cast<size_t>(it.col())]) continue;
      it.valueRef() = (it.row() == it.col()) ? 1.0 : 0.0;
    }
  zero_columns(system.B, drop);
  if (system.C.rows() > 0) {
    std::vector<char> dropc(static_cast<size_t>(system.C.cols()), 0);
    for (long d : pinned) dropc[static_cast<size_t>(d)] = 1;
    zero_columns(system.C, dropc);
  }
  system.M.prune(0.0);
  system.B.prune(0.0);
  return pinned;
}

Eigen::SparseMatrix<double> kkt_matrix(const SaddleSystem& system) {
  const long ns = system.stress_size(), nu = system.displacement_size();
  const long nc = system.constraint_count();
  const long m = ns + nu + nc;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(2 * system.M.nonZeros() + 2 * system.B.nonZeros() +
                                    2 * system.C.nonZeros()));
  for (int k = 0; k < system.M.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.M, k); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int k = 0; k < system.B.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.B, k); it; ++it) {
      trips.emplace_back(static_cast<int>(ns + it.row()), static_cast<int>(it.col()), it.value());
      trips.emplace_back(static_cast<int>(it.col()), static_cast<int>(ns + it.row()), it.value());
    }
  for (int k = 0; k < system.C.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.C, k); it; ++it) {
      trips.emplace_back(static_cast<int>(ns + nu + it.row()), static_cast<int>(it.col()),
                         it.value());
      trips.emplace_back(static_cast<int>(it.col()), static_cast<int>(ns + nu + it.row()),
                         it.value());
    }
  Eigen::SparseMatrix<double> K(m, m);
  K.setFromTriplets(trips.begin(), trips.end());
  K.makeCompressed();
  return K;
}

Eigen::VectorXd apply_kkt(const SaddleSystem& system, const Eigen::VectorXd& x) {
  const long ns = system.stress_size(), nu = system.displacement_size();
  const long nc = system.constraint_count();
  if (x.size() != ns + nu + nc) throw std::invalid_argument("apply_kkt: size mismatch");
  Eigen::VectorXd y(ns + nu + nc);
  y.head(ns) = system.M * x.head(ns) + system.B.transpose() * x.segment(ns, nu);
  y.segment(ns, nu) = system.B * x.head(ns);
  if (nc > 0) {
    y.head(ns + nu) += system.C.transpose() * x.tail(nc);
    y.tail(nc) = system.C * x.head(ns + nu);
  }
  return y;
}

SolveResult solve(const SaddleSystem& system, const Eigen::VectorXd& F,
                  const SolveOptions& options) {
  if (options.tol <= 0.0 || options.tol >= 1.0)
    throw std::invalid_argument("solve: tolerance must be in (0,1)");
  const auto t0 = std::chrono::steady_clock::now();
  SaddleSystem sys = system;
  SolveReport rep;
  if (options.pin) rep.pinned = pin_frame_kernel(sys, options.pin_corner_i, options.pin_corner_j);

  const Eigen::VectorXd b = full_rhs(sys, F);
  const long m = b.size();
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    rep.converged = true;
    return pack_fields(sys, Eigen::VectorXd::Zero(m), std::move(rep));
  }

  const Eigen::SparseMatrix<double> K = kkt_matrix(sys);
  Eigen::VectorXd P = Eigen::VectorXd::Ones(m);
  if (options.precond == Preconditioner::Diagonal) {
    const long ns = sys.stress_size(), nu = sys.displacement_size();
    const Eigen::VectorXd d = sys.M.diagonal();
    for (long i = 0; i < ns; ++i) P(i) = std::max(std::abs(d(i)), 1e-14);
    // Schur-complement diagonals for the lower blocks: rows of B (and C)
    // weighted by the inverse stress diagonal
    for (int k = 0; k < sys.B.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(sys.B, k); it; ++it)
        P(ns + it.row()) += it.value() * it.value() / P(it.col());
    for (long i = 0; i < nu; ++i) P(ns + i) = std::max(P(ns + i) - 1.0, 1e-14);
    for (int k = 0; k < sys.C.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(sys.C, k); it; ++it)
        P(ns + nu + it.row()) += it.value() * it.value() / P(it.col());
    for (long i = 0; i < sys.constraint_count(); ++i)
      P(ns + nu + i) = std::max(P(ns + nu + i) - 1.0, 1e-14);
  }

  const long budget = options.max_iters > 0 ? options.max_iters : 20 * m;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  long used = 0;
  double rel = 1.0;
  // the stopping test is in the preconditioned norm, so confirm the true
  // residual and continue with the remaining budget if it is not yet met
  while (used < budget) {
    used += minres(K, b, P, options.tol * 0.5, budget - used, x);
    rel = (b - K * x).norm() / bnorm;
    if (rel <= options.tol) break;
    if (used >= budget) break;
  }
  rep.iterations = used;
  rep.residual = rel;
  rep.converged = rel <= options.tol;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return pack_fields(sys, x, std::move(rep));
}

SolveResult solve_dense(const SaddleSystem& system, const Eigen::VectorXd& F, bool pin) {
  const auto t0 = std::chrono::steady_clock::now();
  SaddleSystem sys = system;
  SolveReport rep;
  if (pin) rep.pinned = pin_frame_kernel(sys);
  const Eigen::VectorXd b = full_rhs(sys, F);
  const Eigen::MatrixXd K = Eigen::MatrixXd(kkt_matrix(sys));
  Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
  if (!lu.isInvertible()) throw std::runtime_error("solve_dense: singular KKT matrix");
  const Eigen::VectorXd x = lu.solve(b);
  rep.iterations = 0;
  rep.residual = b.isZero() ? 0.0 : (b - K * x).norm() / b.norm();
  rep.converged = true;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return pack_fields(sys, x, std::move(rep));
}

}  // namespace minmix
