#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>

#include "minmix/convergence.hpp"
#include "minmix/verify.hpp"

using namespace minmix;

TEST_CASE("field_l2_error: identical fields, 1D linear, pure shear weight") {
  auto l1 = std::make_shared<DofLayout>(TensorGrid(1, {1}));
  StressField a(l1), b(l1);
  CHECK(field_l2_error(a, a) == 0.0);
  b.coeffs[0] = 0.0;
  b.coeffs[1] = 1.0;  // sigma11 = x
  CHECK(field_l2_error(a, b) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-13));

  auto l2 = std::make_shared<DofLayout>(TensorGrid(2, {1, 1}));
  StressField c(l2), d(l2);
  for (long k = 0; k < l2->pair_coeff_count(0); ++k) d.coeffs[l2->pair_offset(0) + k] = 1.0;
  // sigma12 == 1: double weight makes the norm sqrt(2)
  CHECK(field_l2_error(c, d) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));

  auto other = std::make_shared<DofLayout>(TensorGrid(2, {2, 2}));
  StressField e(other);
  CHECK_THROWS(field_l2_error(c, e));
}

TEST_CASE("error norms are insensitive to the quadrature degree") {
  auto l = std::make_shared<DofLayout>(TensorGrid(2, {2, 2}));
  StressField a(l), b(l);
  std::mt19937 rng(55);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  a.coeffs = Eigen::VectorXd::NullaryExpr(a.coeffs.size(), [&](Eigen::Index) { return U(rng); });
  b.coeffs = Eigen::VectorXd::NullaryExpr(b.coeffs.size(), [&](Eigen::Index) { return U(rng); });
  CHECK(field_l2_error(a, b, 3) == doctest::Approx(field_l2_error(a, b, 4)).epsilon(1e-9));
}

TEST_CASE("div_l2_error examples from Table 1") {
  StudyOptions opt;
  opt.solve.tol = 1e-12;
  StudyResult s = run_study("e1", {1, 2, 3}, 1.0, 0.5, opt);
  REQUIRE(s.completed);
  CHECK(s.records[0].err_div == doctest::Approx(1.41421356).epsilon(1e-7));
  CHECK(s.records[2].err_div == doctest::Approx(0.08838835).epsilon(1e-6));
}

TEST_CASE("run_study: orders column semantics") {
  StudyResult s = run_study("e1", {2}, 1.0, 0.5);
  REQUIRE(s.completed);
  REQUIRE(s.records.size() == 1);
  CHECK(std::isnan(s.records[0].ord_u));
  CHECK(std::isnan(s.records[0].ord_sigma));

  CHECK_THROWS(run_study("e1", {3, 2}, 1.0, 0.5));  // levels must ascend
  CHECK_THROWS(run_study("e1", {0, 1}, 1.0, 0.5));
}

TEST_CASE("csv and markdown formatting") {
  StudyResult s = run_study("e1", {1, 2}, 1.0, 0.5);
  REQUIRE(s.completed);
  std::string csv = format_csv(s);
  CHECK(csv.rfind("level,err_u,ord_u,err_sigma,ord_sigma,err_div,ord_div", 0) == 0);
  CHECK(csv.find("0.05893") != std::string::npos);
  CHECK(csv.find("1.41421356") != std::string::npos);
  // first row has empty order cells
  auto line1 = csv.substr(csv.find('\n') + 1);
  line1 = line1.substr(0, line1.find('\n'));
  CHECK(line1.find(",,") != std::string::npos);
  std::string md = format_markdown(s);
  CHECK(md.find("| 1 |") != std::string::npos);
  CHECK(md.find("0.02447") != std::string::npos);
}

TEST_CASE("study output is deterministic") {
  StudyResult a = run_study("e1", {1, 2, 3}, 1.0, 0.5);
  StudyResult b = run_study("e1", {1, 2, 3}, 1.0, 0.5);
  CHECK(format_csv(a) == format_csv(b));
}

TEST_CASE("true displacement error converges at first order or better") {
  auto sol = make_solution("e1");
  IsotropicMaterial mat(1.0, 0.5, 2);
  double prev = 0.0;
  std::vector<double> errs;
  for (int lvl = 2; lvl <= 5; ++lvl) {
    int N = 1 << (lvl - 1);
    TensorGrid grid(2, {N, N});
    SaddleSystem sys = assemble(grid, mat, ProblemKind::Displacement);
    Eigen::VectorXd F = assemble_load(grid, [&](const Eigen::VectorXd& x) {
      return sol.load(x, mat);
    }, LoadRule::Gauss3);
    SolveOptions opt;
    opt.tol = 1e-11;
    SolveResult r = solve(sys, F, opt);
    REQUIRE(r.report.converged);
    errs.push_back(displacement_error_exact(r.u, sol.displacement));
    (void)prev;
  }
  for (size_t k = 1; k < errs.size(); ++k) {
    double order = std::log2(errs[k - 1] / errs[k]);
    // first-order quantity; the ratio creeps up towards 1 from below
    CHECK(order >= 0.8);
  }
}

TEST_CASE("interpolation error rates match the theorem bounds") {
  // |v - Pi12 v| at orders 2 (L2) and 1 (H1-like, via the divergence part)
  auto sol = make_solution("e2");
  IsotropicMaterial mat(1.0, 0.5, 2);
  std::vector<double> l2err, diverr;
  for (int lvl = 2; lvl <= 6; ++lvl) {
    int N = 1 << (lvl - 1);
    auto l = std::make_shared<DofLayout>(TensorGrid(2, {N, N}));
    StressField Ih = interpolate_full(l, [&](const Eigen::VectorXd& x) {
      return sol.stress(x, mat);
    }, NormalInterpMode::FaceAverage);
    // compare against a fine sample of the exact stress
    double acc = 0.0, accdiv = 0.0;
    const double gp[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
    const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    double h = 1.0 / N, jac = h * h / 4.0;
    DisplacementField dIh = discrete_divergence(Ih);
    for (long c = 0; c < l->grid().cell_count(); ++c) {
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          std::vector<double> ref{gp[a], gp[b]};
          auto xp = l->grid().to_physical(c, ref);
          Eigen::Map<const Eigen::VectorXd> xv(xp.data(), 2);
          Eigen::MatrixXd diff = evaluate_stress(Ih, c, ref) - sol.stress(xv, mat);
          acc += gw[a] * gw[b] * jac * diff.squaredNorm();
          Eigen::Vector2d dd(dIh.values[l->displacement_dof(c, 0)],
                             dIh.values[l->displacement_dof(c, 1)]);
          accdiv += gw[a] * gw[b] * jac * (dd - sol.load(xv, mat)).squaredNorm();
        }
    }
    l2err.push_back(std::sqrt(acc));
    diverr.push_back(std::sqrt(accdiv));
  }
  // asymptotic orders measured on the last ratio
  double ord_l2 = std::log2(l2err[l2err.size() - 2] / l2err.back());
  double ord_div = std::log2(diverr[diverr.size() - 2] / diverr.back());
  CHECK(ord_l2 == doctest::Approx(1.0).epsilon(0.15));
  CHECK(ord_div == doctest::Approx(1.0).epsilon(0.15));
}
