#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>

#include "minmix/fem_spaces.hpp"
#include "minmix/physics.hpp"

using namespace minmix;

namespace {
std::shared_ptr<DofLayout> layout2(int N) {
  return std::make_shared<DofLayout>(TensorGrid(2, {N, N}));
}
}  // namespace

TEST_CASE("dof counts: 2D N=2") {
  auto l = layout2(2);
  CHECK(l->normal_count(0) == 6);
  CHECK(l->normal_count(1) == 6);
  CHECK(l->pair_coeff_count(0) == 9);
  CHECK(l->stress_size() == 21);
  CHECK(l->displacement_size() == 8);
  CHECK(l->pair_span_dimension(0) == 8);  // 9 coefficients, one checkerboard relation
}

TEST_CASE("dof counts: 3D N=2 and the Remark 2 dimension formula") {
  auto l = std::make_shared<DofLayout>(TensorGrid(3, {2, 2, 2}));
  CHECK(l->pair_count() == 3);
  for (int p = 0; p < 3; ++p) {
    CHECK(l->pair_coeff_count(p) == 18);
    // N^{n-2}((n+1)^2 - 1) = 2 * 15
    CHECK(l->pair_span_dimension(p) == 16);
  }
  CHECK(l->stress_size() == 3 * 12 + 3 * 18);
  CHECK(l->displacement_size() == 24);
}

TEST_CASE("constant coefficients give the constant tensor") {
  auto l = layout2(2);
  StressField f(l);
  f.coeffs.setConstant(0.7);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (long c = 0; c < l->grid().cell_count(); ++c) {
    std::vector<double> ref{U(rng), U(rng)};
    Eigen::MatrixXd s = evaluate_stress(f, c, ref);
    CHECK(s(0, 0) == doctest::Approx(0.7));
    CHECK(s(0, 1) == doctest::Approx(0.7));
    CHECK(s(1, 1) == doctest::Approx(0.7));
    CHECK(s(1, 0) == doctest::Approx(s(0, 1)));
  }
}

TEST_CASE("checkerboard coefficients represent the zero shear function") {
  auto l = layout2(3);
  StressField f(l);
  const auto& g = l->grid();
  for (long p = 0; p < g.pair_point_count(0, 1); ++p) {
    auto t = g.pair_point_multi(0, 1, p);
    f.coeffs[l->pair_dof(0, t)] = ((t[0] + t[1]) % 2 == 0) ? 1.0 : -1.0;
  }
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (long c = 0; c < g.cell_count(); ++c) {
    std::vector<double> ref{U(rng), U(rng)};
    CHECK(std::abs(evaluate_stress(f, c, ref)(0, 1)) < 1e-14);
  }
}

TEST_CASE("1D hat interpolation: face values (0,1) give sigma11 = x") {
  auto l = std::make_shared<DofLayout>(TensorGrid(1, {1}));
  StressField f(l);
  f.coeffs[0] = 0.0;
  f.coeffs[1] = 1.0;
  for (double r : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    std::vector<double> ref{r};
    CHECK(evaluate_stress(f, 0, ref)(0, 0) == doctest::Approx(0.5 * (r + 1.0)));
  }
  DisplacementField d = discrete_divergence(f);
  CHECK(d.values[0] == doctest::Approx(1.0));
}

TEST_CASE("discrete divergence: zero field and global linear field") {
  auto l = std::make_shared<DofLayout>(TensorGrid(1, {4}));
  StressField z(l);
  CHECK(discrete_divergence(z).values.norm() == 0.0);

  StressField f(l);
  for (long k = 0; k < 5; ++k) f.coeffs[k] = 0.25 * static_cast<double>(k);  // sigma11 = x
  DisplacementField d = discrete_divergence(f);
  for (long c = 0; c < 4; ++c) CHECK(d.values[c] == doctest::Approx(1.0));
}

TEST_CASE("interpolate_normal: constants, linears, face averages") {
  auto l = layout2(2);
  auto cst = interpolate_normal(*l, 0, [](const Eigen::VectorXd&) { return 3.0; });
  for (long k = 0; k < cst.size(); ++k) CHECK(cst[k] == doctest::Approx(3.0));

  auto lin = interpolate_normal(*l, 0, [](const Eigen::VectorXd& x) { return x[0]; });
  const auto& g = l->grid();
  for (long k = 0; k < g.face_count(0); ++k) {
    auto t = g.face_multi(0, k);
    CHECK(lin[k] == doctest::Approx(0.5 * t[0]).epsilon(1e-14));
  }

  auto one = std::make_shared<DofLayout>(TensorGrid(2, {1, 1}));
  auto ysq = interpolate_normal(*one, 0, [](const Eigen::VectorXd& x) { return x[1] * x[1]; },
                                NormalInterpMode::FaceAverage);
  CHECK(ysq[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(ysq[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  auto ysqc = interpolate_normal(*one, 0, [](const Eigen::VectorXd& x) { return x[1] * x[1]; },
                                 NormalInterpMode::FaceCenter);
  CHECK(ysqc[0] == doctest::Approx(0.25));
}

TEST_CASE("interpolate_shear reproduces linears in the pair plane") {
  auto l = layout2(3);
  auto fn = [](const Eigen::VectorXd& x) { return 0.3 + 1.7 * x[0] - 0.9 * x[1]; };
  StressField f(l);
  f.coeffs.segment(l->pair_offset(0), l->pair_coeff_count(0)) = interpolate_shear(*l, 0, fn);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (long c = 0; c < l->grid().cell_count(); ++c) {
    std::vector<double> ref{U(rng), U(rng)};
    auto x = l->grid().to_physical(c, ref);
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), 2);
    CHECK(evaluate_stress(f, c, ref)(0, 1) == doctest::Approx(fn(xv)).epsilon(1e-13));
  }
}

TEST_CASE("shear midpoint continuity across interior edges") {
  auto l = layout2(4);
  const auto& g = l->grid();
  auto sol = make_solution("e2");
  IsotropicMaterial mat(1.0, 0.5, 2);
  StressField f(l);
  f.coeffs.segment(l->pair_offset(0), l->pair_coeff_count(0)) =
      interpolate_shear(*l, 0, [&](const Eigen::VectorXd& x) { return sol.stress(x, mat)(0, 1); });
  // every interior vertical edge: trace at the midpoint agrees from both sides
  for (int i = 1; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      std::vector<int> cl{i - 1, j}, cr{i, j};
      std::vector<double> refl{1.0, 0.0}, refr{-1.0, 0.0};
      double a = evaluate_stress(f, g.cell_index(cl), refl)(0, 1);
      double b = evaluate_stress(f, g.cell_index(cr), refr)(0, 1);
      CHECK(a == doctest::Approx(b).epsilon(1e-13));
    }
}

TEST_CASE("normal components are continuous across their faces, shear is not conforming") {
  auto l = layout2(2);
  const auto& g = l->grid();
  auto sol = make_solution("e1");
  IsotropicMaterial mat(1.0, 0.5, 2);
  StressField f = interpolate_full(
      l, [&](const Eigen::VectorXd& x) { return sol.stress(x, mat); },
      NormalInterpMode::FaceCenter);
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 1; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int t = 0; t < 5; ++t) {
        double r = U(rng);
        std::vector<int> cl{i - 1, j}, cr{i, j};
        std::vector<double> refl{1.0, r}, refr{-1.0, r};
        double a = evaluate_stress(f, g.cell_index(cl), refl)(0, 0);
        double b = evaluate_stress(f, g.cell_index(cr), refr)(0, 0);
        CHECK(a == doctest::Approx(b).epsilon(1e-13));
      }
  // the interpolated shear jumps away from edge midpoints (nonconforming space)
  std::vector<int> cl{0, 0}, cr{1, 0};
  std::vector<double> refl{1.0, 0.7}, refr{-1.0, 0.7};
  double a = evaluate_stress(f, g.cell_index(cl), refl)(0, 1);
  double b = evaluate_stress(f, g.cell_index(cr), refr)(0, 1);
  CHECK(std::abs(a - b) > 1e-6);
}

TEST_CASE("interpolate_full reproduces fields already in the space") {
  auto l = layout2(2);
  auto inspace = [](const Eigen::VectorXd& x) {
    Eigen::Matrix2d s;
    // sigma11 in span{1,x}, sigma22 in span{1,y}, sigma12 globally linear
    s << 1.0 + 2.0 * x[0], 0.5 - x[0] + x[1], 0.5 - x[0] + x[1], -1.0 + 3.0 * x[1];
    return s;
  };
  for (auto mode : {NormalInterpMode::FaceAverage, NormalInterpMode::FaceCenter}) {
    StressField f = interpolate_full(l, inspace, mode);
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (long c = 0; c < l->grid().cell_count(); ++c) {
      std::vector<double> ref{U(rng), U(rng)};
      auto x = l->grid().to_physical(c, ref);
      Eigen::Map<const Eigen::VectorXd> xv(x.data(), 2);
      CHECK((evaluate_stress(f, c, ref) - inspace(xv)).norm() < 1e-12);
    }
  }
}

TEST_CASE("displacement interpolation at cell centers") {
  auto l1 = std::make_shared<DofLayout>(TensorGrid(1, {2}));
  DisplacementField d = nodal_interp_displacement(l1, [](const Eigen::VectorXd& x) {
    Eigen::VectorXd v(1);
    v[0] = x[0];
    return v;
  });
  CHECK(d.values[0] == doctest::Approx(0.25));
  CHECK(d.values[1] == doctest::Approx(0.75));

  auto l2 = layout2(2);
  auto sol = make_solution("e1");
  DisplacementField u = nodal_interp_displacement(l2, sol.displacement);
  std::vector<int> ci{1, 1};
  long cell = l2->grid().cell_index(ci);
  CHECK(u.values[l2->displacement_dof(cell, 0)] == doctest::Approx(0.140625));
}
