#include "minmix/verify.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace minmix {

namespace {

constexpr long kDenseCap = 5000;

double grid_volume_per_cell(const TensorGrid& grid) {
  double vol = 1.0;
  for (int a = 0; a < grid.dim(); ++a) vol *= grid.spacing(a);
  return vol;
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& A, const std::vector<long>& keep) {
  Eigen::MatrixXd out(A.rows(), static_cast<long>(keep.size()));
  for (size_t k = 0; k < keep.size(); ++k) out.col(static_cast<long>(k)) = A.col(keep[k]);
  return out;
}

std::vector<long> unpinned_dofs(const DofLayout& layout) {
  const auto pinned = pinned_frame_dofs(layout);
  std::vector<char> drop(static_cast<size_t>(layout.stress_size()), 0);
  for (long d : pinned) drop[static_cast<size_t>(d)] = 1;
  std::vector<long> keep;
  keep.reserve(static_cast<size_t>(layout.stress_size()) - pinned.size());
  for (long d = 0; d < layout.stress_size(); ++d)
    if (!drop[static_cast<size_t>(d)]) keep.push_back(d);
  return keep;
}

// basis of the Euclidean orthogonal complement of the frame kernel
Eigen::MatrixXd kernel_complement(const DofLayout& layout) {
  const Eigen::MatrixXd K = frame_kernel_basis(layout);
  const long ns = layout.stress_size();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(K);
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(ns, ns);
  return Q.rightCols(ns - K.cols());
}

struct DenseBlocks {
  Eigen::MatrixXd B;   // displacement x stress
  Eigen::MatrixXd G;   // H(div_h) stress Gram
  Eigen::MatrixXd G0;  // plain L2 stress Gram
  Eigen::MatrixXd M;   // compliance Gram
  double vol = 0.0;
};

DenseBlocks dense_blocks(const TensorGrid& grid, const IsotropicMaterial& mat,
                         ProblemKind problem, SaddleSystem& sys) {
  sys = assemble(grid, mat, problem);
  if (sys.stress_size() > kDenseCap)
    throw std::invalid_argument("dense verification: system too large");
  DenseBlocks d;
  d.B = Eigen::MatrixXd(sys.B);
  d.M = Eigen::MatrixXd(sys.M);
  d.G0 = Eigen::MatrixXd(stress_l2_gram(*sys.layout));
  d.vol = grid_volume_per_cell(grid);
  d.G = d.G0 + d.B.transpose() * d.B / d.vol;
  return d;
}

double smallest_generalized_eigenvalue(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("generalized eigensolve failed");
  return es.eigenvalues().minCoeff();
}

// nodal data of the 2x2 macro-element machinery; cells ordered BL, BR, TL,
// TR with x/y components interleaved
const double kSigma[5][5] = {
    {-1.0, 0.0, 0.0, 0.0, 0.0},
    {0.0, 1.0, 0.0, 0.0, 0.0},
    {-0.5, -0.5, -1.0, -0.5, 0.5},
    {-0.5, -0.5, -1.0, -0.5, -0.5},
    {0.0, 0.0, 0.0, -1.0, 0.0},
};
const double kDivRange[5][8] = {
    {-1, 0, 1, 0, 0, 0, 0, 0},
    {0, 0, 0, 0, 1, 0, -1, 0},
    {-1, -1, 0, 1, 0, 0, 1, 0},
    {-1, -1, 0, 0, 0, 0, 1, 1},
    {0, -1, 0, 0, 0, 1, 0, 0},
};
const double kRigid[3][8] = {
    {1, 0, 1, 0, 1, 0, 1, 0},
    {0, 1, 0, 1, 0, 1, 0, 1},
    {-1, 1, -1, -1, 1, 1, 1, -1},
};

}  // namespace

StressField bb_witness(const DisplacementField& v) {
  const DofLayout& layout = *v.layout;
  const TensorGrid& grid = layout.grid();
  const int n = grid.dim();
  StressField tau(v.layout);
  std::vector<int> t;
  for (int axis = 0; axis < n; ++axis) {
    const double h = grid.spacing(axis);
    for (long f = 0; f < grid.face_count(axis); ++f) {
      t = grid.face_multi(axis, f);
      const int upto = t[static_cast<size_t>(axis)];
      double acc = 0.0;
      for (int m = 0; m < upto; ++m) {
        t[static_cast<size_t>(axis)] = m;  // reuse as a cell multi-index
        const long cell = grid.cell_index(t);
        acc += v.values(layout.displacement_dof(cell, axis)) * h;
      }
      tau.coeffs(layout.normal_offset(axis) + f) = acc;
    }
  }
  return tau;
}

Eigen::MatrixXd frame_kernel_basis(const DofLayout& layout) {
  const TensorGrid& grid = layout.grid();
  long nk = 0;
  for (int p = 0; p < layout.pair_count(); ++p)
    nk += layout.pair_coeff_count(p) - layout.pair_span_dimension(p);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(layout.stress_size(), nk);

  long col = 0;
  for (int p = 0; p < layout.pair_count(); ++p) {
    const auto [i, j] = layout.pair(p);
    // slab index: the multi-index entries outside {i, j}
    std::map<std::vector<int>, long> slab_col;
    for (long idx = 0; idx < grid.pair_point_count(i, j); ++idx) {
      const auto t = grid.pair_point_multi(i, j, idx);
      std::vector<int> slab;
      for (int a = 0; a < grid.dim(); ++a)
        if (a != i && a != j) slab.push_back(t[static_cast<size_t>(a)]);
      auto [it, inserted] = slab_col.try_emplace(slab, col);
      if (inserted) ++col;
      const int sign = ((t[static_cast<size_t>(i)] + t[static_cast<size_t>(j)]) % 2 == 0) ? 1 : -1;
      K(layout.pair_offset(p) + idx, it->second) = sign;
    }
  }
  return K;
}

double infsup_constant(const TensorGrid& grid, ProblemKind problem, KernelHandling kernel) {
  const IsotropicMaterial mat(1.0, 0.5, grid.dim());
  SaddleSystem sys;
  const DenseBlocks d = dense_blocks(grid, mat, problem, sys);
  const DofLayout& layout = *sys.layout;
  const long ns = layout.stress_size();
  const long nu = layout.displacement_size();

  Eigen::MatrixXd Zs;
  if (kernel == KernelHandling::Pin) {
    Zs = select_columns(Eigen::MatrixXd::Identity(ns, ns), unpinned_dofs(layout));
  } else {
    Zs = kernel_complement(layout);
  }
  Eigen::MatrixXd Zu = Eigen::MatrixXd::Identity(nu, nu);

  if (problem == ProblemKind::Traction) {
    const Eigen::MatrixXd C = Eigen::MatrixXd(sys.C);
    std::vector<long> srow, urow;
    for (long r = 0; r < C.rows(); ++r) {
      if (C.row(r).head(ns).norm() > 0.0)
        srow.push_back(r);
      else
        urow.push_back(r);
    }
    Eigen::MatrixXd Cs(static_cast<long>(srow.size()), Zs.cols());
    for (size_t k = 0; k < srow.size(); ++k)
      Cs.row(static_cast<long>(k)) = C.row(srow[k]).head(ns) * Zs;
    Eigen::FullPivLU<Eigen::MatrixXd> lus(Cs);
    Zs = Zs * lus.kernel();

    Eigen::MatrixXd Cu(static_cast<long>(urow.size()), nu);
    for (size_t k = 0; k < urow.size(); ++k) Cu.row(static_cast<long>(k)) = C.row(urow[k]).tail(nu);
    Eigen::FullPivLU<Eigen::MatrixXd> luu(Cu);
    Zu = luu.kernel();
  }

  const Eigen::MatrixXd Gr = Zs.transpose() * d.G * Zs;
  const Eigen::MatrixXd Br = Zu.transpose() * d.B * Zs;
  const Eigen::MatrixXd Wr = d.vol * (Zu.transpose() * Zu);
  const Eigen::MatrixXd S = Br * Gr.llt().solve(Br.transpose());
  return std::sqrt(std::max(smallest_generalized_eigenvalue(S, Wr), 0.0));
}

double ellipticity_constant(const TensorGrid& grid, const IsotropicMaterial& material) {
  SaddleSystem sys;
  const DenseBlocks d = dense_blocks(grid, material, ProblemKind::Displacement, sys);
  const DofLayout& layout = *sys.layout;
  const Eigen::MatrixXd Zs =
      select_columns(Eigen::MatrixXd::Identity(layout.stress_size(), layout.stress_size()),
                     unpinned_dofs(layout));
  Eigen::FullPivLU<Eigen::MatrixXd> lu(d.B * Zs);
  const Eigen::MatrixXd Zb = Zs * lu.kernel();
  return smallest_generalized_eigenvalue(Zb.transpose() * d.M * Zb,
                                         Zb.transpose() * d.G0 * Zb);
}

StressField macro_stress_mode(std::shared_ptr<const DofLayout> layout, int ci, int cj, int m) {
  const TensorGrid& grid = layout->grid();
  if (grid.dim() != 2) throw std::invalid_argument("macro_stress_mode: dim must be 2");
  if (m < 1 || m > 5) throw std::out_of_range("macro_stress_mode: m in 1..5");
  if (ci % 2 != 0 || cj % 2 != 0 || ci + 1 >= grid.cells(0) + 1 || cj + 1 >= grid.cells(1) + 1 ||
      ci + 2 > grid.cells(0) || cj + 2 > grid.cells(1))
    throw std::out_of_range("macro_stress_mode: macro outside grid");
  const double h = grid.spacing(0);
  if (std::abs(grid.spacing(1) - h) > 1e-14 * h)
    throw std::invalid_argument("macro_stress_mode: requires square cells");

  StressField s(layout);
  const double* c = kSigma[m - 1];
  const int f11lo[2] = {ci + 1, cj};
  const int f11up[2] = {ci + 1, cj + 1};
  const int pmid[2] = {ci + 1, cj + 1};
  const int f22l[2] = {ci, cj + 1};
  const int f22r[2] = {ci + 1, cj + 1};
  s.coeffs(layout->normal_dof(0, f11lo)) = c[0] * h;
  s.coeffs(layout->normal_dof(0, f11up)) = c[1] * h;
  s.coeffs(layout->pair_dof(layout->pair_id(0, 1), pmid)) = c[2] * h;
  s.coeffs(layout->normal_dof(1, f22l)) = c[3] * h;
  s.coeffs(layout->normal_dof(1, f22r)) = c[4] * h;
  return s;
}

MacroReport macro_checks(const TensorGrid& grid) {
  if (grid.dim() != 2) throw std::invalid_argument("macro_checks: dim must be 2");
  if (grid.cells(0) % 2 != 0 || grid.cells(1) % 2 != 0)
    throw std::invalid_argument("macro_checks: N must be even");
  const auto layout = std::make_shared<const DofLayout>(grid);
  MacroReport rep;

  for (int ci = 0; ci < grid.cells(0); ci += 2)
    for (int cj = 0; cj < grid.cells(1); cj += 2) {
      ++rep.macro_count;
      long cells[4];  // BL, BR, TL, TR
      for (int b = 0; b < 4; ++b) {
        const int t[2] = {ci + (b % 2), cj + (b / 2)};
        cells[b] = grid.cell_index(t);
      }
      for (int m = 1; m <= 5; ++m) {
        const StressField s = macro_stress_mode(layout, ci, cj, m);
        const DisplacementField dv = discrete_divergence(s);
        Eigen::VectorXd want = Eigen::VectorXd::Zero(layout->displacement_size());
        for (int b = 0; b < 4; ++b)
          for (int comp = 0; comp < 2; ++comp)
            want(layout->displacement_dof(cells[b], comp)) = kDivRange[m - 1][2 * b + comp];
        rep.max_div_err = std::max(rep.max_div_err, (dv.values - want).lpNorm<Eigen::Infinity>());

        // normal trace on the macro boundary
        double tr = 0.0;
        for (int k : {0, 2}) {
          for (int off = 0; off < 2; ++off) {
            const int fx[2] = {ci + k, cj + off};
            const int fy[2] = {ci + off, cj + k};
            tr = std::max(tr, std::abs(s.coeffs(layout->normal_dof(0, fx))));
            tr = std::max(tr, std::abs(s.coeffs(layout->normal_dof(1, fy))));
          }
        }
        rep.max_trace_err = std::max(rep.max_trace_err, tr);
      }
    }

  // rigid-motion basis orthogonality and the L2 projection onto its span
  Eigen::MatrixXd Phi(8, 3), Psi(8, 5);
  for (int m = 0; m < 3; ++m)
    for (int k = 0; k < 8; ++k) Phi(k, m) = kRigid[m][k];
  for (int m = 0; m < 5; ++m)
    for (int k = 0; k < 8; ++k) Psi(k, m) = kDivRange[m][k];
  const Eigen::MatrixXd gram = Phi.transpose() * Phi;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b) rep.max_orth_err = std::max(rep.max_orth_err, std::abs(gram(a, b)));

  const Eigen::MatrixXd P = Phi * gram.ldlt().solve(Phi.transpose());
  double pe = (P * P - P).lpNorm<Eigen::Infinity>();
  pe = std::max(pe, (P - P.transpose()).lpNorm<Eigen::Infinity>());
  for (int m = 0; m < 3; ++m)
    pe = std::max(pe, (P * Phi.col(m) - Phi.col(m)).lpNorm<Eigen::Infinity>());
  std::mt19937 rng(12345u);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd v(8);
    for (int k = 0; k < 8; ++k) v(k) = unif(rng);
    pe = std::max(pe, (Phi.transpose() * (v - P * v)).lpNorm<Eigen::Infinity>());
  }
  rep.max_proj_err = pe;

  Eigen::MatrixXd full(8, 8);
  full << Phi, Psi;
  const bool independent =
      Eigen::JacobiSVD<Eigen::MatrixXd>(full).singularValues().minCoeff() > 1e-8;

  rep.pass = independent && rep.max_div_err <= 1e-12 && rep.max_trace_err <= 1e-12 &&
             rep.max_orth_err <= 1e-12 && rep.max_proj_err <= 1e-12;
  return rep;
}

std::vector<CheckResult> run_verification(const TensorGrid& grid, unsigned seed) {
  std::vector<CheckResult> out;
  const auto layout = std::make_shared<const DofLayout>(grid);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  double div_err = 0.0, ratio = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    DisplacementField v(layout);
    for (long k = 0; k < v.values.size(); ++k) v.values(k) = unif(rng);
    const StressField tau = bb_witness(v);
    const DisplacementField dv = discrete_divergence(tau);
    div_err = std::max(div_err, (dv.values - v.values).lpNorm<Eigen::Infinity>());
    const double tn = stress_l2_norm(tau, 3);
    const double dn = displacement_l2_norm(dv);
    const double vn = displacement_l2_norm(v);
    ratio = std::max(ratio, (tn * tn + dn * dn) / (vn * vn));
  }
  out.push_back({"bb_witness_div_exact", div_err, 1e-13, div_err <= 1e-13});
  out.push_back({"bb_witness_norm_ratio", ratio, 2.0, ratio <= 2.0 + 1e-12});

  const Eigen::MatrixXd K = frame_kernel_basis(*layout);
  long expected = 0;
  for (int p = 0; p < layout->pair_count(); ++p)
    expected += layout->pair_coeff_count(p) - layout->pair_span_dimension(p);
  out.push_back({"frame_kernel_dimension", static_cast<double>(K.cols()),
                 static_cast<double>(expected), K.cols() == expected});

  const double beta = infsup_constant(grid, ProblemKind::Displacement);
  out.push_back({"infsup_displacement", beta, 1.0 / std::sqrt(2.0), beta >= 0.707});

  const double ce = ellipticity_constant(grid, IsotropicMaterial(1.0, 0.5, grid.dim()));
  out.push_back({"ellipticity", ce, 1.0 / 3.0, ce >= 1.0 / 3.0 - 1e-10});

  if (grid.dim() == 2 && grid.cells(0) % 2 == 0 && grid.cells(1) % 2 == 0) {
    const double bt = infsup_constant(grid, ProblemKind::Traction);
    out.push_back({"infsup_traction", bt, 0.0, bt > 0.0});
    const MacroReport mr = macro_checks(grid);
    out.push_back({"macro_divergence", mr.max_div_err, 1e-12, mr.max_div_err <= 1e-12});
    out.push_back({"macro_boundary_trace", mr.max_trace_err, 1e-12, mr.max_trace_err <= 1e-12});
    out.push_back({"macro_rigid_orthogonality", mr.max_orth_err, 1e-12, mr.max_orth_err <= 1e-12});
    out.push_back({"macro_projection", mr.max_proj_err, 1e-12, mr.pass});
  }
  return out;
}

std::string checks_csv(const std::vector<CheckResult>& checks) {
  std::ostringstream os;
  os << "name,value,bound,pass\n";
  for (const auto& c : checks)
    os << c.name << ',' << c.value << ',' << c.bound << ',' << (c.pass ? "pass" : "fail") << '\n';
  return os.str();
}

std::string checks_table(const std::vector<CheckResult>& checks) {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.pass ? "[pass] " : "[FAIL] ") << c.name;
    for (size_t k = c.name.size(); k < 28; ++k) os << ' ';
    os << " value=" << c.value << " bound=" << c.bound << '\n';
  }
  return os.str();
}

}  // namespace minmix
