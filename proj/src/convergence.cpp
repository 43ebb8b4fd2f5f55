#include "minmix/convergence.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "minmix/reference_element.hpp"

namespace minmix {

namespace {

void require_same_layout(const void* a, const void* b) {
  if (a != b) throw std::invalid_argument("error norm: layout mismatch");
}

double cell_volume(const TensorGrid& grid) {
  double vol = 1.0;
  for (int a = 0; a < grid.dim(); ++a) vol *= grid.spacing(a);
  return vol;
}

}  // namespace

double stress_l2_norm(const StressField& field, int g) {
  const TensorGrid& grid = field.layout->grid();
  const int n = grid.dim();
  const QuadratureRule rule = gauss_rule(n, g);
  const double jac = cell_volume(grid) / std::pow(2.0, n);
  double acc = 0.0;
  std::vector<double> ref(static_cast<size_t>(n));
  for (long c = 0; c < grid.cell_count(); ++c) {
    for (long q = 0; q < rule.weights.size(); ++q) {
      for (int a = 0; a < n; ++a) ref[static_cast<size_t>(a)] = rule.points(q, a);
      const Eigen::MatrixXd s = evaluate_stress(field, c, ref);
      acc += s.squaredNorm() * rule.weights(q) * jac;
    }
  }
  return std::sqrt(acc);
}

double displacement_l2_norm(const DisplacementField& field) {
  const double vol = cell_volume(field.layout->grid());
  return std::sqrt(vol * field.values.squaredNorm());
}

double field_l2_error(const StressField& a, const StressField& b, int g) {
  require_same_layout(a.layout.get(), b.layout.get());
  StressField d(a.layout);
  d.coeffs = a.coeffs - b.coeffs;
  return stress_l2_norm(d, g);
}

double field_l2_error(const DisplacementField& a, const DisplacementField& b) {
  require_same_layout(a.layout.get(), b.layout.get());
  DisplacementField d(a.layout);
  d.values = a.values - b.values;
  return displacement_l2_norm(d);
}

double div_l2_error(const StressField& a, const StressField& b) {
  require_same_layout(a.layout.get(), b.layout.get());
  StressField d(a.layout);
  d.coeffs = a.coeffs - b.coeffs;
  return displacement_l2_norm(discrete_divergence(d));
}

double displacement_error_exact(const DisplacementField& uh, const VectorFn& u, int g) {
  const TensorGrid& grid = uh.layout->grid();
  const int n = grid.dim();
  const QuadratureRule rule = gauss_rule(n, g);
  const double jac = cell_volume(grid) / std::pow(2.0, n);
  double acc = 0.0;
  Eigen::VectorXd x(n);
  for (long c = 0; c < grid.cell_count(); ++c) {
    const auto m = grid.cell_map(c);
    const Eigen::VectorXd uc = uh.values.segment(uh.layout->displacement_dof(c, 0), n);
    for (long q = 0; q < rule.weights.size(); ++q) {
      for (int a = 0; a < n; ++a)
        x(a) = m.center[static_cast<size_t>(a)] + m.half[static_cast<size_t>(a)] * rule.points(q, a);
      acc += (u(x) - uc).squaredNorm() * rule.weights(q) * jac;
    }
  }
  return std::sqrt(acc);
}

StudyResult run_study(const std::string& tag, const std::vector<int>& levels, double lambda,
                      double mu, const StudyOptions& options) {
  for (size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1]) throw std::invalid_argument("run_study: levels must ascend");
  const ManufacturedSolution sol = make_solution(tag);
  const IsotropicMaterial mat(lambda, mu, sol.dim);
  const ProblemKind kind = sol.traction ? ProblemKind::Traction : ProblemKind::Displacement;

  StudyResult out;
  out.tag = tag;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double prev_u = nan, prev_s = nan, prev_d = nan;
  for (int level : levels) {
    if (level < 1) throw std::invalid_argument("run_study: level must be >= 1");
    const int N = 1 << (level - 1);
    const TensorGrid grid(sol.dim, std::vector<int>(static_cast<size_t>(sol.dim), N));
    SaddleSystem sys = assemble(grid, mat, kind);
    const Eigen::VectorXd F = assemble_load(
        grid, [&](const Eigen::VectorXd& x) { return sol.load(x, mat); }, options.load);
    const SolveResult res = solve(sys, F, options.solve);
    if (!res.report.converged) {
      out.message = "solver did not converge at level " + std::to_string(level);
      return out;
    }
    const DisplacementField Ihu = nodal_interp_displacement(sys.layout, sol.displacement);
    const StressField Ihs = interpolate_full(
        sys.layout, [&](const Eigen::VectorXd& x) { return sol.stress(x, mat); }, options.interp);

    ErrorRecord rec;
    rec.level = level;
    rec.err_u = field_l2_error(Ihu, res.u);
    rec.err_sigma = field_l2_error(Ihs, res.sigma, options.quad);
    rec.err_div = div_l2_error(Ihs, res.sigma);
    const bool first = out.records.empty();
    rec.ord_u = first ? nan : std::log2(prev_u / rec.err_u);
    rec.ord_sigma = first ? nan : std::log2(prev_s / rec.err_sigma);
    rec.ord_div = first ? nan : std::log2(prev_d / rec.err_div);
    prev_u = rec.err_u;
    prev_s = rec.err_sigma;
    prev_d = rec.err_div;
    out.records.push_back(rec);
  }
  out.completed = true;
  return out;
}

namespace {

std::string fmt(double v, int prec) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(prec);
  os << v;
  return os.str();
}

std::string ord_str(double v) { return std::isnan(v) ? "" : fmt(v, 1); }

}  // namespace

std::string format_markdown(const StudyResult& study) {
  std::ostringstream os;
  os << "| level | $\\|I_hu-u_h\\|_0$ | order | $\\|I_h\\sigma-\\sigma_h\\|_0$ | order | "
        "$\\|\\mathrm{div}(I_h\\sigma-\\sigma_h)\\|_0$ | order |\n";
  os << "|---|---|---|---|---|---|---|\n";
  for (const auto& r : study.records)
    os << "| " << r.level << " | " << fmt(r.err_u, 5) << " | " << ord_str(r.ord_u) << " | "
       << fmt(r.err_sigma, 5) << " | " << ord_str(r.ord_sigma) << " | " << fmt(r.err_div, 8)
       << " | " << ord_str(r.ord_div) << " |\n";
  return os.str();
}

std::string format_csv(const StudyResult& study) {
  std::ostringstream os;
  os << "level,err_u,ord_u,err_sigma,ord_sigma,err_div,ord_div\n";
  for (const auto& r : study.records)
    os << r.level << ',' << fmt(r.err_u, 5) << ',' << ord_str(r.ord_u) << ',' << fmt(r.err_sigma, 5)
       << ',' << ord_str(r.ord_sigma) << ',' << fmt(r.err_div, 8) << ',' << ord_str(r.ord_div)
       << '\n';
  return os.str();
}

}  // namespace minmix
