#include <CLI11.hpp>
#include <Eigen/Core>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "minmix/io.hpp"
#include "minmix/verify.hpp"

namespace {

constexpr int kExitSolver = 2;
constexpr int kExitVerify = 3;
constexpr int kExitIo = 4;

struct CommonOpts {
  double lambda = 1.0;
  double mu = 0.5;
  double tol = 1e-10;
  long max_iters = 0;
  std::string precond = "diagonal";
  bool no_pin = false;
  int quad = 3;
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--lambda", o.lambda, "Lame lambda");
  cmd->add_option("--mu", o.mu, "Lame mu");
  cmd->add_option("--tol", o.tol, "relative residual tolerance");
  cmd->add_option("--max-iters", o.max_iters, "iteration cap (0: 20x unknowns)");
  cmd->add_option("--precond", o.precond, "none|diagonal")
      ->check(CLI::IsMember({"none", "diagonal"}));
  cmd->add_flag("--no-pin", o.no_pin, "skip frame kernel pinning");
  cmd->add_option("--quad", o.quad, "Gauss degree for error norms")->check(CLI::Range(1, 4));
  cmd->add_option("--out", o.out, "output path");
  cmd->add_option("--format", o.format, "csv|md|vtk")->check(CLI::IsMember({"csv", "md", "vtk"}));
}

minmix::SolveOptions solve_options(const CommonOpts& o) {
  minmix::SolveOptions s;
  s.tol = o.tol;
  s.max_iters = o.max_iters;
  s.precond =
      o.precond == "none" ? minmix::Preconditioner::None : minmix::Preconditioner::Diagonal;
  s.pin = !o.no_pin;
  return s;
}

std::vector<int> parse_levels(const std::string& text) {
  const auto dots = text.find("..");
  int lo = 1, hi = 0;
  if (dots == std::string::npos) {
    hi = std::stoi(text);
  } else {
    lo = std::stoi(text.substr(0, dots));
    hi = std::stoi(text.substr(dots + 2));
  }
  if (lo < 1 || hi < lo) throw CLI::ValidationError("--levels", "expected L or LO..HI");
  std::vector<int> levels;
  for (int l = lo; l <= hi; ++l) levels.push_back(l);
  return levels;
}

minmix::TensorGrid parse_grid(const std::string& text, int dim_flag, int n_flag) {
  if (!text.empty()) {
    std::vector<int> cells;
    size_t pos = 0;
    while (pos < text.size()) {
      const auto x = text.find('x', pos);
      cells.push_back(std::stoi(text.substr(pos, x - pos)));
      if (x == std::string::npos) break;
      pos = x + 1;
    }
    return minmix::TensorGrid(static_cast<int>(cells.size()), cells);
  }
  return minmix::TensorGrid(dim_flag, std::vector<int>(static_cast<size_t>(dim_flag), n_flag));
}

int write_or_die(const std::string& path, const std::string& contents) {
  try {
    minmix::write_file_atomic(path, contents);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("MINMIX_THREADS"))
    Eigen::setNbThreads(std::max(1, std::atoi(threads)));

  CLI::App app{"minimal symmetric stress mixed elasticity on tensor grids"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; flags override");

  CommonOpts study_o, verify_o, export_o, solve_o;

  auto* study = app.add_subcommand("study", "convergence level sweep");
  std::string study_problem, study_levels = "5";
  study->add_option("--problem", study_problem, "e1|e2|e3|traction")->required();
  study->add_option("--levels", study_levels, "L (meaning 1..L) or LO..HI");
  std::string study_load = "center";
  study->add_option("--load", study_load, "center|gauss3 load quadrature")
      ->check(CLI::IsMember({"center", "gauss3"}));
  add_common(study, study_o);

  auto* verify = app.add_subcommand("verify", "stability checks on one grid");
  std::string verify_grid;
  int verify_dim = 2, verify_n = 4;
  verify->add_option("--grid", verify_grid, "cells per axis, e.g. 4x4");
  verify->add_option("--dim", verify_dim)->check(CLI::Range(1, 3));
  verify->add_option("--n", verify_n)->check(CLI::PositiveNumber);
  add_common(verify, verify_o);

  auto* exportc = app.add_subcommand("export", "write system matrices and fields");
  std::string export_problem = "e1";
  int export_level = 3;
  exportc->add_option("--problem", export_problem, "e1|e2|e3|traction");
  exportc->add_option("--level", export_level)->check(CLI::Range(1, 10));
  add_common(exportc, export_o);

  auto* solvec = app.add_subcommand("solve", "single solve with report");
  std::string solve_problem = "e1";
  int solve_level = 3;
  solvec->add_option("--problem", solve_problem, "e1|e2|e3|traction");
  solvec->add_option("--level", solve_level)->check(CLI::Range(1, 10));
  add_common(solvec, solve_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (study->parsed()) {
      minmix::StudyOptions opts;
      opts.solve = solve_options(study_o);
      opts.quad = study_o.quad;
      opts.load = study_load == "center" ? minmix::LoadRule::CellCenter : minmix::LoadRule::Gauss3;
      const auto levels = parse_levels(study_levels);
      const auto res = minmix::run_study(study_problem, levels, study_o.lambda, study_o.mu, opts);
      const bool md = study_o.format == "md";
      const std::string body = md ? minmix::format_markdown(res) : minmix::format_csv(res);
      const std::string path = study_o.out.empty()
                                   ? "table_" + study_problem + (md ? ".md" : ".csv")
                                   : study_o.out;
      if (int rc = write_or_die(path, body)) return rc;
      std::cout << minmix::format_markdown(res);
      if (!res.completed) {
        std::cerr << "error: " << res.message << '\n';
        return kExitSolver;
      }
      return 0;
    }

    if (verify->parsed()) {
      const auto grid = parse_grid(verify_grid, verify_dim, verify_n);
      const auto checks = minmix::run_verification(grid);
      std::cout << minmix::checks_table(checks);
      const std::string path = verify_o.out.empty() ? "verify.csv" : verify_o.out;
      if (int rc = write_or_die(path, minmix::checks_csv(checks))) return rc;
      for (const auto& c : checks)
        if (!c.pass) return kExitVerify;
      return 0;
    }

    const bool exporting = exportc->parsed();
    const CommonOpts& o = exporting ? export_o : solve_o;
    const std::string tag = exporting ? export_problem : solve_problem;
    const int level = exporting ? export_level : solve_level;

    const auto sol = minmix::make_solution(tag);
    const minmix::IsotropicMaterial mat(o.lambda, o.mu, sol.dim);
    const int N = 1 << (level - 1);
    const minmix::TensorGrid grid(sol.dim, std::vector<int>(static_cast<size_t>(sol.dim), N));
    const auto kind =
        sol.traction ? minmix::ProblemKind::Traction : minmix::ProblemKind::Displacement;
    auto sys = minmix::assemble(grid, mat, kind);
    const Eigen::VectorXd F = minmix::assemble_load(
        grid, [&](const Eigen::VectorXd& x) { return sol.load(x, mat); },
        minmix::LoadRule::CellCenter);
    const auto res = minmix::solve(sys, F, solve_options(o));
    if (!res.report.converged) {
      std::cerr << "error: solver did not converge (residual " << res.report.residual << ")\n";
      return kExitSolver;
    }
    std::cout << "unknowns " << sys.stress_size() + sys.displacement_size()
              << " constraints " << sys.constraint_count() << " iterations "
              << res.report.iterations << " residual " << res.report.residual << '\n';

    if (exporting) {
      namespace fs = std::filesystem;
      const fs::path dir = o.out.empty() ? fs::path("export_" + tag) : fs::path(o.out);
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) {
        std::cerr << "error: " << ec.message() << '\n';
        return kExitIo;
      }
      if (int rc = write_or_die((dir / "M.mtx").string(), minmix::to_matrix_market(sys.M)))
        return rc;
      if (int rc = write_or_die((dir / "B.mtx").string(), minmix::to_matrix_market(sys.B)))
        return rc;
      if (sys.constraint_count() > 0)
        if (int rc = write_or_die((dir / "C.mtx").string(), minmix::to_matrix_market(sys.C)))
          return rc;
      if (int rc = write_or_die((dir / "solution.vtk").string(),
                                minmix::to_vtk(res.sigma, res.u)))
        return rc;
    } else if (!o.out.empty()) {
      if (int rc = write_or_die(o.out, minmix::to_vtk(res.sigma, res.u))) return rc;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
}
