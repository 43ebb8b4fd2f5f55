#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "minmix/io.hpp"
#include "minmix/verify.hpp"

namespace py = pybind11;
using namespace minmix;

namespace {

TensorGrid make_grid(const std::vector<int>& cells) {
  return TensorGrid(static_cast<int>(cells.size()), cells);
}

py::dict record_dict(const ErrorRecord& r) {
  py::dict d;
  d["level"] = r.level;
  d["err_u"] = r.err_u;
  d["err_sigma"] = r.err_sigma;
  d["err_div"] = r.err_div;
  d["ord_u"] = r.ord_u;
  d["ord_sigma"] = r.ord_sigma;
  d["ord_div"] = r.ord_div;
  return d;
}

py::dict sparse_dict(const Eigen::SparseMatrix<double>& A) {
  const long nnz = A.nonZeros();
  Eigen::VectorXi rows(nnz), cols(nnz);
  Eigen::VectorXd vals(nnz);
  long k = 0;
  for (int o = 0; o < A.outerSize(); ++o)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, o); it; ++it) {
      rows(k) = static_cast<int>(it.row());
      cols(k) = static_cast<int>(it.col());
      vals(k) = it.value();
      ++k;
    }
  py::dict d;
  d["shape"] = py::make_tuple(A.rows(), A.cols());
  d["rows"] = rows;
  d["cols"] = cols;
  d["values"] = vals;
  return d;
}

SaddleSystem assemble_tag(const std::string& tag, int level, double lambda, double mu) {
  const ManufacturedSolution sol = make_solution(tag);
  const int N = 1 << (level - 1);
  const TensorGrid grid(sol.dim, std::vector<int>(static_cast<size_t>(sol.dim), N));
  const IsotropicMaterial mat(lambda, mu, sol.dim);
  return assemble(grid, mat, sol.traction ? ProblemKind::Traction : ProblemKind::Displacement);
}

}  // namespace

PYBIND11_MODULE(_minmix, m) {
  m.doc() = "minimal symmetric stress mixed elements on tensor grids";

  py::class_<TensorGrid>(m, "TensorGrid")
      .def(py::init(&make_grid), py::arg("cells"))
      .def_property_readonly("dim", &TensorGrid::dim)
      .def("cells", &TensorGrid::cells, py::arg("axis"))
      .def("spacing", &TensorGrid::spacing, py::arg("axis"))
      .def_property_readonly("cell_count", &TensorGrid::cell_count);

  m.def(
      "dof_counts",
      [](const std::vector<int>& cells) {
        const DofLayout layout(make_grid(cells));
        py::dict d;
        d["stress"] = layout.stress_size();
        d["displacement"] = layout.displacement_size();
        return d;
      },
      py::arg("cells"));

  m.def(
      "run_study",
      [](const std::string& tag, const std::vector<int>& levels, double lambda, double mu,
         const std::string& load, double tol) {
        StudyOptions opts;
        opts.load = load == "gauss3" ? LoadRule::Gauss3 : LoadRule::CellCenter;
        opts.solve.tol = tol;
        const StudyResult res = run_study(tag, levels, lambda, mu, opts);
        if (!res.completed) throw std::runtime_error(res.message);
        py::list out;
        for (const auto& r : res.records) out.append(record_dict(r));
        return out;
      },
      py::arg("tag"), py::arg("levels"), py::arg("lambda_") = 1.0, py::arg("mu") = 0.5,
      py::arg("load") = "center", py::arg("tol") = 1e-10);

  m.def(
      "solve_problem",
      [](const std::string& tag, int level, double lambda, double mu, double tol) {
        const ManufacturedSolution sol = make_solution(tag);
        const IsotropicMaterial mat(lambda, mu, sol.dim);
        SaddleSystem sys = assemble_tag(tag, level, lambda, mu);
        const Eigen::VectorXd F = assemble_load(
            sys.layout->grid(), [&](const Eigen::VectorXd& x) { return sol.load(x, mat); },
            LoadRule::CellCenter);
        SolveOptions opts;
        opts.tol = tol;
        const SolveResult res = solve(sys, F, opts);
        py::dict d;
        d["converged"] = res.report.converged;
        d["iterations"] = res.report.iterations;
        d["residual"] = res.report.residual;
        d["sigma"] = res.sigma.coeffs;
        d["u"] = res.u.values;
        return d;
      },
      py::arg("tag"), py::arg("level"), py::arg("lambda_") = 1.0, py::arg("mu") = 0.5,
      py::arg("tol") = 1e-10);

  m.def(
      "system_matrices",
      [](const std::string& tag, int level, double lambda, double mu) {
        const SaddleSystem sys = assemble_tag(tag, level, lambda, mu);
        py::dict d;
        d["M"] = sparse_dict(sys.M);
        d["B"] = sparse_dict(sys.B);
        d["C"] = sparse_dict(sys.C);
        return d;
      },
      py::arg("tag"), py::arg("level"), py::arg("lambda_") = 1.0, py::arg("mu") = 0.5);

  m.def(
      "run_verification",
      [](const std::vector<int>& cells) {
        py::list out;
        for (const auto& c : run_verification(make_grid(cells))) {
          py::dict d;
          d["name"] = c.name;
          d["value"] = c.value;
          d["bound"] = c.bound;
          d["pass"] = c.pass;
          out.append(d);
        }
        return out;
      },
      py::arg("cells"));

  m.def(
      "infsup_constant",
      [](const std::vector<int>& cells, const std::string& problem) {
        return infsup_constant(make_grid(cells), problem == "traction" ? ProblemKind::Traction
                                                                       : ProblemKind::Displacement);
      },
      py::arg("cells"), py::arg("problem") = "displacement");

  m.def(
      "ellipticity_constant",
      [](const std::vector<int>& cells, double lambda, double mu) {
        const TensorGrid grid = make_grid(cells);
        return ellipticity_constant(grid, IsotropicMaterial(lambda, mu, grid.dim()));
      },
      py::arg("cells"), py::arg("lambda_") = 1.0, py::arg("mu") = 0.5);
}
