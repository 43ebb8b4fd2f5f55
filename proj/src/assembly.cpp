#include "minmix/assembly.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "minmix/reference_element.hpp"

namespace minmix {

namespace {

using Triplet = Eigen::Triplet<double>;

std::vector<double> half_lengths(const TensorGrid& grid) {
  std::vector<double> half(static_cast<size_t>(grid.dim()));
  for (int a = 0; a < grid.dim(); ++a) half[static_cast<size_t>(a)] = 0.5 * grid.spacing(a);
  return half;
}

Eigen::SparseMatrix<double> assemble_stress_gram(const DofLayout& layout, double lambda,
                                                 double mu) {
  const TensorGrid& grid = layout.grid();
  const auto half = half_lengths(grid);
  const Eigen::MatrixXd loc = local_compliance_gram(grid.dim(), lambda, mu, half);
  const long ns = layout.stress_size();
  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(grid.cell_count() * loc.size()));
  for (long c = 0; c < grid.cell_count(); ++c) {
    const auto dofs = layout.cell_stress_dofs(c);
    for (size_t a = 0; a < dofs.size(); ++a)
      for (size_t b = 0; b < dofs.size(); ++b)
        trips.emplace_back(static_cast<int>(dofs[a]), static_cast<int>(dofs[b]),
                           loc(static_cast<long>(a), static_cast<long>(b)));
  }
  Eigen::SparseMatrix<double> M(ns, ns);
  M.setFromTriplets(trips.begin(), trips.end());
  M.makeCompressed();
  return M;
}

}  // namespace

SaddleSystem assemble(const TensorGrid& grid, const IsotropicMaterial& material,
                      ProblemKind problem) {
  if (material.dim != grid.dim())
    throw std::invalid_argument("assemble: material dimension mismatch");
  if (problem == ProblemKind::Traction && grid.dim() != 2)
    throw std::invalid_argument("assemble: traction problem requires dim = 2");

  SaddleSystem sys;
  sys.layout = std::make_shared<const DofLayout>(grid);
  sys.problem = problem;
  const DofLayout& layout = *sys.layout;
  const int n = grid.dim();
  const long ns = layout.stress_size();
  const long nu = layout.displacement_size();

  sys.M = assemble_stress_gram(layout, material.lambda, material.mu);

  const auto half = half_lengths(grid);
  const Eigen::MatrixXd dloc = local_divergence_coupling(n, half);
  std::vector<Triplet> btrips;
  btrips.reserve(static_cast<size_t>(grid.cell_count() * dloc.size()));
  for (long c = 0; c < grid.cell_count(); ++c) {
    const auto dofs = layout.cell_stress_dofs(c);
    for (int d = 0; d < n; ++d) {
      const long row = layout.displacement_dof(c, d);
      for (size_t a = 0; a < dofs.size(); ++a) {
        const double v = dloc(static_cast<long>(a), d);
        if (v != 0.0)
          btrips.emplace_back(static_cast<int>(row), static_cast<int>(dofs[a]), v);
      }
    }
  }
  sys.B.resize(nu, ns);
  sys.B.setFromTriplets(btrips.begin(), btrips.end());
  sys.B.makeCompressed();

  sys.F = Eigen::VectorXd::Zero(nu);
  if (problem == ProblemKind::Traction) {
    sys.C = traction_constraints(layout);
  } else {
    sys.C.resize(0, ns + nu);
  }
  return sys;
}

Eigen::VectorXd assemble_load(const TensorGrid& grid, const VectorFn& f, LoadRule rule) {
  const int n = grid.dim();
  const DofLayout layout(grid);
  Eigen::VectorXd F = Eigen::VectorXd::Zero(layout.displacement_size());
  double vol = 1.0;
  for (int a = 0; a < n; ++a) vol *= grid.spacing(a);
  if (rule == LoadRule::CellCenter) {
    for (long c = 0; c < grid.cell_count(); ++c) {
      const auto m = grid.cell_map(c);
      const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(m.center.data(), n);
      const Eigen::VectorXd fv = f(x) * vol;
      for (int d = 0; d < n; ++d) F(layout.displacement_dof(c, d)) = fv(d);
    }
  } else {
    const QuadratureRule rule3 = gauss_rule(n, 3);
    const double jac = vol / std::pow(2.0, n);
    Eigen::VectorXd x(n);
    for (long c = 0; c < grid.cell_count(); ++c) {
      const auto m = grid.cell_map(c);
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
      for (long q = 0; q < rule3.weights.size(); ++q) {
        for (int a = 0; a < n; ++a)
          x(a) = m.center[static_cast<size_t>(a)] + m.half[static_cast<size_t>(a)] * rule3.points(q, a);
        acc += f(x) * rule3.weights(q);
      }
      for (int d = 0; d < n; ++d) F(layout.displacement_dof(c, d)) = acc(d) * jac;
    }
  }
  return F;
}

Eigen::SparseMatrix<double> traction_constraints(const DofLayout& layout) {
  const TensorGrid& grid = layout.grid();
  if (grid.dim() != 2) throw std::invalid_argument("traction_constraints: dim must be 2");
  const long ns = layout.stress_size();
  const long nu = layout.displacement_size();
  const int nx = grid.cells(0), ny = grid.cells(1);
  std::vector<Triplet> trips;
  int row = 0;

  // (a) boundary normal face DOFs (sigma_ii constant on the face)
  for (int axis = 0; axis < 2; ++axis) {
    for (long fidx = 0; fidx < grid.face_count(axis); ++fidx) {
      const auto t = grid.face_multi(axis, fidx);
      if (!grid.face_is_boundary(axis, t)) continue;
      trips.emplace_back(row++, static_cast<int>(layout.normal_offset(axis) + fidx), 1.0);
    }
  }

  // (b) midpoint rows p(e1) + p(e2) = 0 on boundary edges; the closed chain
  // around the boundary makes one row redundant, so the last is dropped
  const int p12 = layout.pair_id(0, 1);
  std::vector<std::pair<long, long>> edges;
  for (int i = 0; i < nx; ++i)
    for (int j : {0, ny}) {
      const int a[2] = {i, j}, b[2] = {i + 1, j};
      edges.emplace_back(layout.pair_dof(p12, a), layout.pair_dof(p12, b));
    }
  for (int j = 0; j < ny; ++j)
    for (int i : {0, nx}) {
      const int a[2] = {i, j}, b[2] = {i, j + 1};
      edges.emplace_back(layout.pair_dof(p12, a), layout.pair_dof(p12, b));
    }
  edges.pop_back();
  for (const auto& [d1, d2] : edges) {
    trips.emplace_back(row, static_cast<int>(d1), 1.0);
    trips.emplace_back(row, static_cast<int>(d2), 1.0);
    ++row;
  }

  // (c) rigid-motion rows on the displacement block
  const double vol = grid.spacing(0) * grid.spacing(1);
  for (int m = 0; m < 3; ++m) {
    for (long c = 0; c < grid.cell_count(); ++c) {
      const auto cm = grid.cell_map(c);
      const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(cm.center.data(), 2);
      const Eigen::VectorXd w = rigid_motion(m, x);
      for (int d = 0; d < 2; ++d)
        if (w(d) != 0.0)
          trips.emplace_back(row, static_cast<int>(ns + layout.displacement_dof(c, d)),
                             w(d) * vol);
    }
    ++row;
  }

  Eigen::SparseMatrix<double> C(row, ns + nu);
  C.setFromTriplets(trips.begin(), trips.end());
  C.makeCompressed();
  return C;
}

Eigen::SparseMatrix<double> stress_l2_gram(const DofLayout& layout) {
  // lambda = 0 turns the compliance into the identity map
  return assemble_stress_gram(layout, 0.0, 0.5);
}

}  // namespace minmix
