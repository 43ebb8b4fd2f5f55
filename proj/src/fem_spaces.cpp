#include "minmix/fem_spaces.hpp"

#include <stdexcept>

#include "minmix/reference_element.hpp"

namespace minmix {

DofLayout::DofLayout(TensorGrid grid) : grid_(std::move(grid)) {
  const int n = grid_.dim();
  long off = 0;
  normal_offset_.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    normal_offset_[static_cast<size_t>(i)] = off;
    off += grid_.face_count(i);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      pairs_.emplace_back(i, j);
      pair_offset_.push_back(off);
      off += grid_.pair_point_count(i, j);
    }
  stress_size_ = off;
}

int DofLayout::pair_id(int i, int j) const {
  for (int p = 0; p < pair_count(); ++p)
    if (pairs_[static_cast<size_t>(p)] == std::make_pair(i, j)) return p;
  throw std::invalid_argument("pair_id: no such pair");
}

long DofLayout::pair_coeff_count(int p) const {
  auto [i, j] = pair(p);
  return grid_.pair_point_count(i, j);
}

long DofLayout::normal_dof(int axis, std::span<const int> t) const {
  return normal_offset(axis) + grid_.face_index(axis, t);
}

long DofLayout::pair_dof(int p, std::span<const int> t) const {
  auto [i, j] = pair(p);
  return pair_offset(p) + grid_.pair_point_index(i, j, t);
}

std::vector<long> DofLayout::cell_stress_dofs(long cell) const {
  const int n = grid_.dim();
  const auto ci = grid_.cell_multi(cell);
  std::vector<long> dofs;
  dofs.reserve(static_cast<size_t>(local_stress_dof_count(n)));
  std::vector<int> t(ci);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < 2; ++k) {
      t = ci;
      t[static_cast<size_t>(i)] += k;
      dofs.push_back(normal_dof(i, t));
    }
  }
  for (int p = 0; p < pair_count(); ++p) {
    auto [i, j] = pair(p);
    for (int k = 0; k < 4; ++k) {
      t = ci;
      t[static_cast<size_t>(i)] += frame_corner_offset_i(k);
      t[static_cast<size_t>(j)] += frame_corner_offset_j(k);
      dofs.push_back(pair_dof(p, t));
    }
  }
  return dofs;
}

long DofLayout::pair_span_dimension(int p) const {
  auto [i, j] = pair(p);
  long slabs = 1;
  for (int a = 0; a < dim(); ++a)
    if (a != i && a != j) slabs *= grid_.cells(a);
  return pair_coeff_count(p) - slabs;
}

Eigen::MatrixXd evaluate_stress(const StressField& field, long cell,
                                std::span<const double> ref) {
  const DofLayout& layout = *field.layout;
  const int n = layout.dim();
  const auto dofs = layout.cell_stress_dofs(cell);
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(n, n);
  int loc = 0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < 2; ++k, ++loc)
      sigma(i, i) += field.coeffs(dofs[static_cast<size_t>(loc)]) * eval_hat(k, ref[static_cast<size_t>(i)]);
  for (int p = 0; p < layout.pair_count(); ++p) {
    auto [i, j] = layout.pair(p);
    double v = 0.0;
    for (int k = 0; k < 4; ++k, ++loc)
      v += field.coeffs(dofs[static_cast<size_t>(loc)]) *
           eval_frame(k, ref[static_cast<size_t>(i)], ref[static_cast<size_t>(j)]);
    sigma(i, j) = sigma(j, i) = v;
  }
  return sigma;
}

DisplacementField discrete_divergence(const StressField& field) {
  const auto& layout = *field.layout;
  const TensorGrid& grid = layout.grid();
  const int n = grid.dim();
  DisplacementField div(field.layout);
  std::vector<double> half(static_cast<size_t>(n));
  for (int a = 0; a < n; ++a) half[static_cast<size_t>(a)] = 0.5 * grid.spacing(a);
  const Eigen::MatrixXd dloc = local_divergence_coupling(n, half);
  double vol = 1.0;
  for (int a = 0; a < n; ++a) vol *= grid.spacing(a);
  for (long c = 0; c < grid.cell_count(); ++c) {
    const auto dofs = layout.cell_stress_dofs(c);
    for (int d = 0; d < n; ++d) {
      double v = 0.0;
      for (size_t a = 0; a < dofs.size(); ++a)
        v += field.coeffs(dofs[a]) * dloc(static_cast<long>(a), d);
      div.values(layout.displacement_dof(c, d)) = v / vol;
    }
  }
  return div;
}

Eigen::VectorXd interpolate_normal(const DofLayout& layout, int axis, const ScalarFn& f,
                                   NormalInterpMode mode) {
  const TensorGrid& grid = layout.grid();
  const int n = grid.dim();
  const long nf = grid.face_count(axis);
  Eigen::VectorXd vals(nf);
  std::vector<int> tang;  // tangential axes
  for (int a = 0; a < n; ++a)
    if (a != axis) tang.push_back(a);
  const int d_tan = static_cast<int>(tang.size());
  QuadratureRule rule;
  if (mode == NormalInterpMode::FaceAverage && d_tan > 0) rule = gauss_rule(d_tan, 3);
  for (long fidx = 0; fidx < nf; ++fidx) {
    const auto t = grid.face_multi(axis, fidx);
    Eigen::VectorXd x(n);
    x(axis) = t[static_cast<size_t>(axis)] * grid.spacing(axis);
    for (int a : tang) x(a) = (t[static_cast<size_t>(a)] + 0.5) * grid.spacing(a);
    if (mode == NormalInterpMode::FaceCenter || d_tan == 0) {
      vals(fidx) = f(x);
    } else {
      double acc = 0.0, wsum = 0.0;
      Eigen::VectorXd xq = x;
      for (long q = 0; q < rule.weights.size(); ++q) {
        for (int a = 0; a < d_tan; ++a)
          xq(tang[static_cast<size_t>(a)]) =
              x(tang[static_cast<size_t>(a)]) +
              0.5 * grid.spacing(tang[static_cast<size_t>(a)]) * rule.points(q, a);
        acc += f(xq) * rule.weights(q);
        wsum += rule.weights(q);
      }
      vals(fidx) = acc / wsum;
    }
  }
  return vals;
}

Eigen::VectorXd interpolate_shear(const DofLayout& layout, int p, const ScalarFn& f) {
  const TensorGrid& grid = layout.grid();
  const int n = grid.dim();
  auto [i, j] = layout.pair(p);
  const long np = grid.pair_point_count(i, j);
  Eigen::VectorXd vals(np);
  for (long idx = 0; idx < np; ++idx) {
    const auto t = grid.pair_point_multi(i, j, idx);
    Eigen::VectorXd x(n);
    for (int a = 0; a < n; ++a)
      x(a) = (a == i || a == j) ? t[static_cast<size_t>(a)] * grid.spacing(a)
                                : (t[static_cast<size_t>(a)] + 0.5) * grid.spacing(a);
    vals(idx) = f(x);
  }
  return vals;
}

StressField interpolate_full(std::shared_ptr<const DofLayout> layout, const TensorFn& sigma,
                             NormalInterpMode mode) {
  StressField field(layout);
  const int n = layout->dim();
  for (int i = 0; i < n; ++i) {
    auto comp = [&sigma, i](const Eigen::VectorXd& x) { return sigma(x)(i, i); };
    field.coeffs.segment(layout->normal_offset(i), layout->normal_count(i)) =
        interpolate_normal(*layout, i, comp, mode);
  }
  for (int p = 0; p < layout->pair_count(); ++p) {
    auto [i, j] = layout->pair(p);
    auto comp = [&sigma, i = i, j = j](const Eigen::VectorXd& x) { return sigma(x)(i, j); };
    field.coeffs.segment(layout->pair_offset(p), layout->pair_coeff_count(p)) =
        interpolate_shear(*layout, p, comp);
  }
  return field;
}

DisplacementField nodal_interp_displacement(std::shared_ptr<const DofLayout> layout,
                                            const VectorFn& u) {
  DisplacementField field(layout);
  const TensorGrid& grid = layout->grid();
  const int n = grid.dim();
  for (long c = 0; c < grid.cell_count(); ++c) {
    const auto m = grid.cell_map(c);
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(m.center.data(), n);
    const Eigen::VectorXd uc = u(x);
    for (int d = 0; d < n; ++d) field.values(layout->displacement_dof(c, d)) = uc(d);
  }
  return field;
}

void dump_stress_csv(const StressField& field, std::ostream& os) {
  const auto& layout = *field.layout;
  const TensorGrid& grid = layout.grid();
  os << "block,indices,value\n";
  for (int i = 0; i < layout.dim(); ++i) {
    for (long f = 0; f < grid.face_count(i); ++f) {
      const auto t = grid.face_multi(i, f);
      os << "sigma_" << i + 1 << i + 1 << ",";
      for (size_t a = 0; a < t.size(); ++a) os << (a ? " " : "") << t[a];
      os << "," << field.coeffs(layout.normal_offset(i) + f) << "\n";
    }
  }
  for (int p = 0; p < layout.pair_count(); ++p) {
    auto [i, j] = layout.pair(p);
    for (long idx = 0; idx < layout.pair_coeff_count(p); ++idx) {
      const auto t = grid.pair_point_multi(i, j, idx);
      os << "p_" << i + 1 << j + 1 << ",";
      for (size_t a = 0; a < t.size(); ++a) os << (a ? " " : "") << t[a];
      os << "," << field.coeffs(layout.pair_offset(p) + idx) << "\n";
    }
  }
}

void dump_displacement_csv(const DisplacementField& field, std::ostream& os) {
  const auto& layout = *field.layout;
  const TensorGrid& grid = layout.grid();
  os << "block,indices,value\n";
  for (long c = 0; c < grid.cell_count(); ++c) {
    const auto ci = grid.cell_multi(c);
    for (int d = 0; d < grid.dim(); ++d) {
      os << "u_" << d + 1 << ",";
      for (size_t a = 0; a < ci.size(); ++a) os << (a ? " " : "") << ci[a];
      os << "," << field.values(layout.displacement_dof(c, d)) << "\n";
    }
  }
}

}  // namespace minmix
