#include "minmix/tensor_grid.hpp"

#include <stdexcept>

namespace minmix {

namespace {

long lex_index(std::span<const int> t, std::span<const int> extents) {
  long idx = 0;
  for (size_t a = 0; a < extents.size(); ++a) {
    if (t[a] < 0 || t[a] >= extents[a]) throw std::out_of_range("multi-index out of range");
    idx = idx * extents[a] + t[a];
  }
  return idx;
}

std::vector<int> lex_multi(long idx, std::span<const int> extents) {
  if (idx < 0) throw std::out_of_range("linear index out of range");
  std::vector<int> t(extents.size());
  for (size_t a = extents.size(); a-- > 0;) {
    t[a] = static_cast<int>(idx % extents[a]);
    idx /= extents[a];
  }
  if (idx != 0) throw std::out_of_range("linear index out of range");
  return t;
}

}  // namespace

TensorGrid::TensorGrid(int dim, std::vector<int> cells_per_axis)
    : dim_(dim), cells_(std::move(cells_per_axis)) {
  if (dim_ < 1) throw std::invalid_argument("TensorGrid: dim must be >= 1");
  if (cells_.size() != static_cast<size_t>(dim_))
    throw std::invalid_argument("TensorGrid: cells_per_axis size mismatch");
  for (int na : cells_)
    if (na < 1) throw std::invalid_argument("TensorGrid: cells per axis must be >= 1");
  h_.resize(cells_.size());
  for (size_t a = 0; a < cells_.size(); ++a) h_[a] = 1.0 / cells_[a];
}

long TensorGrid::cell_count() const {
  long c = 1;
  for (int na : cells_) c *= na;
  return c;
}

long TensorGrid::vertex_count() const {
  long c = 1;
  for (int na : cells_) c *= na + 1;
  return c;
}

long TensorGrid::cell_index(std::span<const int> ci) const { return lex_index(ci, cells_); }

std::vector<int> TensorGrid::cell_multi(long cell) const { return lex_multi(cell, cells_); }

TensorGrid::CellMap TensorGrid::cell_map(long cell) const {
  auto ci = cell_multi(cell);
  CellMap m;
  m.center.resize(static_cast<size_t>(dim_));
  m.half.resize(static_cast<size_t>(dim_));
  for (int a = 0; a < dim_; ++a) {
    m.half[static_cast<size_t>(a)] = 0.5 * h_[static_cast<size_t>(a)];
    m.center[static_cast<size_t>(a)] = (ci[static_cast<size_t>(a)] + 0.5) * h_[static_cast<size_t>(a)];
  }
  return m;
}

std::vector<double> TensorGrid::to_physical(long cell, std::span<const double> ref) const {
  auto m = cell_map(cell);
  std::vector<double> x(static_cast<size_t>(dim_));
  for (int a = 0; a < dim_; ++a)
    x[static_cast<size_t>(a)] = m.center[static_cast<size_t>(a)] + m.half[static_cast<size_t>(a)] * ref[static_cast<size_t>(a)];
  return x;
}

std::vector<double> TensorGrid::to_reference(long cell, std::span<const double> x) const {
  auto m = cell_map(cell);
  std::vector<double> ref(static_cast<size_t>(dim_));
  for (int a = 0; a < dim_; ++a)
    ref[static_cast<size_t>(a)] = (x[static_cast<size_t>(a)] - m.center[static_cast<size_t>(a)]) / m.half[static_cast<size_t>(a)];
  return ref;
}

long TensorGrid::face_count(int axis) const {
  long c = 1;
  for (int a = 0; a < dim_; ++a) c *= (a == axis) ? cells_[static_cast<size_t>(a)] + 1 : cells_[static_cast<size_t>(a)];
  return c;
}

long TensorGrid::face_index(int axis, std::span<const int> t) const {
  std::vector<int> ext(cells_);
  ext[static_cast<size_t>(axis)] += 1;
  return lex_index(t, ext);
}

std::vector<int> TensorGrid::face_multi(int axis, long idx) const {
  std::vector<int> ext(cells_);
  ext[static_cast<size_t>(axis)] += 1;
  return lex_multi(idx, ext);
}

bool TensorGrid::face_is_boundary(int axis, std::span<const int> t) const {
  return t[static_cast<size_t>(axis)] == 0 || t[static_cast<size_t>(axis)] == cells_[static_cast<size_t>(axis)];
}

long TensorGrid::pair_point_count(int i, int j) const {
  if (i >= j) throw std::invalid_argument("pair axes must satisfy i < j");
  long c = 1;
  for (int a = 0; a < dim_; ++a)
    c *= (a == i || a == j) ? cells_[static_cast<size_t>(a)] + 1 : cells_[static_cast<size_t>(a)];
  return c;
}

long TensorGrid::pair_point_index(int i, int j, std::span<const int> t) const {
  if (i >= j) throw std::invalid_argument("pair axes must satisfy i < j");
  std::vector<int> ext(cells_);
  ext[static_cast<size_t>(i)] += 1;
  ext[static_cast<size_t>(j)] += 1;
  return lex_index(t, ext);
}

std::vector<int> TensorGrid::pair_point_multi(int i, int j, long idx) const {
  if (i >= j) throw std::invalid_argument("pair axes must satisfy i < j");
  std::vector<int> ext(cells_);
  ext[static_cast<size_t>(i)] += 1;
  ext[static_cast<size_t>(j)] += 1;
  return lex_multi(idx, ext);
}

bool TensorGrid::pair_point_is_boundary(int i, int j, std::span<const int> t) const {
  return t[static_cast<size_t>(i)] == 0 || t[static_cast<size_t>(i)] == cells_[static_cast<size_t>(i)] ||
         t[static_cast<size_t>(j)] == 0 || t[static_cast<size_t>(j)] == cells_[static_cast<size_t>(j)];
}

std::vector<EntityIndex> enumerate_entities(const TensorGrid& grid, EntityKind kind, int axis_a,
                                            int axis_b) {
  std::vector<EntityIndex> out;
  switch (kind) {
    case EntityKind::Cell: {
      const long nc = grid.cell_count();
      out.reserve(static_cast<size_t>(nc));
      for (long c = 0; c < nc; ++c)
        out.push_back({EntityKind::Cell, -1, -1, grid.cell_multi(c), false});
      break;
    }
    case EntityKind::AxisFace: {
      if (axis_a < 0 || axis_a >= grid.dim()) throw std::invalid_argument("bad face axis");
      const long nf = grid.face_count(axis_a);
      out.reserve(static_cast<size_t>(nf));
      for (long f = 0; f < nf; ++f) {
        auto t = grid.face_multi(axis_a, f);
        bool bdry = grid.face_is_boundary(axis_a, t);
        out.push_back({EntityKind::AxisFace, axis_a, -1, std::move(t), bdry});
      }
      break;
    }
    case EntityKind::PairPoint: {
      if (axis_a >= axis_b) throw std::invalid_argument("pair axes must satisfy i < j");
      if (axis_a < 0 || axis_b >= grid.dim()) throw std::invalid_argument("bad pair axes");
      const long np = grid.pair_point_count(axis_a, axis_b);
      out.reserve(static_cast<size_t>(np));
      for (long p = 0; p < np; ++p) {
        auto t = grid.pair_point_multi(axis_a, axis_b, p);
        bool bdry = grid.pair_point_is_boundary(axis_a, axis_b, t);
        out.push_back({EntityKind::PairPoint, axis_a, axis_b, std::move(t), bdry});
      }
      break;
    }
  }
  return out;
}

}  // namespace minmix
