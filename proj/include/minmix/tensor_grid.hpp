#pragma once

#include <span>
#include <string>
#include <vector>

namespace minmix {

/// Uniform axis-aligned grid of the unit box [0,1]^n.
///
/// Cells, axis-faces and pair-points are enumerated lexicographically with
/// the last axis running fastest, so every ordering is a pure function of
/// (dim, cells_per_axis).
class TensorGrid {
public:
  TensorGrid(int dim, std::vector<int> cells_per_axis);

  int dim() const { return dim_; }
  int cells(int axis) const { return cells_[static_cast<size_t>(axis)]; }
  double spacing(int axis) const { return h_[static_cast<size_t>(axis)]; }
  const std::vector<int>& cells_per_axis() const { return cells_; }

  long cell_count() const;
  long vertex_count() const;

  long cell_index(std::span<const int> ci) const;
  std::vector<int> cell_multi(long cell) const;

  /// Affine map F_K : [-1,1]^n -> K, given by center and half-lengths.
  struct CellMap {
    std::vector<double> center;
    std::vector<double> half;
  };
  CellMap cell_map(long cell) const;
  std::vector<double> to_physical(long cell, std::span<const double> ref) const;
  std::vector<double> to_reference(long cell, std::span<const double> x) const;

  /// AxisFace(i) lattice: coordinate i in 0..N_i, others over cell indices.
  long face_count(int axis) const;
  long face_index(int axis, std::span<const int> t) const;
  std::vector<int> face_multi(int axis, long idx) const;
  bool face_is_boundary(int axis, std::span<const int> t) const;

  /// PairPoint(i,j) lattice, i < j: coordinates i and j over grid lines
  /// 0..N, all other coordinates over cell indices.
  long pair_point_count(int i, int j) const;
  long pair_point_index(int i, int j, std::span<const int> t) const;
  std::vector<int> pair_point_multi(int i, int j, long idx) const;
  bool pair_point_is_boundary(int i, int j, std::span<const int> t) const;

private:
  int dim_;
  std::vector<int> cells_;
  std::vector<double> h_;
};

enum class EntityKind { Cell, AxisFace, PairPoint };

struct EntityIndex {
  EntityKind kind;
  int axis_a = -1;  // AxisFace axis, or first pair axis (1-based in names, 0-based here)
  int axis_b = -1;  // second pair axis
  std::vector<int> multi;
  bool boundary = false;
};

/// Deterministic enumeration of all entities of one kind.
/// PairPoint requires a canonical pair i < j.
std::vector<EntityIndex> enumerate_entities(const TensorGrid& grid, EntityKind kind,
                                            int axis_a = 0, int axis_b = 1);

}  // namespace minmix
