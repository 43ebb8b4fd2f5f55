#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <ostream>
#include <utility>
#include <vector>

#include "minmix/tensor_grid.hpp"

namespace minmix {

/// Global stress/displacement DOF numbering.
///
/// Stress block layout: for each axis i the AxisFace(i) values, then for
/// each pair (i,j), i < j lexicographic, the PairPoint frame coefficients.
/// Displacement: per cell, components contiguous.
class DofLayout {
public:
  explicit DofLayout(TensorGrid grid);

  const TensorGrid& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }

  int pair_count() const { return static_cast<int>(pairs_.size()); }
  std::pair<int, int> pair(int p) const { return pairs_[static_cast<size_t>(p)]; }
  int pair_id(int i, int j) const;

  long normal_offset(int axis) const { return normal_offset_[static_cast<size_t>(axis)]; }
  long pair_offset(int p) const { return pair_offset_[static_cast<size_t>(p)]; }
  long normal_count(int axis) const { return grid_.face_count(axis); }
  long pair_coeff_count(int p) const;
  long stress_size() const { return stress_size_; }
  long displacement_size() const { return grid_.cell_count() * grid_.dim(); }

  long normal_dof(int axis, std::span<const int> t) const;
  long pair_dof(int p, std::span<const int> t) const;
  long displacement_dof(long cell, int comp) const { return cell * grid_.dim() + comp; }

  /// Global stress DOFs active on one cell, in the canonical local order of
  /// local_compliance_gram / local_divergence_coupling.
  std::vector<long> cell_stress_dofs(long cell) const;

  /// Function-space dimension spanned by one pair's frame: the coefficient
  /// count minus one checkerboard relation per slab of the remaining axes.
  long pair_span_dimension(int p) const;

private:
  TensorGrid grid_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<long> normal_offset_;
  std::vector<long> pair_offset_;
  long stress_size_ = 0;
};

struct StressField {
  std::shared_ptr<const DofLayout> layout;
  Eigen::VectorXd coeffs;

  explicit StressField(std::shared_ptr<const DofLayout> l)
      : layout(std::move(l)), coeffs(Eigen::VectorXd::Zero(layout->stress_size())) {}
};

struct DisplacementField {
  std::shared_ptr<const DofLayout> layout;
  Eigen::VectorXd values;  // cell-major, components contiguous

  explicit DisplacementField(std::shared_ptr<const DofLayout> l)
      : layout(std::move(l)), values(Eigen::VectorXd::Zero(layout->displacement_size())) {}
};

/// Evaluate the stress tensor at a reference point of one cell.
Eigen::MatrixXd evaluate_stress(const StressField& field, long cell, std::span<const double> ref);

/// Elementwise divergence; exactly representable as cell constants.
DisplacementField discrete_divergence(const StressField& field);

enum class NormalInterpMode { FaceAverage, FaceCenter };

using ScalarFn = std::function<double(const Eigen::VectorXd&)>;
using VectorFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using TensorFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

/// Pi_ii: face DOFs from face averages (g=3 Gauss) or face-center values.
Eigen::VectorXd interpolate_normal(const DofLayout& layout, int axis, const ScalarFn& f,
                                   NormalInterpMode mode = NormalInterpMode::FaceAverage);

/// Pi_ij: one coefficient per PairPoint, the function value at the point.
Eigen::VectorXd interpolate_shear(const DofLayout& layout, int p, const ScalarFn& f);

/// Pi_h (and the nodal I_h sigma of the table harness in FaceCenter mode).
StressField interpolate_full(std::shared_ptr<const DofLayout> layout, const TensorFn& sigma,
                             NormalInterpMode mode = NormalInterpMode::FaceAverage);

/// I_h u: cell-center values.
DisplacementField nodal_interp_displacement(std::shared_ptr<const DofLayout> layout,
                                            const VectorFn& u);

/// Columnar debug dump: block, entity multi-index, value.
void dump_stress_csv(const StressField& field, std::ostream& os);
void dump_displacement_csv(const DisplacementField& field, std::ostream& os);

}  // namespace minmix
