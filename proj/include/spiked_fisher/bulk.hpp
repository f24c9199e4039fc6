#pragma once

#include <algorithm>
#include <vector>

#include "spiked_fisher/error.hpp"

namespace spiked_fisher {

/// Limiting (or empirical) spectral measure of the non-spiked eigenvalues of
/// T_p^* T_p. Both representations are finite sets of equally weighted atoms,
/// so integrals against it are exact sums.
class BulkMeasure {
 public:
  enum class Kind { PointMass, EmpiricalList };

  static BulkMeasure point_mass(double t0) { return BulkMeasure(Kind::PointMass, {t0}); }

  static BulkMeasure empirical(std::vector<double> values) {
    return BulkMeasure(Kind::EmpiricalList, std::move(values));
  }

  BulkMeasure() : BulkMeasure(Kind::PointMass, {1.0}) {}

  Kind kind() const { return kind_; }
  const std::vector<double>& atoms() const { return atoms_; }
  double support_min() const { return min_; }
  double support_max() const { return max_; }

  /// True when every atom has the same value (a point mass in disguise).
  bool is_degenerate() const { return min_ == max_; }

  bool in_support(double x) const { return x >= min_ && x <= max_; }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (double t : atoms_) sum += f(t);
    return sum / static_cast<double>(atoms_.size());
  }

 private:
  BulkMeasure(Kind kind, std::vector<double> atoms) : kind_(kind), atoms_(std::move(atoms)) {
    if (atoms_.empty()) fail(ErrorCode::InvalidSpec, "bulk measure needs at least one atom");
    for (double t : atoms_) {
      if (!(t > 0.0)) fail(ErrorCode::InvalidSpec, "bulk atoms must be positive");
    }
    const auto [lo, hi] = std::minmax_element(atoms_.begin(), atoms_.end());
    min_ = *lo;
    max_ = *hi;
  }

  Kind kind_;
  std::vector<double> atoms_;
  double min_ = 1.0;
  double max_ = 1.0;
};

}  // namespace spiked_fisher
