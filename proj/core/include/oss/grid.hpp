/// \file grid.hpp
/// Uniform discretisation of a quality domain.
///
/// A plain grid splits [0, 1] into d = ceil(1/eps) cells of width eps; a
/// log-projected grid does the same after mapping values through
/// logbar(low, high, ·). Out-of-range values clamp to the first or last cell.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "oss/model.hpp"

namespace oss {

class GridSpec {
 public:
  static GridSpec uniform(double eps);
  static GridSpec log_projected(double eps, RewardRange range);

  double eps() const { return eps_; }
  std::uint32_t cells() const { return static_cast<std::uint32_t>(reps_.size()); }
  const std::optional<RewardRange>& projection() const { return projection_; }

  /// Maps `v` into [0, 1] (identity for plain grids).
  double project(double v) const;
  /// Cell index of `v`; throws ContractViolation on non-finite input.
  std::uint32_t discretize(double v) const;
  /// Canonical value of cell `k` (its midpoint, back-mapped when projected).
  double representative(std::uint32_t k) const { return reps_[k]; }
  bool equivalent(double u, double v) const { return discretize(u) == discretize(v); }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.eps_ == b.eps_ && a.projection_ == b.projection_;
  }

 private:
  GridSpec(double eps, std::optional<RewardRange> projection);

  double eps_;
  std::optional<RewardRange> projection_;
  std::vector<double> reps_;
};

}  // namespace oss
