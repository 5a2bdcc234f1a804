#include "oss/grid.hpp"

#include <algorithm>
#include <cmath>

#include "oss/error.hpp"
#include "oss/operators.hpp"

namespace oss {

GridSpec GridSpec::uniform(double eps) { return GridSpec(eps, std::nullopt); }

GridSpec GridSpec::log_projected(double eps, RewardRange range) {
  OSS_EXPECTS(range.low > 0.0 && range.high > range.low, "grid: invalid projection range");
  return GridSpec(eps, range);
}

GridSpec::GridSpec(double eps, std::optional<RewardRange> projection)
    : eps_(eps), projection_(projection) {
  OSS_EXPECTS(eps > 0.0 && eps < 1.0, "grid: eps must lie in (0, 1)");
  // 1/eps is often an integer up to rounding noise (eps = e/(3h) etc.).
  const auto d = static_cast<std::uint32_t>(std::ceil(1.0 / eps - 1e-9));
  reps_.resize(std::max<std::uint32_t>(d, 1));
  for (std::uint32_t k = 0; k < reps_.size(); ++k) {
    // Midpoint of the cell clipped to [0, 1], so the last cell stays inside.
    const double lo = k * eps;
    const double hi = std::min((k + 1) * eps, 1.0);
    const double mid = k + 1 == reps_.size() ? 0.5 * (lo + 1.0) : 0.5 * (lo + hi);
    reps_[k] = projection_ ? projection_->low * std::pow(projection_->high / projection_->low, mid)
                           : mid;
  }
}

double GridSpec::project(double v) const {
  return projection_ ? logbar(projection_->low, projection_->high, v) : v;
}

std::uint32_t GridSpec::discretize(double v) const {
  OSS_EXPECTS(std::isfinite(v), "discretize: non-finite value");
  const double x = project(v);
  if (x <= 0.0) return 0;
  const double k = std::floor(x / eps_);
  const double last = static_cast<double>(reps_.size() - 1);
  return static_cast<std::uint32_t>(std::min(k, last));
}

}  // namespace oss
