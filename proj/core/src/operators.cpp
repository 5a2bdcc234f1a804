#include "oss/operators.hpp"

#include <cmath>

#include "oss/error.hpp"

namespace oss {

double lerp(double x, double y, double c) { return c * x + (1.0 - c) * y; }

double precision_join(double x, double y) {
  OSS_EXPECTS(x >= 0.0 && y >= 0.0, "precision_join: negative precision");
  if (x == 0.0 && y == 0.0) return 0.0;
  if (std::isinf(x)) return y;
  if (std::isinf(y)) return x;
  return x * y / (x + y);
}

double logbar(double low, double high, double p) {
  OSS_EXPECTS(low > 0.0 && high > low, "logbar: requires 0 < low < high");
  if (p <= low) return 0.0;
  if (p >= high) return 1.0;
  return (std::log(p) - std::log(low)) / (std::log(high) - std::log(low));
}

}  // namespace oss
