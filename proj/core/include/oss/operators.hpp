/// \file operators.hpp
/// Scalar operators shared by both solvers.

#pragma once

namespace oss {

/// c*x + (1-c)*y for c in [0, 1].
double lerp(double x, double y, double c);

/// Harmonic combination of two precisions: x*y/(x+y), and 0 when both are 0.
/// Negative inputs throw ContractViolation.
double precision_join(double x, double y);

/// Log of `p` normalised to [0, 1] over [low, high] and truncated outside it.
double logbar(double low, double high, double p);

}  // namespace oss
