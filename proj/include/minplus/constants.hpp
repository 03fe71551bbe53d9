#ifndef MINPLUS_CONSTANTS_HPP_
#define MINPLUS_CONSTANTS_HPP_

#include <cmath>
#include <numbers>

namespace minplus {

/// Critical scaling constant: log X_N / sqrt(c N) has limit CDF t^2.
inline constexpr double kCriticalC = std::numbers::pi * std::numbers::pi / 3.0;

/// pi^2 / 6, the supremum of the h(k) series.
inline constexpr double kZeta2 = std::numbers::pi * std::numbers::pi / 6.0;

/// Limit of E[log X_N] / sqrt(N) at p = 1/2.
inline const double kLimitMeanScaled = 2.0 * std::numbers::pi / (3.0 * std::sqrt(3.0));

}  // namespace minplus

#endif  // MINPLUS_CONSTANTS_HPP_
