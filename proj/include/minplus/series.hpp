#ifndef MINPLUS_SERIES_HPP_
#define MINPLUS_SERIES_HPP_

#include "minplus/constants.hpp"
#include "minplus/mass_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace minplus {

// Auxiliary series, summed directly in ascending index order. Each template
// accepts any floating type; the library instantiates them at double.

/// h(k) = sum_{l=1}^{k-1} (1/l) log(k / (k - l)); increases to pi^2/6.
template <typename Real = double>
Real series_h(std::int64_t k) {
  if (k < 1) throw std::invalid_argument("h: k must be >= 1");
  const Real kr = static_cast<Real>(k);
  Real sum = 0;
  for (std::int64_t l = 1; l < k; ++l) {
    const Real lr = static_cast<Real>(l);
    sum += -std::log1p(-lr / kr) / lr;
  }
  return sum;
}

/// B_k = sum_{j=1}^{k-1} (1/j) log(1 - j/k)^2.
template <typename Real = double>
Real series_B(std::int64_t k) {
  if (k < 2) throw std::invalid_argument("B: k must be >= 2");
  const Real kr = static_cast<Real>(k);
  Real sum = 0;
  for (std::int64_t j = 1; j < k; ++j) {
    const Real jr = static_cast<Real>(j);
    const Real lg = std::log1p(-jr / kr);
    sum += lg * lg / jr;
  }
  return sum;
}

/// M_A(k) = sum_{j=floor(k/A)}^{k-1} -(1/j) log((k - j)/k), a tail of h(k).
template <typename Real = double>
Real series_M(std::int64_t A, std::int64_t k) {
  if (A < 1) throw std::invalid_argument("M: A must be >= 1");
  if (k < A) throw std::invalid_argument("M: k must be >= A");
  const Real kr = static_cast<Real>(k);
  Real sum = 0;
  for (std::int64_t j = std::max<std::int64_t>(k / A, 1); j < k; ++j) {
    const Real jr = static_cast<Real>(j);
    sum += -std::log1p(-jr / kr) / jr;
  }
  return sum;
}

/// S(k) = sum_{l=1}^{k-1} (l^-a - (l+1)^-a) ((k-l)^-a - k^-a), with both
/// differences written through expm1/log1p to avoid cancellation.
template <typename Real = double>
Real series_S(std::int64_t k, Real alpha) {
  if (!(alpha > 0 && alpha < Real(0.5))) throw std::invalid_argument("S: alpha must be in (0, 1/2)");
  if (k < 2) throw std::invalid_argument("S: k must be >= 2");
  const Real kr = static_cast<Real>(k);
  const Real k_pow = std::pow(kr, -alpha);
  Real sum = 0;
  for (std::int64_t l = 1; l < k; ++l) {
    const Real lr = static_cast<Real>(l);
    const Real left = -std::pow(lr, -alpha) * std::expm1(-alpha * std::log1p(Real(1) / lr));
    const Real right = k_pow * std::expm1(-alpha * std::log1p(-lr / kr));
    sum += left * right;
  }
  return sum;
}

/// Limit CDF of log X_N / sqrt(c N): 0 below 0, t^2 on [0, 1], 1 above.
template <typename Real = double>
Real limit_cdf(Real t) {
  if (!(t > 0)) return Real(0);
  if (t >= 1) return Real(1);
  return t * t;
}

/// A series value next to the bound it is claimed to respect.
struct SeriesEval {
  std::string name;
  std::int64_t k = 0;
  double value = 0.0;
  double bound = 0.0;
  bool upper = true;  ///< value <= bound when set, value >= bound otherwise
  bool satisfied = false;
};

/// h(k) <= pi^2/6.
SeriesEval eval_h(std::int64_t k);
/// B(k) < 12.
SeriesEval eval_B(std::int64_t k);
/// M_A(k) >= pi^2/6 - pi^2/(6A) - slack.
SeriesEval eval_M(std::int64_t A, std::int64_t k, double slack = 0.01);
/// S(k) <= alpha^2 k^(-2 alpha) (1 + eps) pi^2/6.
SeriesEval eval_S(std::int64_t k, double alpha, double eps = 0.1);

struct LimitDiagnostics {
  int N = 0;
  double ks_distance = 0.0;
  double mean_scaled = 0.0;
  double target_mean = kLimitMeanScaled;
  bool truncated = false;
};

/// Sup distance between the CDF of log X_N / sqrt(c N) and limit_cdf, plus
/// E[log X_N] / sqrt(N). The distance is taken on both sides of every jump
/// of the exact CDF. Requires p_plus = 1/2 (std::domain_error otherwise).
LimitDiagnostics diagnose(const MassFunction& exact);

/// (t_k, exact CDF at t_k, limit_cdf(t_k)) with t_k = log k / sqrt(c N), at
/// most `max_rows` rows evenly thinned over the support.
struct LimitRow {
  double t;
  double empirical;
  double limit;
};
std::vector<LimitRow> limit_table(const MassFunction& exact, std::int64_t max_rows = 2000);

}  // namespace minplus

#endif  // MINPLUS_SERIES_HPP_
