#include "minplus/series.hpp"

#include "minplus/evolution.hpp"

#include <cmath>
#include <stdexcept>

namespace minplus {

SeriesEval eval_h(std::int64_t k) {
  SeriesEval e{"h", k, series_h(k), kZeta2, true, false};
  e.satisfied = e.value <= e.bound;
  return e;
}

SeriesEval eval_B(std::int64_t k) {
  SeriesEval e{"B", k, series_B(k), 12.0, true, false};
  e.satisfied = e.value < e.bound;
  return e;
}

SeriesEval eval_M(std::int64_t A, std::int64_t k, double slack) {
  const double bound = kZeta2 - kZeta2 / static_cast<double>(A) - slack;
  SeriesEval e{"M", k, series_M(A, k), bound, false, false};
  e.satisfied = e.value >= e.bound;
  return e;
}

SeriesEval eval_S(std::int64_t k, double alpha, double eps) {
  const double bound =
      alpha * alpha * std::pow(static_cast<double>(k), -2.0 * alpha) * (1.0 + eps) * kZeta2;
  SeriesEval e{"S", k, series_S(k, alpha), bound, true, false};
  e.satisfied = e.value <= e.bound;
  return e;
}

namespace {

void require_critical(const MassFunction& m) {
  validate(m);
  if (m.p_plus != 0.5) {
    throw std::domain_error("limit diagnostics are defined at p_plus = 1/2 only");
  }
}

double scaled_t(std::int64_t k, double scale) { return std::log(static_cast<double>(k)) / scale; }

}  // namespace

LimitDiagnostics diagnose(const MassFunction& exact) {
  require_critical(exact);
  LimitDiagnostics d;
  d.N = exact.level;
  d.truncated = exact.tail_mass > 0.0;

  const double scale = std::sqrt(kCriticalC * exact.level);
  const std::int64_t n = exact.support();
  double before = 0.0;
  double ks = 0.0;
  for (std::int64_t k = 1; k <= n; ++k) {
    const double f = limit_cdf(scaled_t(k, scale));
    const double after = before + exact.probs[k - 1];
    ks = std::max({ks, std::abs(before - f), std::abs(after - f)});
    before = after;
  }
  // the stored CDF stays flat until the next value
  ks = std::max(ks, std::abs(before - limit_cdf(scaled_t(n + 1, scale))));
  d.ks_distance = std::min(ks, 1.0);
  d.mean_scaled = moments(exact).mean_log_x / std::sqrt(static_cast<double>(exact.level));
  return d;
}

std::vector<LimitRow> limit_table(const MassFunction& exact, std::int64_t max_rows) {
  require_critical(exact);
  if (max_rows < 2) throw std::invalid_argument("limit_table: max_rows must be >= 2");
  const double scale = std::sqrt(kCriticalC * exact.level);
  const std::int64_t n = exact.support();
  const std::int64_t stride = (n + max_rows - 1) / max_rows;

  std::vector<LimitRow> rows;
  double cdf = 0.0;
  for (std::int64_t k = 1; k <= n; ++k) {
    cdf += exact.probs[k - 1];
    if ((k - 1) % stride == 0 || k == n) {
      const double t = scaled_t(k, scale);
      rows.push_back({t, std::min(cdf, 1.0), limit_cdf(t)});
    }
  }
  return rows;
}

}  // namespace minplus
