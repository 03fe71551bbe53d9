#include "minplus/regimes.hpp"

#include "minplus/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace minplus {
namespace {

constexpr double kMonotoneSlack = 1e-13;
constexpr double kMaxTailAtConvergence = 1e-12;

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p_plus must lie in [0, 1]");
}

/// Survival values 1..len of `m`, zero past its support.
Array survival_prefix(const MassFunction& m, std::int64_t len) {
  const SurvivalCurve s = to_survival(m);
  Array out = Array::Constant(len, s.tail_floor);
  const std::int64_t n = std::min(len, s.size());
  out.head(n) = s.values.head(n);
  return out;
}

}  // namespace

Regime classify(double p_plus) {
  check_probability(p_plus);
  if (p_plus < 0.5) return Regime::kSubcritical;
  if (p_plus > 0.5) return Regime::kSupercritical;
  return Regime::kCritical;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::kSubcritical:
      return "subcritical";
    case Regime::kCritical:
      return "critical";
    case Regime::kSupercritical:
      return "supercritical";
  }
  return "unknown";
}

double subcritical_fixed_point(double p_plus) {
  if (!(p_plus > 0.0 && p_plus < 0.5)) {
    throw std::domain_error("subcritical fixed point needs 0 < p < 1/2");
  }
  return p_plus / (1.0 - p_plus);
}

LimitSurvival limit_survival(double p_plus, std::int64_t k_max, double tol, int max_levels) {
  if (!(p_plus >= 0.0 && p_plus < 0.5)) throw std::domain_error("limit_survival needs 0 <= p < 1/2");
  if (k_max < 2) throw std::invalid_argument("limit_survival: k_max must be >= 2");
  if (!(tol > 0.0)) throw std::invalid_argument("limit_survival: tol must be positive");
  if (max_levels < 2) throw std::invalid_argument("limit_survival: max_levels must be >= 2");

  const TruncationPolicy policy = TruncationPolicy::fixed(k_max);
  MassFunction m = point_mass_initial(p_plus);
  Array prev = survival_prefix(m, k_max);
  for (int level = 2; level <= max_levels; ++level) {
    m = step_pmf(m, policy);
    Array cur = survival_prefix(m, k_max);
    const Array delta = cur - prev;
    if (delta.minCoeff() < -kMonotoneSlack) {
      Eigen::Index at = 0;
      delta.minCoeff(&at);
      throw std::logic_error("P(X_N >= " + std::to_string(at + 1) + ") decreased at N = " +
                             std::to_string(level));
    }
    const double change = delta.abs().maxCoeff();
    prev = std::move(cur);
    if (change < tol) {
      if (m.tail_mass > kMaxTailAtConvergence) {
        throw ConvergenceError("limit_survival: converged with tail mass " +
                               std::to_string(m.tail_mass) + "; raise k_max");
      }
      return LimitSurvival{std::move(prev), level, change, m.tail_mass};
    }
  }
  throw ConvergenceError("limit_survival: no convergence within " + std::to_string(max_levels) +
                         " levels");
}

double stationarity_residual(double p_plus, const Array& c) {
  const Eigen::Index K = c.size();
  double worst = 0.0;
  for (Eigen::Index k = 2; k <= K; ++k) {
    double sum = c[k - 2];
    if (k > 2) {
      const Eigen::Index m = k - 2;
      // (c_l - c_{l+1}) c_{k-l} for l = 1..k-2
      sum += ((c.head(m) - c.segment(1, m)) * c.segment(1, m).reverse()).sum();
    }
    const double ck = c[k - 1];
    worst = std::max(worst, std::abs(ck - (1.0 - p_plus) * ck * ck - p_plus * sum));
  }
  return worst;
}

std::vector<GrowthRow> supercritical_growth(double p_plus, int N_max, std::int64_t cap) {
  check_probability(p_plus);
  if (N_max < 1) throw std::invalid_argument("supercritical_growth: N_max must be >= 1");
  if (cap == 0) cap = std::int64_t{1} << std::min(N_max - 1, 22);
  if (cap < 1) throw std::invalid_argument("supercritical_growth: cap must be >= 1");

  const TruncationPolicy policy = TruncationPolicy::fixed(std::max<std::int64_t>(cap, 2));
  std::vector<GrowthRow> rows;
  MassFunction m = point_mass_initial(p_plus);
  for (int N = 1; N <= N_max; ++N) {
    if (N > 1) m = step_pmf(m, policy);
    const Moments mo = moments(m);
    GrowthRow row;
    row.N = N;
    row.mean = mo.mean_x;
    row.bound = std::pow(2.0 * p_plus, N - 1);
    row.truncated = mo.truncated;
    row.ok = row.mean >= row.bound * (1.0 - 1e-12);
    rows.push_back(row);
  }
  return rows;
}

RegimeReport regime_report(double p_plus, const RegimeOptions& opts) {
  RegimeReport r;
  r.p_plus = p_plus;
  r.classification = classify(p_plus);
  switch (r.classification) {
    case Regime::kSubcritical:
      if (p_plus > 0.0) r.fixed_point_c2 = subcritical_fixed_point(p_plus);
      r.limit_survival = limit_survival(p_plus, opts.k_max, opts.tol, opts.max_levels);
      r.stationarity = stationarity_residual(p_plus, r.limit_survival->values);
      break;
    case Regime::kSupercritical:
      r.growth_base = 2.0 * p_plus;
      r.growth = supercritical_growth(p_plus, opts.N_max);
      break;
    case Regime::kCritical:
      break;
  }
  return r;
}

}  // namespace minplus
