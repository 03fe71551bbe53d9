#include "minplus/mass_function.hpp"

#include "minplus/constants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace minplus {

std::int64_t TruncationPolicy::cap_for_level(int level) const {
  if (!growth) return k_max;
  const double natural = std::ceil(std::exp(growth_factor * std::sqrt(kCriticalC * level)));
  std::int64_t cap = growth_ceiling;
  if (natural < static_cast<double>(cap)) cap = static_cast<std::int64_t>(natural);
  if (level - 1 < 62) cap = std::min(cap, std::int64_t{1} << (level - 1));
  return std::max<std::int64_t>(cap, 2);
}

void validate(const TruncationPolicy& policy) {
  if (!policy.growth && policy.k_max < 2) {
    throw std::invalid_argument("TruncationPolicy: k_max must be >= 2");
  }
  if (policy.growth && (policy.growth_ceiling < 2 || !(policy.growth_factor > 0.0))) {
    throw std::invalid_argument("TruncationPolicy: invalid growth rule");
  }
}

void validate(const MassFunction& m) {
  if (m.level < 1) throw std::invalid_argument("MassFunction: level must be >= 1");
  if (!(m.p_plus >= 0.0 && m.p_plus <= 1.0)) {
    throw std::invalid_argument("MassFunction: p_plus outside [0, 1]");
  }
  if (m.probs.size() > m.k_max) {
    throw std::invalid_argument("MassFunction: support exceeds k_max");
  }
  if (!(m.tail_mass >= 0.0) || (m.probs.size() > 0 && !(m.probs >= 0.0).all())) {
    throw std::invalid_argument("MassFunction: negative probability");
  }
  const double total = m.total();
  if (!(std::abs(total - 1.0) <= kNormTolerance)) {
    throw std::invalid_argument("MassFunction: total mass " + std::to_string(total) +
                                " is not 1");
  }
}

void validate(const SurvivalCurve& s) {
  if (s.values.size() == 0 || s.values[0] != 1.0) {
    throw std::invalid_argument("SurvivalCurve: P(X >= 1) must be 1");
  }
  double prev = 1.0;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    const double v = s.values[i];
    if (!(v >= 0.0 && v <= prev)) {
      throw std::invalid_argument("SurvivalCurve: not nonincreasing in [0, 1] at k = " +
                                  std::to_string(i + 1));
    }
    prev = v;
  }
  if (!(s.tail_floor >= 0.0 && s.tail_floor <= prev)) {
    throw std::invalid_argument("SurvivalCurve: tail_floor out of order");
  }
}

SurvivalCurve to_survival(const MassFunction& m) {
  const Eigen::Index n = m.probs.size();
  SurvivalCurve s;
  s.level = m.level;
  s.p_plus = m.p_plus;
  s.tail_floor = m.tail_mass;
  s.values.resize(std::max<Eigen::Index>(n, 1));
  // suffix sums from the top keep small tail probabilities accurate
  double acc = m.tail_mass;
  for (Eigen::Index i = n - 1; i >= 1; --i) {
    acc += m.probs[i];
    s.values[i] = std::min(acc, 1.0);
  }
  s.values[0] = 1.0;
  if (n == 0) s.tail_floor = 1.0;
  return s;
}

MassFunction to_mass(const SurvivalCurve& s, std::int64_t k_max) {
  const Eigen::Index n = s.values.size();
  MassFunction m;
  m.level = s.level;
  m.p_plus = s.p_plus;
  m.tail_mass = s.tail_floor;
  m.k_max = std::max<std::int64_t>(k_max, n);
  m.probs.resize(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) m.probs[i] = s.values[i] - s.values[i + 1];
  if (n > 0) m.probs[n - 1] = s.values[n - 1] - s.tail_floor;
  return m;
}

}  // namespace minplus
