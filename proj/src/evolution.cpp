#include "minplus/evolution.hpp"

#include "minplus/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace minplus {
namespace {

struct StepOutcome {
  MassFunction mass;
  double dropped = 0.0;
};

StepOutcome step_impl(const MassFunction& m, const TruncationPolicy& policy) {
  validate(policy);
  const double p = m.p_plus;
  const Eigen::Index n = m.probs.size();
  const double tail = m.tail_mass;
  const int next_level = m.level + 1;
  const std::int64_t cap = policy.cap_for_level(next_level);

  const Eigen::Index natural_len = p > 0.0 ? 2 * n : n;
  if (policy.tail_mode == TailMode::kExact && (natural_len > cap || tail > 0.0)) {
    throw std::length_error("step_pmf: level " + std::to_string(next_level) + " needs support " +
                            std::to_string(natural_len) + " but k_max is " +
                            std::to_string(cap));
  }
  const Eigen::Index len = std::min<Eigen::Index>(natural_len, cap);

  Array out = Array::Zero(len);
  double new_tail = 0.0;

  if (p < 1.0) {
    // P(min = k) = S_k^2 - S_{k+1}^2 = P_k (S_k + S_{k+1}), S_{n+1} = tail
    double upper = tail;  // S_{k+1}
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      const double here = upper + m.probs[i];  // S_k
      const double v = (1.0 - p) * m.probs[i] * (here + upper);
      if (i < len) {
        out[i] += v;
      } else {
        new_tail += v;
      }
      upper = here;
    }
    new_tail += (1.0 - p) * tail * tail;
  }

  if (p > 0.0) {
    const Array conv = self_convolve(m.probs);  // conv[j] is mass at value j + 2
    double overflow = 0.0;
    for (Eigen::Index j = 0; j < conv.size(); ++j) {
      if (j + 1 < len) {
        out[j + 1] += p * conv[j];
      } else {
        overflow += conv[j];
      }
    }
    const double in_range = m.probs.sum();
    new_tail += p * (overflow + 2.0 * tail * in_range + tail * tail);
  }

  // total mass maps to its square each level, so round-off must not accumulate
  const double total = out.sum() + new_tail;
  out /= total;
  new_tail /= total;

  StepOutcome result;
  result.mass.probs = std::move(out);
  result.mass.level = next_level;
  result.mass.p_plus = p;
  result.mass.k_max = cap;
  if (policy.tail_mode == TailMode::kDropRenormalize && new_tail > 0.0) {
    result.dropped = new_tail;
    result.mass.probs /= result.mass.probs.sum();
    result.mass.tail_mass = 0.0;
  } else {
    result.mass.tail_mass = new_tail;
  }
  return result;
}

}  // namespace

MassFunction point_mass_initial(double p_plus) {
  MassFunction m;
  m.probs = Array::Ones(1);
  m.tail_mass = 0.0;
  m.level = 1;
  m.p_plus = p_plus;
  m.k_max = 1;
  return m;
}

MassFunction step_pmf(const MassFunction& m, const TruncationPolicy& policy) {
  return step_impl(m, policy).mass;
}

SurvivalCurve step_survival(const SurvivalCurve& s) {
  if (s.p_plus != 0.5) {
    throw std::domain_error("step_survival: the quadratic recurrence needs p_plus = 1/2");
  }
  const Eigen::Index K = s.values.size();
  // ext[i] = P(X >= i + 1) for i = 0..K, the last entry being the tail floor
  Array ext(K + 1);
  ext.head(K) = s.values;
  ext[K] = s.tail_floor;

  Array next(K + 1);
  for (Eigen::Index k = 1; k <= K + 1; ++k) {
    const double pk = ext[k - 1];
    double acc = 0.0;
    for (Eigen::Index l = 1; l <= k - 1; ++l) {
      acc += (ext[l - 1] - ext[l]) * (ext[k - l - 1] - pk);
    }
    next[k - 1] = pk + 0.5 * acc;
  }

  SurvivalCurve out;
  out.values = next.head(K);
  out.tail_floor = next[K];
  out.level = s.level + 1;
  out.p_plus = s.p_plus;
  return out;
}

EvolveResult evolve_with_history(int n_target, double p_plus, const TruncationPolicy& policy) {
  if (n_target < 1) throw std::invalid_argument("evolve: N must be >= 1");
  if (!(p_plus >= 0.0 && p_plus <= 1.0)) {
    throw std::invalid_argument("evolve: p_plus outside [0, 1]");
  }
  validate(policy);

  EvolveResult result;
  result.mass = point_mass_initial(p_plus);
  result.tail_history.push_back(0.0);
  while (result.mass.level < n_target) {
    StepOutcome step = step_impl(result.mass, policy);
    result.dropped_mass += step.dropped;
    result.mass = std::move(step.mass);
    result.tail_history.push_back(result.mass.tail_mass);

    const double accumulated = policy.tail_mode == TailMode::kDropRenormalize
                                   ? result.dropped_mass
                                   : result.mass.tail_mass;
    if (accumulated > policy.tail_budget) {
      throw TailBudgetExceeded("evolve: tail mass " + std::to_string(accumulated) +
                               " exceeds budget at level " +
                               std::to_string(result.mass.level));
    }
  }
  return result;
}

Moments moments(const MassFunction& m) {
  Moments out;
  const Eigen::Index n = m.probs.size();
  const Array k = Array::LinSpaced(n, 1.0, static_cast<double>(n));
  const Array logk = k.log();
  const double floor_k = static_cast<double>(std::max<std::int64_t>(m.k_max, n));
  const double floor_log = std::log(floor_k);

  out.truncated = m.tail_mass > 0.0;
  out.mean_x = (m.probs * k).sum() + m.tail_mass * floor_k;
  out.mean_log_x = (m.probs * logk).sum() + m.tail_mass * floor_log;
  out.var_log_x = (m.probs * (logk - out.mean_log_x).square()).sum() +
                  m.tail_mass * std::pow(floor_log - out.mean_log_x, 2);
  return out;
}

}  // namespace minplus
