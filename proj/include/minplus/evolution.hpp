#ifndef MINPLUS_EVOLUTION_HPP_
#define MINPLUS_EVOLUTION_HPP_

#include "minplus/mass_function.hpp"

#include <stdexcept>
#include <vector>

namespace minplus {

/// Raised by evolve() when the accumulated tail exceeds the policy budget.
class TailBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Depth-1 tree: a single leaf, X_1 = 1.
MassFunction point_mass_initial(double p_plus = 0.5);

/// One level of the min/plus mixture:
///   law(X_{N+1}) = p * law(X + X') + (1 - p) * law(min(X, X'))
/// with X, X' independent copies of `m`. The min part uses
/// P(min >= k) = P(X >= k)^2, the sum part a self-convolution. Mass above
/// the cap is handled per policy.tail_mode; the result is renormalized.
MassFunction step_pmf(const MassFunction& m, const TruncationPolicy& policy);

/// The critical-case quadratic recurrence applied to the survival curve,
///   p'_k = p_k + 1/2 sum_{l=1}^{k-1} (p_l - p_{l+1}) (p_{k-l} - p_k),
/// in O(K^2). Only defined for p_plus = 1/2 (std::domain_error otherwise).
SurvivalCurve step_survival(const SurvivalCurve& s);

struct EvolveResult {
  MassFunction mass;
  /// tail_history[i] is the tail mass after producing level i + 1.
  std::vector<double> tail_history;
  /// Total probability discarded in drop-and-renormalize mode.
  double dropped_mass = 0.0;
};

EvolveResult evolve_with_history(int n_target, double p_plus, const TruncationPolicy& policy);

inline MassFunction evolve(int n_target, double p_plus, const TruncationPolicy& policy) {
  return evolve_with_history(n_target, p_plus, policy).mass;
}

struct Moments {
  double mean_x = 0.0;
  double mean_log_x = 0.0;
  double var_log_x = 0.0;
  /// Set when tail mass is present; the tail then contributes k_max
  /// (resp. log k_max) as a floor and mean_x is a lower bound.
  bool truncated = false;
};

Moments moments(const MassFunction& m);

}  // namespace minplus

#endif  // MINPLUS_EVOLUTION_HPP_
