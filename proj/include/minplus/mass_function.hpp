#ifndef MINPLUS_MASS_FUNCTION_HPP_
#define MINPLUS_MASS_FUNCTION_HPP_

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <optional>

namespace minplus {

using Array = Eigen::ArrayXd;

/// Tolerance on sum(probs) + tail_mass around 1.
inline constexpr double kNormTolerance = 1e-9;

/// Probability mass of the root value X_N on {1, ..., probs.size()}.
///
/// probs[i] holds P(X_N = i + 1). Values above the stored support are
/// lumped into tail_mass. k_max is the support cap that produced this level;
/// probs.size() <= k_max always holds, and is smaller whenever the true
/// support (at most 2^(level-1)) is smaller than the cap.
struct MassFunction {
  Array probs;
  double tail_mass = 0.0;
  int level = 1;
  double p_plus = 0.5;
  std::int64_t k_max = 1;

  std::int64_t support() const { return probs.size(); }
  double total() const { return probs.sum() + tail_mass; }
};

/// k -> P(X_N >= k) for k = 1..values.size(); tail_floor = P(X_N >= K + 1).
struct SurvivalCurve {
  Array values;
  double tail_floor = 0.0;
  int level = 1;
  double p_plus = 0.5;

  std::int64_t size() const { return values.size(); }
  /// P(X >= k) for any k >= 1; tail_floor beyond the stored range.
  double at(std::int64_t k) const {
    return k <= size() ? values[k - 1] : tail_floor;
  }
};

enum class TailMode {
  kLump,             ///< keep mass above k_max as a scalar
  kDropRenormalize,  ///< discard it and rescale the rest
  kExact,            ///< refuse any step that would need to truncate
};

/// Support cap used by the evolution. With growth enabled the cap for
/// level N is min(2^(N-1), ceil(exp(growth_factor * sqrt(c N))), ceiling)
/// where c = pi^2/3.
struct TruncationPolicy {
  std::int64_t k_max = 1 << 20;
  TailMode tail_mode = TailMode::kLump;
  bool growth = false;
  double growth_factor = 2.5;
  std::int64_t growth_ceiling = std::int64_t{1} << 22;
  /// Accumulated tail mass (or dropped mass) allowed during evolve().
  double tail_budget = std::numeric_limits<double>::infinity();

  static TruncationPolicy fixed(std::int64_t k_max,
                                TailMode mode = TailMode::kLump) {
    TruncationPolicy p;
    p.k_max = k_max;
    p.tail_mode = mode;
    return p;
  }
  static TruncationPolicy automatic() {
    TruncationPolicy p;
    p.growth = true;
    return p;
  }

  /// Cap in effect when producing `level`.
  std::int64_t cap_for_level(int level) const;
};

/// Throws std::invalid_argument when `m` breaks the MassFunction invariants.
void validate(const MassFunction& m);
void validate(const SurvivalCurve& s);
void validate(const TruncationPolicy& policy);

SurvivalCurve to_survival(const MassFunction& m);
MassFunction to_mass(const SurvivalCurve& s, std::int64_t k_max = 0);

}  // namespace minplus

#endif  // MINPLUS_MASS_FUNCTION_HPP_
