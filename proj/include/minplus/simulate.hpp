#ifndef MINPLUS_SIMULATE_HPP_
#define MINPLUS_SIMULATE_HPP_

#include "minplus/mass_function.hpp"
#include "minplus/rng.hpp"

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace minplus {

/// Root values are at most 2^(depth - 1); depth 63 still fits in uint64.
inline constexpr int kMaxSimDepth = 63;

struct SimConfig {
  int depth = 1;
  double p_plus = 0.5;
  std::uint64_t n_samples = 1;
  std::uint64_t seed = 0;
  int workers = 1;
};

void validate(const SimConfig& cfg);

struct EmpiricalSummary {
  int depth = 1;
  double p_plus = 0.5;
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t n = 0;
  double mean_log = 0.0;
  /// (level, quantile of log X / sqrt(c N)) for the levels in kQuantileLevels.
  std::vector<std::pair<double, double>> scaled_quantiles;
};

inline constexpr double kQuantileLevels[] = {0.1, 0.25, 0.5, 0.75, 0.9};

/// Draws one X_depth by a post-order walk over the leaves; the tree is never
/// stored, only a stack of at most `depth` partial values.
std::uint64_t sample_one(int depth, double p_plus, Xoshiro256& rng);

/// Worker w draws its share from Xoshiro256::substream(seed, w); the merged
/// counts depend only on (seed, workers).
EmpiricalSummary run(const SimConfig& cfg);

/// Builds the derived fields (n, mean_log, quantiles) from counts.
EmpiricalSummary summarize(int depth, double p_plus,
                           std::map<std::uint64_t, std::uint64_t> counts);

struct ExactComparison {
  double max_abs_cdf_gap = 0.0;
  double chi2_stat = 0.0;
  int chi2_dof = 0;
  double chi2_p_value = 1.0;
};

/// Sup-norm CDF gap and a chi-square statistic over bins pooled until each
/// expected count is at least 5. Throws std::invalid_argument on a depth or
/// p_plus mismatch.
ExactComparison compare_to_exact(const EmpiricalSummary& summary, const MassFunction& exact);

}  // namespace minplus

#endif  // MINPLUS_SIMULATE_HPP_
