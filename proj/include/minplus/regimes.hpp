#ifndef MINPLUS_REGIMES_HPP_
#define MINPLUS_REGIMES_HPP_

#include "minplus/mass_function.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace minplus {

enum class Regime { kSubcritical, kCritical, kSupercritical };

Regime classify(double p_plus);
std::string_view to_string(Regime r);

/// Raised when the subcritical iteration does not settle within max_levels,
/// or settles with too much tail mass to trust the prefix.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// lim_N P(X_N >= 2) = p / (1 - p) for 0 < p < 1/2 (std::domain_error
/// outside that range).
double subcritical_fixed_point(double p_plus);

struct LimitSurvival {
  Array values;         ///< c_1 .. c_K
  int levels = 0;       ///< depth at which the change fell below tol
  double last_change = 0.0;
  double tail_mass = 0.0;
};

/// Iterates the min/plus step at p < 1/2 until max_k |p_{N+1,k} - p_{N,k}|
/// < tol. Checks along the way that every p_{N,k} is nondecreasing in N.
/// The default cap keeps the lumped tail below 1e-12 at p = 0.4.
LimitSurvival limit_survival(double p_plus, std::int64_t k_max = 4096, double tol = 1e-10,
                             int max_levels = 20000);

/// max_{k >= 2} of |c_k - (1-p) c_k^2 - p [sum_{l=1}^{k-2} (c_l - c_{l+1}) c_{k-l} + c_{k-1}]|.
double stationarity_residual(double p_plus, const Array& c);

struct GrowthRow {
  int N = 1;
  double mean = 1.0;   ///< lower bound on E[X_N] when truncated
  double bound = 1.0;  ///< (2p)^(N-1): one merge per level above the leaves
  bool truncated = false;
  bool ok = true;
};

/// Exact-DP mean of X_N for N = 1..N_max under a lumped cap. A cap of 0
/// selects min(2^(N_max - 1), 2^22).
std::vector<GrowthRow> supercritical_growth(double p_plus, int N_max, std::int64_t cap = 0);

struct RegimeOptions {
  std::int64_t k_max = 4096;
  double tol = 1e-10;
  int N_max = 20;
  int max_levels = 20000;
};

struct RegimeReport {
  double p_plus = 0.5;
  Regime classification = Regime::kCritical;
  std::optional<double> fixed_point_c2;
  std::optional<double> growth_base;
  std::optional<LimitSurvival> limit_survival;
  std::optional<double> stationarity;
  std::vector<GrowthRow> growth;
};

RegimeReport regime_report(double p_plus, const RegimeOptions& opts = {});

}  // namespace minplus

#endif  // MINPLUS_REGIMES_HPP_
