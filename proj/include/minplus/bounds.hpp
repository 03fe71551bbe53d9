#ifndef MINPLUS_BOUNDS_HPP_
#define MINPLUS_BOUNDS_HPP_

#include "minplus/constants.hpp"
#include "minplus/mass_function.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace minplus {

// ---------------------------------------------------------------------------
// Recurrence functional
//
//   f(x_1, ..., x_k) = x_k + 1/2 sum_{l=1}^{k-1} (x_l - x_{l+1}) (x_{k-l} - x_k)
//
// so that p_{N+1,k} = f(p_{N,1}, ..., p_{N,k}) at p = 1/2. Its partial
// derivatives are nonnegative on S_k = {1 >= x_1 >= ... >= x_k >= 0}, which
// is what lets closed-form arrays bound the survival curve.
// ---------------------------------------------------------------------------

template <typename Derived>
typename Derived::Scalar f_eval(const Eigen::DenseBase<Derived>& x_in) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Array<Scalar, Eigen::Dynamic, 1> x = x_in.derived().array();
  const Eigen::Index k = x.size();
  eigen_assert(k >= 1);
  if (k == 1) return x[0];
  const Scalar last = x[k - 1];
  const Scalar sum =
      ((x.head(k - 1) - x.segment(1, k - 1)) * (x.head(k - 1).reverse() - last)).sum();
  return last + Scalar(0.5) * sum;
}

/// Gradient of f: entry j < k is x_{k-j} - x_{k-j+1}, entry k is 1 - x_1 + x_k.
template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> f_grad(
    const Eigen::DenseBase<Derived>& x_in) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Array<Scalar, Eigen::Dynamic, 1> x = x_in.derived().array();
  const Eigen::Index k = x.size();
  eigen_assert(k >= 1);
  Eigen::Array<Scalar, Eigen::Dynamic, 1> g(k);
  if (k > 1) g.head(k - 1) = (x.head(k - 1) - x.segment(1, k - 1)).reverse();
  g[k - 1] = Scalar(1) - x[0] + x[k - 1];
  return g;
}

/// Positive-root sequence b_1 = 0, b_k = 1 + sqrt(1 + d_k) with
/// d_k = sum_{j=1}^{k-2} (b_{j+1} - b_j) b_{k-j}. Entry i is b_{i+1}.
Eigen::ArrayXd b_sequence(std::int64_t K);

/// The lower-bound constants a_k; same recursion as b_sequence.
Eigen::ArrayXd a_sequence(std::int64_t K);

/// sum_{l=lo}^{hi} 2 l e_l with e_l = log(l+1)^2 - log(l)^2 - 2 log(l) / l.
double weighted_log_square_defect(int lo = 3, int hi = 120);

// ---------------------------------------------------------------------------
// Bound models
// ---------------------------------------------------------------------------

/// Two-branch upper model with threshold t_N = sqrt(N C + beta^2) - beta:
///   q_{N,k} = 1 - log(k)^2 / (N C)                             log k < t_N
///   q_{N,k} = (2 beta sqrt(NC + beta^2) - 2 beta^2) / (NC)
///             * exp(-(log k - t_N) / beta)                     otherwise
/// The branches agree at log k = t_N. N0 is the level offset used when
/// comparing against p_{N,k}. Constructing with C <= pi^2/3 is allowed so
/// that certificates can exhibit failures; see admissible().
struct UpperModel {
  double C = 1.1 * kCriticalC;
  double beta = 2.0;
  int N0 = 0;

  UpperModel() = default;
  UpperModel(double C_in, double beta_in, int N0_in = 0);

  bool admissible() const { return C > kCriticalC && beta > 1.0; }
  double threshold(int N) const;
};

double upper_model_eval(const UpperModel& m, int N, std::int64_t k);

/// Step lower model:
///   q_{N,k} = 1 - b_k / N                    k < K
///   q_{N,k} = 1 - log(k)^2 / (N c(k))        k >= K, log k < sqrt(N c(k))
///   q_{N,k} = 0                              otherwise
/// where c(k) = c, or c_r for the last extra step with K_r <= k.
struct LowerStepModel {
  struct Step {
    std::int64_t K;
    double c;
  };

  Eigen::ArrayXd b;  ///< b_1 .. b_{K-1}
  std::int64_t K = 33;
  double c = 1.0;
  std::vector<Step> steps;  ///< increasing K_r > K

  /// b_k = a_k below K (the default construction: K = 33, c = 1).
  static LowerStepModel from_a_sequence(std::int64_t K = 33, double c = 1.0);
  /// b_k = log(k)^2 / c below K, i.e. one smooth model 1 - log(k)^2 / (N c).
  static LowerStepModel log_squared(std::int64_t K, double c);
  /// q_{N,k} = 1 - a_k / N for every k <= k_max.
  static LowerStepModel pure_a(std::int64_t k_max);

  double c_at(std::int64_t k) const;
  /// Throws std::invalid_argument unless b is nonnegative and nondecreasing
  /// through the junction value log(K)^2 / c.
  void check() const;
};

/// Paper-style defaults for the multi-step lower construction.
struct LowerDefaults {
  static constexpr double delta = 2.0 / 3.0;
  static constexpr int A = 8;
  static constexpr std::int64_t K = 33;
  static constexpr std::int64_t K_bar = 12000;
};

/// Raw model value (no validity check).
double lower_model_value(const LowerStepModel& m, int N, std::int64_t k);

/// Value with a local validity check: throws std::domain_error when
/// q_{N,k} leaves [0, 1] or exceeds q_{N,k-1}.
double lower_model_eval(const LowerStepModel& m, int N, std::int64_t k);

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

struct Range {
  std::int64_t lo = 1;
  std::int64_t hi = 1;
  std::int64_t size() const { return hi >= lo ? hi - lo + 1 : 0; }
};

struct Violation {
  int N = 0;
  std::int64_t k = 0;
  double residual = 0.0;
};

struct CertificateReport {
  Range n_range;
  Range k_range;
  double min_margin = 0.0;
  std::optional<Violation> worst;            ///< argmin of the margin
  std::optional<Violation> first_violation;  ///< first negative cell, N-major order
  std::int64_t violations = 0;
  /// Upper model: inf over model-1 cells (k >= 2) of residual N^2 / log(k)^2,
  /// an empirical stand-in for the breathing-room constant.
  std::optional<double> gamma_estimate;
  /// Rows [N][k - k_lo] when requested.
  std::vector<std::vector<double>> residuals;

  bool passed() const { return !first_violation.has_value(); }
};

/// residual(N, k) = q_{N+1,k} - q_{N,k} - 1/2 sum_l (q_l - q_{l+1})(q_{k-l} - q_k).
/// Violations are data: the report carries them instead of throwing.
CertificateReport certify_upper(const UpperModel& m, Range n_range, Range k_range,
                                bool keep_grid = false);

/// residual(N, k) = 1/2 sum_l (...) - (q_{N+1,k} - q_{N,k}). Cells where
/// 0 <= q_{N,k} <= q_{N,k-1} <= 1 fails count as violations with the amount
/// of the breach as residual.
CertificateReport certify_lower(const LowerStepModel& m, Range n_range, Range k_range,
                                bool keep_grid = false);

/// Smallest N in [n_lo, n_hi] such that every row N..n_hi certifies, or
/// nullopt when row n_hi itself fails.
std::optional<int> upper_onset(const UpperModel& m, int n_lo, int n_hi, Range k_range);
std::optional<int> lower_onset(const LowerStepModel& m, int n_lo, int n_hi, Range k_range);

struct SandwichReport {
  int N = 0;
  int upper_shift = 0;
  int lower_shift = 0;
  std::int64_t checked = 0;
  std::int64_t upper_violations = 0;
  std::int64_t lower_violations = 0;
  std::optional<std::int64_t> first_upper_violation;
  std::optional<std::int64_t> first_lower_violation;

  std::int64_t violations() const { return upper_violations + lower_violations; }
};

/// Checks lower(N - lower_shift, k) <= p_{N,k} <= upper(N + upper_shift, k)
/// for k = 1..exact.size(). A lower level below 1 imposes no constraint.
SandwichReport sandwich_check(int N, const UpperModel& upper, const LowerStepModel& lower,
                              const SurvivalCurve& exact, int upper_shift, int lower_shift);

}  // namespace minplus

#endif  // MINPLUS_BOUNDS_HPP_
