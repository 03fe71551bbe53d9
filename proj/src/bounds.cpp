#include "minplus/bounds.hpp"

#include "minplus/parallel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace minplus {
namespace {

Eigen::ArrayXd positive_root_sequence(std::int64_t K) {
  if (K < 1) throw std::invalid_argument("sequence length must be >= 1");
  Eigen::ArrayXd b = Eigen::ArrayXd::Zero(K);
  for (std::int64_t k = 2; k <= K; ++k) {
    double d = 0.0;
    if (k > 2) {
      const Eigen::Index m = k - 2;
      d = ((b.segment(1, m) - b.segment(0, m)) * b.segment(1, m).reverse()).sum();
    }
    b[k - 1] = 1.0 + std::sqrt(1.0 + d);
  }
  return b;
}

void check_level(int N, std::int64_t k) {
  if (N < 1) throw std::invalid_argument("model level N must be >= 1");
  if (k < 1) throw std::invalid_argument("model index k must be >= 1");
}

/// sum_{l=1}^{k-1} (q_l - q_{l+1}) (q_{k-l} - q_k) with q 0-based.
double convolution_term(const Eigen::ArrayXd& q, const Eigen::ArrayXd& diffs, std::int64_t k) {
  if (k < 2) return 0.0;
  const Eigen::Index m = k - 1;
  return (diffs.head(m) * (q.head(m).reverse() - q[k - 1])).sum();
}

struct RowResult {
  double min_margin = std::numeric_limits<double>::infinity();
  std::int64_t argmin_k = 0;
  std::optional<Violation> first;
  std::int64_t violations = 0;
  double gamma = std::numeric_limits<double>::infinity();
  std::vector<double> residuals;

  void record(int N, std::int64_t k, double r) {
    if (r < min_margin) {
      min_margin = r;
      argmin_k = k;
    }
    if (r < 0.0) {
      ++violations;
      if (!first) first = Violation{N, k, r};
    }
  }
};

CertificateReport reduce_rows(std::vector<RowResult>& rows, Range n_range, Range k_range,
                              bool keep_grid, bool with_gamma) {
  CertificateReport rep;
  rep.n_range = n_range;
  rep.k_range = k_range;
  rep.min_margin = std::numeric_limits<double>::infinity();
  double gamma = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& row = rows[i];
    const int N = static_cast<int>(n_range.lo + static_cast<std::int64_t>(i));
    if (row.min_margin < rep.min_margin) {
      rep.min_margin = row.min_margin;
      rep.worst = Violation{N, row.argmin_k, row.min_margin};
    }
    if (!rep.first_violation && row.first) rep.first_violation = row.first;
    rep.violations += row.violations;
    gamma = std::min(gamma, row.gamma);
    if (keep_grid) rep.residuals.push_back(std::move(row.residuals));
  }
  if (with_gamma && std::isfinite(gamma)) rep.gamma_estimate = gamma;
  return rep;
}

void check_ranges(Range n_range, Range k_range) {
  if (n_range.lo < 1 || n_range.size() == 0) throw std::invalid_argument("empty or invalid N range");
  if (k_range.lo < 1 || k_range.size() == 0) throw std::invalid_argument("empty or invalid k range");
}

}  // namespace

Eigen::ArrayXd b_sequence(std::int64_t K) { return positive_root_sequence(K); }

Eigen::ArrayXd a_sequence(std::int64_t K) { return positive_root_sequence(K); }

double weighted_log_square_defect(int lo, int hi) {
  double sum = 0.0;
  for (int l = lo; l <= hi; ++l) {
    const double ll = std::log(static_cast<double>(l));
    const double l1 = std::log(static_cast<double>(l + 1));
    const double e = l1 * l1 - ll * ll - 2.0 * ll / l;
    sum += 2.0 * l * e;
  }
  return sum;
}

// ---------------------------------------------------------------------------

UpperModel::UpperModel(double C_in, double beta_in, int N0_in) : C(C_in), beta(beta_in), N0(N0_in) {
  if (!(C > 0.0)) throw std::invalid_argument("UpperModel: C must be positive");
  if (!(beta > 1.0)) throw std::invalid_argument("UpperModel: beta must exceed 1");
}

double UpperModel::threshold(int N) const {
  return std::sqrt(N * C + beta * beta) - beta;
}

double upper_model_eval(const UpperModel& m, int N, std::int64_t k) {
  check_level(N, k);
  const double t = m.threshold(N);
  const double lk = std::log(static_cast<double>(k));
  const double nc = N * m.C;
  if (lk < t) return 1.0 - lk * lk / nc;
  const double scale = (2.0 * m.beta * std::sqrt(nc + m.beta * m.beta) - 2.0 * m.beta * m.beta) / nc;
  return scale * std::exp(-(lk - t) / m.beta);
}

LowerStepModel LowerStepModel::from_a_sequence(std::int64_t K, double c) {
  if (K < 1) throw std::invalid_argument("LowerStepModel: K must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("LowerStepModel: c must be positive");
  LowerStepModel m;
  m.K = K;
  m.c = c;
  m.b = K > 1 ? a_sequence(K - 1) : Eigen::ArrayXd();
  return m;
}

LowerStepModel LowerStepModel::log_squared(std::int64_t K, double c) {
  if (K < 1) throw std::invalid_argument("LowerStepModel: K must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("LowerStepModel: c must be positive");
  LowerStepModel m;
  m.K = K;
  m.c = c;
  m.b = Eigen::ArrayXd::LinSpaced(K - 1, 1.0, static_cast<double>(K - 1)).log().square() / c;
  return m;
}

LowerStepModel LowerStepModel::pure_a(std::int64_t k_max) {
  LowerStepModel m;
  m.K = k_max + 1;
  m.c = 1.0;
  m.b = a_sequence(k_max);
  return m;
}

double LowerStepModel::c_at(std::int64_t k) const {
  double out = c;
  for (const auto& s : steps) {
    if (k >= s.K) out = s.c;
  }
  return out;
}

void LowerStepModel::check() const {
  if (b.size() != K - 1) throw std::invalid_argument("LowerStepModel: b must hold K - 1 entries");
  if (!(c > 0.0)) throw std::invalid_argument("LowerStepModel: c must be positive");
  double prev = 0.0;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    if (!(b[i] >= prev)) {
      throw std::invalid_argument("LowerStepModel: b not nonnegative nondecreasing at k = " +
                                  std::to_string(i + 1));
    }
    prev = b[i];
  }
  const double junction = std::pow(std::log(static_cast<double>(K)), 2) / c;
  if (K >= 2 && prev > junction) {
    throw std::invalid_argument("LowerStepModel: b_{K-1} exceeds log(K)^2 / c");
  }
  std::int64_t last = K;
  for (const auto& s : steps) {
    if (s.K <= last || !(s.c > 0.0)) {
      throw std::invalid_argument("LowerStepModel: steps must have increasing K_r > K, c_r > 0");
    }
    last = s.K;
  }
}

double lower_model_value(const LowerStepModel& m, int N, std::int64_t k) {
  check_level(N, k);
  if (k < m.K) return 1.0 - m.b[k - 1] / N;
  const double cc = m.c_at(k);
  const double lk = std::log(static_cast<double>(k));
  if (lk < std::sqrt(N * cc)) return 1.0 - lk * lk / (N * cc);
  return 0.0;
}

double lower_model_eval(const LowerStepModel& m, int N, std::int64_t k) {
  const double v = lower_model_value(m, N, k);
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::domain_error("lower model leaves [0, 1] at N = " + std::to_string(N) +
                            ", k = " + std::to_string(k));
  }
  if (k > 1 && v > lower_model_value(m, N, k - 1)) {
    throw std::domain_error("lower model is not monotone at N = " + std::to_string(N) +
                            ", k = " + std::to_string(k));
  }
  return v;
}

// ---------------------------------------------------------------------------

CertificateReport certify_upper(const UpperModel& m, Range n_range, Range k_range, bool keep_grid) {
  check_ranges(n_range, k_range);
  const std::int64_t kmax = k_range.hi;
  std::vector<RowResult> rows(n_range.size());

  parallel_for(n_range.size(), [&](std::int64_t i) {
    const int N = static_cast<int>(n_range.lo + i);
    Eigen::ArrayXd q(kmax), q_next(kmax);
    for (std::int64_t k = 1; k <= kmax; ++k) {
      q[k - 1] = upper_model_eval(m, N, k);
      q_next[k - 1] = upper_model_eval(m, N + 1, k);
    }
    const Eigen::ArrayXd diffs = kmax > 1 ? Eigen::ArrayXd(q.head(kmax - 1) - q.tail(kmax - 1))
                                          : Eigen::ArrayXd();
    const double t = m.threshold(N);
    RowResult& row = rows[i];
    if (keep_grid) row.residuals.reserve(k_range.size());
    for (std::int64_t k = k_range.lo; k <= kmax; ++k) {
      const double r = (q_next[k - 1] - q[k - 1]) - 0.5 * convolution_term(q, diffs, k);
      row.record(N, k, r);
      if (keep_grid) row.residuals.push_back(r);
      const double lk = std::log(static_cast<double>(k));
      if (k >= 2 && lk < t) row.gamma = std::min(row.gamma, r * N * N / (lk * lk));
    }
  });
  return reduce_rows(rows, n_range, k_range, keep_grid, true);
}

CertificateReport certify_lower(const LowerStepModel& m, Range n_range, Range k_range,
                                bool keep_grid) {
  check_ranges(n_range, k_range);
  const std::int64_t kmax = k_range.hi;
  std::vector<RowResult> rows(n_range.size());

  parallel_for(n_range.size(), [&](std::int64_t i) {
    const int N = static_cast<int>(n_range.lo + i);
    Eigen::ArrayXd q(kmax), q_next(kmax);
    for (std::int64_t k = 1; k <= kmax; ++k) {
      q[k - 1] = lower_model_value(m, N, k);
      q_next[k - 1] = lower_model_value(m, N + 1, k);
    }
    const Eigen::ArrayXd diffs = kmax > 1 ? Eigen::ArrayXd(q.head(kmax - 1) - q.tail(kmax - 1))
                                          : Eigen::ArrayXd();
    RowResult& row = rows[i];
    if (keep_grid) row.residuals.reserve(k_range.size());

    // membership of the prefix in S_k
    for (std::int64_t k = 1; k <= kmax; ++k) {
      const double v = q[k - 1];
      double breach = std::min(v, 1.0 - v);
      if (k > 1) breach = std::min(breach, q[k - 2] - v);
      if (breach < 0.0) row.record(N, k, breach);
    }
    for (std::int64_t k = k_range.lo; k <= kmax; ++k) {
      const double r = 0.5 * convolution_term(q, diffs, k) - (q_next[k - 1] - q[k - 1]);
      row.record(N, k, r);
      if (keep_grid) row.residuals.push_back(r);
    }
  });
  return reduce_rows(rows, n_range, k_range, keep_grid, false);
}

namespace {

template <typename Certify>
std::optional<int> onset(int n_lo, int n_hi, Certify&& certify_row) {
  if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("onset: invalid N range");
  std::optional<int> start;
  for (int N = n_hi; N >= n_lo; --N) {
    if (!certify_row(N)) break;
    start = N;
  }
  return start;
}

}  // namespace

std::optional<int> upper_onset(const UpperModel& m, int n_lo, int n_hi, Range k_range) {
  return onset(n_lo, n_hi, [&](int N) { return certify_upper(m, {N, N}, k_range).passed(); });
}

std::optional<int> lower_onset(const LowerStepModel& m, int n_lo, int n_hi, Range k_range) {
  return onset(n_lo, n_hi, [&](int N) { return certify_lower(m, {N, N}, k_range).passed(); });
}

SandwichReport sandwich_check(int N, const UpperModel& upper, const LowerStepModel& lower,
                              const SurvivalCurve& exact, int upper_shift, int lower_shift) {
  if (N < 1) throw std::invalid_argument("sandwich_check: N must be >= 1");
  if (exact.level != N) throw std::invalid_argument("sandwich_check: exact curve is at another level");
  constexpr double kSlack = 1e-12;
  SandwichReport rep;
  rep.N = N;
  rep.upper_shift = upper_shift;
  rep.lower_shift = lower_shift;
  const int upper_level = N + upper_shift;
  const int lower_level = N - lower_shift;
  for (std::int64_t k = 1; k <= exact.size(); ++k) {
    const double p = exact.at(k);
    ++rep.checked;
    if (upper_level >= 1 && p > upper_model_eval(upper, upper_level, k) + kSlack) {
      ++rep.upper_violations;
      if (!rep.first_upper_violation) rep.first_upper_violation = k;
    }
    if (lower_level >= 1 && std::max(0.0, lower_model_value(lower, lower_level, k)) > p + kSlack) {
      ++rep.lower_violations;
      if (!rep.first_lower_violation) rep.first_lower_violation = k;
    }
  }
  return rep;
}

}  // namespace minplus
