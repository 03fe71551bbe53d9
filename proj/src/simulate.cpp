#include "minplus/simulate.hpp"

#include "minplus/constants.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace minplus {
namespace {

/// Bernoulli(p) source for the + operation. p = 1/2 consumes one bit per
/// node; other p compare a full 64-bit draw against p * 2^64.
class PlusCoin {
 public:
  explicit PlusCoin(double p) {
    if (p <= 0.0) {
      mode_ = Mode::kNever;
    } else if (p >= 1.0) {
      mode_ = Mode::kAlways;
    } else if (p == 0.5) {
      mode_ = Mode::kBits;
    } else {
      mode_ = Mode::kThreshold;
      threshold_ = static_cast<std::uint64_t>(std::ldexp(p, 64));
    }
  }

  bool operator()(Xoshiro256& rng) {
    switch (mode_) {
      case Mode::kNever:
        return false;
      case Mode::kAlways:
        return true;
      case Mode::kBits:
        if (remaining_ == 0) {
          bits_ = rng();
          remaining_ = 64;
        }
        --remaining_;
        {
          const bool bit = bits_ & 1u;
          bits_ >>= 1;
          return bit;
        }
      case Mode::kThreshold:
        return rng() < threshold_;
    }
    return false;
  }

 private:
  enum class Mode { kNever, kAlways, kBits, kThreshold };
  Mode mode_ = Mode::kBits;
  std::uint64_t threshold_ = 0;
  std::uint64_t bits_ = 0;
  int remaining_ = 0;
};

using CountMap = std::unordered_map<std::uint64_t, std::uint64_t>;

CountMap sample_many(int depth, double p_plus, std::uint64_t count, Xoshiro256 rng) {
  CountMap local;
  for (std::uint64_t i = 0; i < count; ++i) ++local[sample_one(depth, p_plus, rng)];
  return local;
}

}  // namespace

void validate(const SimConfig& cfg) {
  if (cfg.depth < 1 || cfg.depth > kMaxSimDepth) {
    throw std::invalid_argument("SimConfig: depth must be in [1, 63]");
  }
  if (!(cfg.p_plus >= 0.0 && cfg.p_plus <= 1.0)) {
    throw std::invalid_argument("SimConfig: p_plus outside [0, 1]");
  }
  if (cfg.n_samples < 1) throw std::invalid_argument("SimConfig: n_samples must be >= 1");
  if (cfg.workers < 1) throw std::invalid_argument("SimConfig: workers must be >= 1");
}

std::uint64_t sample_one(int depth, double p_plus, Xoshiro256& rng) {
  if (depth < 1 || depth > kMaxSimDepth) {
    throw std::invalid_argument("sample_one: depth must be in [1, 63]");
  }
  PlusCoin plus(p_plus);
  const std::uint64_t leaves = std::uint64_t{1} << (depth - 1);
  std::uint64_t stack[kMaxSimDepth + 1];
  int top = 0;
  for (std::uint64_t leaf = 0; leaf < leaves; ++leaf) {
    std::uint64_t value = 1;
    // completing leaf i closes one subtree per trailing one bit of i
    const int merges = std::countr_zero(leaf + 1);
    for (int m = 0; m < merges; ++m) {
      const std::uint64_t left = stack[--top];
      value = plus(rng) ? left + value : std::min(left, value);
    }
    stack[top++] = value;
  }
  return stack[0];
}

EmpiricalSummary summarize(int depth, double p_plus,
                           std::map<std::uint64_t, std::uint64_t> counts) {
  EmpiricalSummary s;
  s.depth = depth;
  s.p_plus = p_plus;
  s.counts = std::move(counts);
  double log_sum = 0.0;
  for (const auto& [value, c] : s.counts) {
    s.n += c;
    log_sum += static_cast<double>(c) * std::log(static_cast<double>(value));
  }
  if (s.n == 0) return s;
  s.mean_log = log_sum / static_cast<double>(s.n);

  const double scale = std::sqrt(kCriticalC * depth);
  for (double level : kQuantileLevels) {
    const double target = level * static_cast<double>(s.n);
    std::uint64_t cum = 0;
    for (const auto& [value, c] : s.counts) {
      cum += c;
      if (static_cast<double>(cum) >= target) {
        s.scaled_quantiles.emplace_back(level, std::log(static_cast<double>(value)) / scale);
        break;
      }
    }
  }
  return s;
}

EmpiricalSummary run(const SimConfig& cfg) {
  validate(cfg);
  const auto workers = static_cast<std::uint64_t>(cfg.workers);
  const std::uint64_t base = cfg.n_samples / workers;
  const std::uint64_t extra = cfg.n_samples % workers;

  std::vector<CountMap> partial(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t share = base + (w < extra ? 1 : 0);
    pool.emplace_back([&, w, share] {
      partial[w] = sample_many(cfg.depth, cfg.p_plus, share, Xoshiro256::substream(cfg.seed, w));
    });
  }
  for (auto& t : pool) t.join();

  std::map<std::uint64_t, std::uint64_t> merged;
  for (const auto& local : partial) {
    for (const auto& [value, c] : local) merged[value] += c;
  }
  return summarize(cfg.depth, cfg.p_plus, std::move(merged));
}

ExactComparison compare_to_exact(const EmpiricalSummary& summary, const MassFunction& exact) {
  if (summary.depth != exact.level) {
    throw std::invalid_argument("compare_to_exact: depth " + std::to_string(summary.depth) +
                                " vs exact level " + std::to_string(exact.level));
  }
  if (std::abs(summary.p_plus - exact.p_plus) > 1e-12) {
    throw std::invalid_argument("compare_to_exact: p_plus mismatch");
  }
  if (summary.n == 0) throw std::invalid_argument("compare_to_exact: empty summary");

  ExactComparison out;
  const double n = static_cast<double>(summary.n);
  const Eigen::Index support = exact.probs.size();

  // observed counts per stored value, and above the stored support
  std::vector<double> observed(support, 0.0);
  double observed_above = 0.0;
  for (const auto& [value, c] : summary.counts) {
    if (value >= 1 && value <= static_cast<std::uint64_t>(support)) {
      observed[value - 1] += static_cast<double>(c);
    } else {
      observed_above += static_cast<double>(c);
    }
  }

  double emp_cdf = 0.0;
  double exact_cdf = 0.0;
  for (Eigen::Index i = 0; i < support; ++i) {
    emp_cdf += observed[i] / n;
    exact_cdf += exact.probs[i];
    out.max_abs_cdf_gap = std::max(out.max_abs_cdf_gap, std::abs(emp_cdf - exact_cdf));
  }

  // pool consecutive cells until the expected count reaches 5
  std::vector<std::pair<double, double>> bins;  // (observed, expected)
  double obs_acc = 0.0;
  double exp_acc = 0.0;
  auto push_cell = [&](double o, double e) {
    obs_acc += o;
    exp_acc += e;
    if (exp_acc >= 5.0) {
      bins.emplace_back(obs_acc, exp_acc);
      obs_acc = exp_acc = 0.0;
    }
  };
  for (Eigen::Index i = 0; i < support; ++i) push_cell(observed[i], n * exact.probs[i]);
  push_cell(observed_above, n * exact.tail_mass);
  if (obs_acc > 0.0 || exp_acc > 0.0) {
    if (bins.empty()) {
      bins.emplace_back(obs_acc, exp_acc);
    } else {
      bins.back().first += obs_acc;
      bins.back().second += exp_acc;
    }
  }

  for (const auto& [o, e] : bins) {
    if (e > 0.0) {
      out.chi2_stat += (o - e) * (o - e) / e;
    } else if (o > 0.0) {
      out.chi2_stat = std::numeric_limits<double>::infinity();
    }
  }
  out.chi2_dof = static_cast<int>(bins.size()) - 1;
  if (out.chi2_dof >= 1) {
    out.chi2_p_value = std::isfinite(out.chi2_stat)
                           ? boost::math::gamma_q(0.5 * out.chi2_dof, 0.5 * out.chi2_stat)
                           : 0.0;
  } else {
    out.chi2_p_value = out.chi2_stat == 0.0 ? 1.0 : 0.0;
  }
  return out;
}

}  // namespace minplus
