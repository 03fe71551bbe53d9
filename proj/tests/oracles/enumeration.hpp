#ifndef MINPLUS_TESTS_ORACLES_ENUMERATION_HPP_
#define MINPLUS_TESTS_ORACLES_ENUMERATION_HPP_

// Independent reference implementations. Nothing here calls into the
// library; the tests compare the library against these.

#include <boost/rational.hpp>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace minplus::oracle {

using Rational = boost::rational<std::int64_t>;

/// Law of X_depth by brute force over every +/min labelling of the internal
/// nodes of the complete tree with 2^(depth-1) unit leaves. Exact in
/// rationals; feasible for depth <= 4 (7 internal nodes, 128 labellings).
inline std::map<std::int64_t, Rational> enumerate_law(int depth, Rational p) {
  if (depth < 1 || depth > 5) throw std::invalid_argument("enumerate_law: depth in [1, 5]");
  const int internal = (1 << (depth - 1)) - 1;
  std::map<std::int64_t, Rational> law;
  for (std::uint32_t mask = 0; mask < (1u << internal); ++mask) {
    // level-order: node i has children 2i+1, 2i+2; leaves hold 1
    std::vector<std::int64_t> value(2 * internal + 1, 1);
    Rational weight(1);
    for (int i = internal - 1; i >= 0; --i) {
      const bool plus = (mask >> i) & 1u;
      const std::int64_t a = value[2 * i + 1], b = value[2 * i + 2];
      value[i] = plus ? a + b : std::min(a, b);
      weight *= plus ? p : Rational(1) - p;
    }
    law[value[0]] += weight;
  }
  return law;
}

/// One step of the survival recurrence for general p written directly from
/// the definition of X' (min with prob 1 - p, sum with prob p):
///   P(X' >= k) = (1-p) S_k^2 + p [sum_{j=1}^{k-1} (S_j - S_{j+1}) S_{k-j} + S_k].
/// S is indexed from 1 (S[0] is unused); values beyond the vector are 0,
/// so the input must cover the full support.
inline std::vector<double> survival_step(const std::vector<double>& S, double p) {
  const std::size_t K = S.size() - 1;
  auto at = [&](std::size_t k) { return k <= K ? S[k] : 0.0; };
  std::vector<double> out(2 * K + 1, 0.0);
  for (std::size_t k = 1; k <= 2 * K; ++k) {
    double sum = at(k);
    for (std::size_t j = 1; j < k; ++j) sum += (at(j) - at(j + 1)) * at(k - j);
    out[k] = (1.0 - p) * at(k) * at(k) + p * sum;
  }
  out[0] = 1.0;
  return out;
}

/// Survival curve of X_depth via survival_step; exact support, no caps.
inline std::vector<double> survival_law(int depth, double p) {
  std::vector<double> S{1.0, 1.0};
  for (int level = 2; level <= depth; ++level) S = survival_step(S, p);
  return S;
}

}  // namespace minplus::oracle

#endif  // MINPLUS_TESTS_ORACLES_ENUMERATION_HPP_
