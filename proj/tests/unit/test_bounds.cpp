#include "minplus/bounds.hpp"
#include "minplus/evolution.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace minplus;

namespace {

Array random_sk_point(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Array x(k);
  for (auto& v : x) v = u(rng);
  std::sort(x.data(), x.data() + k, std::greater<>());
  return x;
}

}  // namespace

TEST_CASE("f_eval and f_grad on hand-expanded inputs") {
  CHECK(f_eval(Array::Constant(1, 0.7)) == 0.7);
  Array x(2);
  x << 1.0, 0.5;
  CHECK(f_eval(x) == 0.625);
  const Array g = f_grad(x);
  CHECK(g[1] == 0.5);
  CHECK(g[0] == 0.5);
  // works on matrix expressions too
  Eigen::VectorXd v(2);
  v << 1.0, 0.5;
  CHECK(f_eval(v) == 0.625);
}

TEST_CASE("f_grad matches central differences on S_k") {
  std::mt19937_64 rng(11);
  for (int k : {2, 5, 20, 100}) {
    for (int t = 0; t < 200; ++t) {
      const Array x = random_sk_point(rng, k);
      const Array g = f_grad(x);
      CHECK(g.minCoeff() >= 0.0);
      for (int j = 0; j < k; ++j) {
        Array up = x, dn = x;
        up[j] += 1e-6;
        dn[j] -= 1e-6;
        const double fd = (f_eval(up) - f_eval(dn)) / 2e-6;
        CHECK(std::abs(fd - g[j]) <= 1e-5 * std::max(1.0, std::abs(g[j])));
      }
    }
  }
}

TEST_CASE("f is monotone on S_k") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k : {3, 10, 40}) {
    for (int t = 0; t < 300; ++t) {
      const Array x = random_sk_point(rng, k);
      // t -> t + s t (1 - t) is increasing on [0, 1], so y stays in S_k and y >= x
      const double s = u(rng);
      const Array y = x + s * (1.0 - x) * x;
      CHECK(f_eval(x) <= f_eval(y) + 1e-15);
    }
  }
}

TEST_CASE("f applied to the exact survival prefix gives the next level") {
  MassFunction m = point_mass_initial(0.5);
  for (int N = 1; N <= 12; ++N) {
    const MassFunction next = step_pmf(m, TruncationPolicy::fixed(4096));
    const SurvivalCurve s = to_survival(m), s1 = to_survival(next);
    Array prefix(128);
    for (int k = 1; k <= 128; ++k) prefix[k - 1] = s.at(k);
    for (int k = 1; k <= 128; ++k) CHECK(std::abs(f_eval(prefix.head(k)) - s1.at(k)) < 1e-12);
    m = next;
  }
}

TEST_CASE("b and a sequences") {
  const Array b = b_sequence(3);
  CHECK(b[0] == 0.0);
  CHECK(b[1] == 2.0);
  CHECK(b[2] == doctest::Approx(1.0 + std::sqrt(5.0)).epsilon(1e-15));
  const Array b150 = b_sequence(150);
  CHECK((a_sequence(150) == b150).all());
  for (int k = 2; k <= 150; ++k) {
    const double lk = std::log(static_cast<double>(k));
    CHECK(b150[k - 1] > 3.0 * lk * lk / (std::numbers::pi * std::numbers::pi));
  }
  CHECK_THROWS_AS(b_sequence(0), std::invalid_argument);
  CHECK(weighted_log_square_defect() < -7.0);
}

TEST_CASE("upper model") {
  const UpperModel m(1.1 * kCriticalC, 2.0);
  CHECK(m.admissible());
  CHECK(upper_model_eval(m, 50, 1) == 1.0);
  const int N = 30;
  const double t = m.threshold(N);
  const double lk = t;
  const double branch1 = 1.0 - lk * lk / (N * m.C);
  const double scale = (2.0 * m.beta * std::sqrt(N * m.C + m.beta * m.beta) - 2.0 * m.beta * m.beta) / (N * m.C);
  CHECK(branch1 == doctest::Approx(scale).epsilon(1e-12));
  double prev = 1.0;
  const auto top = static_cast<std::int64_t>(std::exp(2.0 * std::sqrt(N * m.C)));
  for (std::int64_t k = 1; k <= top; k += 1 + k / 50) {
    const double v = upper_model_eval(m, N, k);
    CHECK(v <= prev + 1e-15);
    CHECK(v > 0.0);
    prev = v;
  }
  CHECK_FALSE(UpperModel(0.9 * kCriticalC, 2.0).admissible());
  CHECK_THROWS_AS(UpperModel(1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(upper_model_eval(m, 0, 1), std::invalid_argument);
}

TEST_CASE("lower model branches") {
  const LowerStepModel m = LowerStepModel::from_a_sequence(33, 1.0);
  CHECK_NOTHROW(m.check());
  CHECK(lower_model_eval(m, 100, 1) == 1.0);
  const int N = 50;
  CHECK(lower_model_value(m, N, static_cast<std::int64_t>(std::exp(std::sqrt(N * 1.0))) + 1) == 0.0);

  // junction: with b_K = log(K)^2 / c the two branches meet
  const LowerStepModel smooth = LowerStepModel::log_squared(40, 2.0);
  const double below = 1.0 - std::pow(std::log(40.0), 2) / 2.0 / N;
  CHECK(lower_model_value(smooth, N, 40) == doctest::Approx(below));
  CHECK(lower_model_value(smooth, N, 39) == doctest::Approx(1.0 - std::pow(std::log(39.0), 2) / 2.0 / N));

  // at small N the a_k branch goes negative and the checked eval refuses it
  CHECK_THROWS_AS(lower_model_eval(m, 5, 30), std::domain_error);

  LowerStepModel steps = LowerStepModel::from_a_sequence(33, 1.0);
  steps.steps.push_back({1000, 0.5});
  CHECK(steps.c_at(999) == 1.0);
  CHECK(steps.c_at(1000) == 0.5);
  CHECK_NOTHROW(steps.check());
  steps.steps.push_back({10, 0.5});
  CHECK_THROWS_AS(steps.check(), std::invalid_argument);
}

TEST_CASE("certificates") {
  SUBCASE("k = 1 has zero residual") {
    const auto up = certify_upper(UpperModel(1.2 * kCriticalC, 2.0), {100, 100}, {1, 1}, true);
    REQUIRE(up.residuals.size() == 1);
    CHECK(up.residuals[0][0] == 0.0);
    const auto lo = certify_lower(LowerStepModel::pure_a(10), {100, 100}, {1, 1}, true);
    CHECK(lo.residuals[0][0] == 0.0);
  }
  SUBCASE("pure a_k lower model has margin a_k / (N^2 (N+1))") {
    const LowerStepModel m = LowerStepModel::pure_a(60);
    const auto rep = certify_lower(m, {200, 200}, {1, 60}, true);
    CHECK(rep.passed());
    const Array a = a_sequence(60);
    for (int k = 1; k <= 60; ++k) {
      CHECK(rep.residuals[0][k - 1] == doctest::Approx(a[k - 1] / (200.0 * 200.0 * 201.0)).epsilon(1e-6));
    }
  }
  SUBCASE("lower onset is where the array becomes a survival curve") {
    const auto onset = lower_onset(LowerStepModel::pure_a(150), 1, 400, {1, 150});
    REQUIRE(onset.has_value());
    CHECK(*onset == static_cast<int>(std::ceil(a_sequence(150)[149])));
  }
  SUBCASE("below-critical C is caught") {
    const auto rep = certify_upper(UpperModel(0.9 * kCriticalC, 3.0), {20, 40}, {1, 2000});
    CHECK_FALSE(rep.passed());
    REQUIRE(rep.first_violation.has_value());
    CHECK(rep.first_violation->residual < 0.0);
    CHECK(rep.worst->residual == rep.min_margin);
  }
  SUBCASE("near-critical log-squared splice fails around k = 12000") {
    const auto rep =
        certify_lower(LowerStepModel::log_squared(2, 0.9 * kCriticalC), {10000, 10002}, {12000, 12010});
    CHECK(rep.violations > 0);
  }
  SUBCASE("invalid ranges") {
    CHECK_THROWS_AS(certify_upper(UpperModel(), {0, 3}, {1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(certify_upper(UpperModel(), {5, 3}, {1, 2}), std::invalid_argument);
  }
}

TEST_CASE("sandwich against the exact law") {
  const int N = 40;
  const SurvivalCurve exact = to_survival(evolve(N, 0.5, TruncationPolicy::fixed(1 << 16)));
  const UpperModel up(1.1 * kCriticalC, 2.0);
  const LowerStepModel lo = LowerStepModel::from_a_sequence(33, 1.0);
  const auto unshifted = sandwich_check(N, up, lo, exact, 0, 0);
  CHECK(unshifted.checked == exact.size());
  CHECK(unshifted.violations() == 0);
  CHECK(sandwich_check(N, UpperModel(1.001 * kCriticalC, 2.0), lo, exact, 0, 0).violations() == 0);

  // negative controls: an undersized C or an oversized c must be caught
  const auto bad = sandwich_check(N, UpperModel(0.5 * kCriticalC, 2.0),
                                  LowerStepModel::log_squared(2, 2.0 * kCriticalC), exact, 0, 0);
  CHECK(bad.upper_violations > 0);
  CHECK(bad.lower_violations > 0);
  CHECK_THROWS_AS(sandwich_check(N + 1, up, lo, exact, 0, 0), std::invalid_argument);
}
