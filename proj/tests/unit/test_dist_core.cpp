#include "minplus/convolution.hpp"
#include "minplus/evolution.hpp"
#include "minplus/mass_function.hpp"
#include "oracles/enumeration.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace minplus;

TEST_CASE("initial condition is a single unit leaf") {
  const MassFunction m = point_mass_initial(0.5);
  CHECK(m.support() == 1);
  CHECK(m.probs[0] == 1.0);
  CHECK(m.tail_mass == 0.0);
  CHECK(m.level == 1);
}

TEST_CASE("depth 3 at p = 1/2 matches the eight-labelling count") {
  const MassFunction m = evolve(3, 0.5, TruncationPolicy::fixed(8, TailMode::kExact));
  REQUIRE(m.support() == 4);
  const double pmf[] = {0.375, 0.25, 0.25, 0.125};
  const double surv[] = {1.0, 0.625, 0.375, 0.125};
  const SurvivalCurve s = to_survival(m);
  for (int k = 1; k <= 4; ++k) {
    CHECK(m.probs[k - 1] == doctest::Approx(pmf[k - 1]).epsilon(1e-15));
    CHECK(s.at(k) == doctest::Approx(surv[k - 1]).epsilon(1e-15));
  }
  CHECK(s.at(5) == 0.0);
}

TEST_CASE("step_pmf agrees with the rational enumeration") {
  for (auto [num, den] : {std::pair{1, 5}, std::pair{1, 2}, std::pair{9, 10}}) {
    const oracle::Rational pr(num, den);
    const double p = static_cast<double>(num) / den;
    for (int N = 1; N <= 5; ++N) {
      const auto law = oracle::enumerate_law(N, pr);
      const MassFunction m = evolve(N, p, TruncationPolicy::fixed(64, TailMode::kExact));
      for (const auto& [k, w] : law) {
        REQUIRE(k <= m.support());
        const double want = static_cast<double>(w.numerator()) / static_cast<double>(w.denominator());
        CHECK(std::abs(m.probs[k - 1] - want) < 1e-15);
      }
    }
  }
}

TEST_CASE("step_pmf agrees with the general-p survival oracle") {
  for (double p : {0.25, 0.5, 0.65}) {
    const auto S = oracle::survival_law(11, p);
    const SurvivalCurve s = to_survival(evolve(11, p, TruncationPolicy::fixed(1024)));
    for (std::size_t k = 1; k < S.size(); ++k) CHECK(std::abs(s.at(k) - S[k]) < 1e-12);
  }
}

TEST_CASE("step_survival reproduces step_pmf at p = 1/2") {
  SurvivalCurve s;
  s.values = Array::Zero(64);
  s.values[0] = 1.0;
  MassFunction m = point_mass_initial(0.5);
  for (int N = 2; N <= 9; ++N) {
    s = step_survival(s);
    m = step_pmf(m, TruncationPolicy::fixed(256));
    const SurvivalCurve ref = to_survival(m);
    for (int k = 1; k <= 64; ++k) CHECK(std::abs(s.at(k) - ref.at(k)) < 1e-13);
  }
  SurvivalCurve bad = s;
  bad.p_plus = 0.4;
  CHECK_THROWS_AS(step_survival(bad), std::domain_error);
}

TEST_CASE("step_survival truncated prefix stays exact and carries the tail floor") {
  SurvivalCurve small;
  small.values = Array::Zero(8);
  small.values[0] = 1.0;
  for (int N = 2; N <= 10; ++N) small = step_survival(small);
  const SurvivalCurve full = to_survival(evolve(10, 0.5, TruncationPolicy::fixed(512)));
  for (int k = 1; k <= 8; ++k) CHECK(std::abs(small.at(k) - full.at(k)) < 1e-13);
  CHECK(std::abs(small.tail_floor - full.at(9)) < 1e-13);
}

TEST_CASE("tail lumping keeps small-k probabilities exact") {
  const MassFunction exact = evolve(12, 0.5, TruncationPolicy::fixed(4096));
  const MassFunction lumped = evolve(12, 0.5, TruncationPolicy::fixed(40));
  CHECK(lumped.support() == 40);
  CHECK(lumped.tail_mass > 0.0);
  CHECK(std::abs(lumped.total() - 1.0) < 1e-12);
  for (int k = 1; k <= 40; ++k) CHECK(std::abs(lumped.probs[k - 1] - exact.probs[k - 1]) < 1e-13);
  CHECK(std::abs(lumped.tail_mass - exact.probs.tail(exact.support() - 40).sum()) < 1e-12);
}

TEST_CASE("tail modes") {
  SUBCASE("drop-and-renormalize leaves no tail and reports the loss") {
    const auto res = evolve_with_history(10, 0.5, TruncationPolicy::fixed(16, TailMode::kDropRenormalize));
    CHECK(res.mass.tail_mass == 0.0);
    CHECK(res.dropped_mass > 0.0);
    CHECK(std::abs(res.mass.probs.sum() - 1.0) < 1e-12);
  }
  SUBCASE("exact mode refuses to truncate") {
    CHECK_THROWS_AS(evolve(6, 0.5, TruncationPolicy::fixed(8, TailMode::kExact)), std::length_error);
    CHECK_NOTHROW(evolve(4, 0.5, TruncationPolicy::fixed(8, TailMode::kExact)));
  }
  SUBCASE("tail budget") {
    auto policy = TruncationPolicy::fixed(8);
    policy.tail_budget = 1e-3;
    CHECK_THROWS_AS(evolve(12, 0.5, policy), TailBudgetExceeded);
  }
}

TEST_CASE("mass stays normalized and nonnegative through FFT-sized levels") {
  MassFunction m = point_mass_initial(0.5);
  const auto policy = TruncationPolicy::fixed(1 << 15);
  for (int N = 2; N <= 24; ++N) {
    m = step_pmf(m, policy);
    CHECK(m.probs.minCoeff() >= 0.0);
    CHECK(std::abs(m.total() - 1.0) < 1e-12);
  }
}

TEST_CASE("FFT, sparse and direct self-convolutions agree") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Array a(5000);
  for (auto& x : a) x = u(rng);
  a /= a.sum();
  const Array d = self_convolve_direct(a);
  const Array f = self_convolve_fft(a);
  REQUIRE(d.size() == f.size());
  CHECK((d - f).abs().maxCoeff() < 1e-15);

  Array sparse = Array::Zero(10000);
  sparse[3] = 0.25;
  sparse[9000] = 0.75;
  const Array s = self_convolve(sparse);
  CHECK(s[6] == 0.0625);
  CHECK(s[9003] == 2 * 0.25 * 0.75);
  CHECK(s[18000] == 0.5625);
  CHECK(self_convolve(Array()).size() == 0);
}

TEST_CASE("P(X_N = k) is nonincreasing in k at p = 1/2") {
  // unpublished remark; checked empirically only
  MassFunction m = point_mass_initial(0.5);
  for (int N = 2; N <= 14; ++N) {
    m = step_pmf(m, TruncationPolicy::fixed(1 << 13));
    for (Eigen::Index i = 1; i < m.support(); ++i) CHECK(m.probs[i] <= m.probs[i - 1] + 1e-15);
  }
}

TEST_CASE("survival and mass conversions round-trip") {
  const MassFunction m = evolve(9, 0.4, TruncationPolicy::fixed(50));
  const SurvivalCurve s = to_survival(m);
  CHECK(s.at(1) == doctest::Approx(1.0));
  CHECK(s.tail_floor == m.tail_mass);
  const MassFunction back = to_mass(s, m.k_max);
  CHECK((back.probs - m.probs).abs().maxCoeff() < 1e-15);
  CHECK(back.tail_mass == m.tail_mass);
}

TEST_CASE("validation rejects broken inputs") {
  MassFunction m = point_mass_initial(0.5);
  m.probs[0] = 0.5;
  CHECK_THROWS_AS(validate(m), std::invalid_argument);
  m = point_mass_initial(0.5);
  m.p_plus = 1.5;
  CHECK_THROWS_AS(validate(m), std::invalid_argument);
  CHECK_THROWS_AS(evolve(0, 0.5, TruncationPolicy::fixed(8)), std::invalid_argument);
  CHECK_THROWS_AS(evolve(3, -0.1, TruncationPolicy::fixed(8)), std::invalid_argument);
  CHECK_THROWS_AS(validate(TruncationPolicy::fixed(0)), std::invalid_argument);
}

TEST_CASE("growth rule caps") {
  const TruncationPolicy pol = TruncationPolicy::automatic();
  CHECK(pol.cap_for_level(1) == 2);
  CHECK(pol.cap_for_level(5) == 16);
  CHECK(pol.cap_for_level(200) == pol.growth_ceiling);
  for (int N = 2; N < 100; ++N) CHECK(pol.cap_for_level(N + 1) >= pol.cap_for_level(N));
  const MassFunction m = evolve(18, 0.5, pol);
  CHECK(m.support() == 1 << 17);
  CHECK(m.tail_mass == 0.0);
}

TEST_CASE("moments") {
  const MassFunction m = evolve(3, 0.5, TruncationPolicy::fixed(8));
  const Moments mo = moments(m);
  CHECK(mo.mean_x == doctest::Approx(0.375 + 0.5 + 0.75 + 0.5));
  CHECK_FALSE(mo.truncated);
  CHECK(moments(evolve(12, 0.5, TruncationPolicy::fixed(16))).truncated);
}
