#include "minplus/evolution.hpp"
#include "minplus/rng.hpp"
#include "minplus/simulate.hpp"

#include <doctest.h>

#include <set>

using namespace minplus;

TEST_CASE("xoshiro256** reference output") {
  // first outputs of the reference implementation from state {1, 2, 3, 4}
  auto g = Xoshiro256::from_state({1, 2, 3, 4});
  CHECK(g() == 11520u);
  CHECK(g() == 0u);
  CHECK(g() == 1509978240u);
  CHECK(g() == 1215971899390074240u);
}

TEST_CASE("substreams differ and are reproducible") {
  auto a = Xoshiro256::substream(42, 0), b = Xoshiro256::substream(42, 1), c = Xoshiro256::substream(42, 1);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) {
    const auto y = b(), z = c();
    CHECK(y == z);
    seen.insert(a());
    seen.insert(y);
  }
  CHECK(seen.size() == 200);
}

TEST_CASE("degenerate trees") {
  Xoshiro256 rng(1);
  CHECK(sample_one(1, 0.5, rng) == 1);
  CHECK(sample_one(6, 1.0, rng) == 32);
  CHECK(sample_one(6, 0.0, rng) == 1);
  CHECK(sample_one(21, 1.0, rng) == (std::uint64_t{1} << 20));
  CHECK_THROWS_AS(sample_one(0, 0.5, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_one(64, 0.5, rng), std::invalid_argument);
}

TEST_CASE("draws stay inside the support") {
  Xoshiro256 rng(9);
  for (int i = 0; i < 2000; ++i) {
    const auto v = sample_one(8, 0.5, rng);
    CHECK(v >= 1);
    CHECK(v <= 128);
  }
}

TEST_CASE("run is deterministic for a fixed seed and worker count") {
  SimConfig cfg{9, 0.5, 30001, 123, 4};
  const auto a = run(cfg), b = run(cfg);
  CHECK(a.counts == b.counts);
  CHECK(a.n == 30001);
  cfg.workers = 3;
  CHECK(run(cfg).n == 30001);
  cfg.workers = 0;
  CHECK_THROWS_AS(run(cfg), std::invalid_argument);
}

TEST_CASE("small-depth Monte Carlo agrees with the exact law") {
  for (double p : {0.3, 0.5, 0.7}) {
    const auto s = run(SimConfig{6, p, 200000, 77, 2});
    const auto cmp = compare_to_exact(s, evolve(6, p, TruncationPolicy::fixed(32)));
    CHECK(cmp.max_abs_cdf_gap < 0.006);
    CHECK(cmp.chi2_p_value > 1e-4);
    CHECK(cmp.chi2_dof >= 1);
  }
}

TEST_CASE("comparison rejects mismatched inputs") {
  const auto s = run(SimConfig{5, 0.5, 100, 1, 1});
  CHECK_THROWS_AS(compare_to_exact(s, evolve(6, 0.5, TruncationPolicy::fixed(32))), std::invalid_argument);
  CHECK_THROWS_AS(compare_to_exact(s, evolve(5, 0.4, TruncationPolicy::fixed(32))), std::invalid_argument);
}

TEST_CASE("summary quantiles") {
  const auto s = run(SimConfig{10, 0.5, 5000, 3, 1});
  CHECK(s.scaled_quantiles.size() == 5);
  for (std::size_t i = 1; i < s.scaled_quantiles.size(); ++i) {
    CHECK(s.scaled_quantiles[i].second >= s.scaled_quantiles[i - 1].second);
  }
}
