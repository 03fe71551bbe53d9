#ifndef MINPLUS_PARALLEL_HPP_
#define MINPLUS_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace minplus {

/// Runs fn(i) for i in [0, n) on up to hardware_concurrency threads. Each
/// index is visited exactly once; callers write into per-index slots and
/// reduce afterwards so results do not depend on scheduling.
template <typename Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
  if (n <= 0) return;
  const auto hw = static_cast<std::int64_t>(std::max(1u, std::thread::hardware_concurrency()));
  const std::int64_t threads = std::min(hw, n);
  if (threads == 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::int64_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::int64_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace minplus

#endif  // MINPLUS_PARALLEL_HPP_
