#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace graphfool {

/// Runs body(0..n-1) on up to n_threads workers. Callers own determinism:
/// each index must write only to its own slot.
inline void parallel_for(std::size_t n, std::size_t n_threads,
                         const std::function<void(std::size_t)>& body) {
  n_threads = std::max<std::size_t>(1, std::min(n_threads, n));
  if (n_threads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) {
    pool.emplace_back([&next, n, &body] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace graphfool
