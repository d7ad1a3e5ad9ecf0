#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace strip {

/// Worker threads used by the chunked kernels (0 = hardware concurrency).
void set_thread_count(int n);
int thread_count();

/// Runs fn(0..n-1) across the worker pool and returns results indexed by
/// chunk. Reductions over the returned vector are done by the caller in
/// chunk order, so totals do not depend on the thread count.
template <typename R, typename F>
std::vector<R> run_chunks(std::size_t n, F&& fn) {
  std::vector<R> out(n);
  const int workers = std::max(1, std::min<int>(thread_count(),
                                                static_cast<int>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        out[i] = fn(i);
      }
    });
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace strip
