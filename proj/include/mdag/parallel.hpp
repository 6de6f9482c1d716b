#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace mdag {

/// Worker count for sweep-style loops. Bounded by MDAG_PROBE_THREADS when the
/// variable is set; otherwise the hardware concurrency.
inline unsigned probe_thread_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MDAG_PROBE_THREADS")) {
    try {
      long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 1024));
    } catch (...) {
      // ignore malformed values, fall back to hardware count
    }
  }
  return hw;
}

/// Runs fn(begin, end) over a partition of [0, n) on probe_thread_count()
/// threads. fn must be safe to run concurrently on disjoint ranges.
inline void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  unsigned workers = probe_thread_count();
  if (n == 0) return;
  if (workers <= 1 || n < 2 * workers) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t b = std::min(n, static_cast<std::size_t>(w) * chunk);
    std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back(fn, b, e);
  }
  for (auto& t : pool) t.join();
}

}  // namespace mdag
