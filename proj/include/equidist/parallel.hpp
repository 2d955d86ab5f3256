#pragma once

// Deterministic parallel map: work items are pure functions of their index and
// write only to their own slot, so the worker count never affects results.
// Reductions are always performed sequentially in index order by the caller.

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace equidist {

inline unsigned resolve_worker_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("EQUIDIST_THREADS")) {
    long v = std::atol(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

template <class F>
void parallel_for(std::size_t n, unsigned workers, F&& f) {
  workers = resolve_worker_count(workers);
  if (workers <= 1 || n < 2048) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  const std::size_t chunk = 256;
  auto run = [&]() {
    for (;;) {
      std::size_t begin = next.fetch_add(chunk);
      if (begin >= n) return;
      std::size_t end = std::min(begin + chunk, n);
      for (std::size_t i = begin; i < end; ++i) f(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned t = 0; t + 1 < workers; ++t) pool.emplace_back(run);
  run();
  for (std::thread& t : pool) t.join();
}

}  // namespace equidist
