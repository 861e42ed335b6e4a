#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace plurex {

// splitmix64-based counter RNG. Each sample index gets its own stream, so
// reductions over samples are independent of how work is partitioned across
// workers (and of the standard library's distribution internals).
struct SampleRng {
  uint64_t state;

  SampleRng(uint64_t seed, uint64_t index) : state(seed * 0x9e3779b97f4a7c15ULL + index + 1) {
    next();
    next();
  }

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in [a,b)
  double uniform(double a, double b) { return a + (b - a) * u01(); }
};

// Worker count: min(hardware, PLUREX_THREADS if set). At least 1. Read on
// every call so tests can vary the cap.
inline int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("PLUREX_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) hw = cap;
  }
  return hw;
}

// Static contiguous partition of [0,n) across workers. Chunks must write
// disjoint state; reductions over chunks must be associative and
// commutative. Under those rules results do not depend on worker count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const int workers = worker_count();
  if (workers == 1 || n < 2) {
    if (n > 0) body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t lo = static_cast<std::size_t>(w) * chunk;
    if (lo >= n) break;
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace plurex
