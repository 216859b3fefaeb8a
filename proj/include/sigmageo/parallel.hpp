#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace sigmageo {

// Worker cap: SIGMA_GEOMETRY_THREADS when set, hardware concurrency otherwise.
inline int max_threads() {
  if (const char* env = std::getenv("SIGMA_GEOMETRY_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Static index partition. Work items only write state owned by their index, so
// results are identical to the serial run.
template <typename Fn>
void parallel_for(long long n, const Fn& body) {
  if (n <= 0) return;
  int workers = max_threads();
  if (workers <= 1 || n < 256) {
    for (long long i = 0; i < n; ++i) body(i);
    return;
  }
  if (static_cast<long long>(workers) > n) workers = static_cast<int>(n);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  long long chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    long long begin = w * chunk;
    long long end = begin + chunk < n ? begin + chunk : n;
    if (begin >= end) break;
    pool.emplace_back([begin, end, &body] {
      for (long long i = begin; i < end; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace sigmageo
