#pragma once

// Deterministic work-unit parallelism. Units pull indices from an atomic
// counter; callers write results into preassigned slots so the outcome is
// independent of scheduling. If any unit throws, the exception from the
// lowest index is rethrown after all units finish (deterministic error).

#include <atomic>
#include <exception>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

namespace costid {

inline void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  if (workers <= 1 || n == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const int nt = std::min(workers, n);
  std::atomic<int> next{0};
  std::vector<int> err_index(nt, std::numeric_limits<int>::max());
  std::vector<std::exception_ptr> err(nt);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      for (;;) {
        const int i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= n) break;
        try {
          fn(i);
        } catch (...) {
          if (i < err_index[t]) {
            err_index[t] = i;
            err[t] = std::current_exception();
          }
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  int best = -1;
  for (int t = 0; t < nt; ++t)
    if (err[t] && (best < 0 || err_index[t] < err_index[best])) best = t;
  if (best >= 0) std::rethrow_exception(err[best]);
}

}  // namespace costid
