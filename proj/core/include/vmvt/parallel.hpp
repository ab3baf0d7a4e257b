#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vmvt {

// Worker count used when a caller passes 0: $VMVT_THREADS if set and
// positive, otherwise std::thread::hardware_concurrency().
unsigned default_workers();

inline unsigned resolve_workers(unsigned requested) {
  return requested == 0 ? default_workers() : requested;
}

// Calls fn(i) for every i in [0, n) on up to `workers` threads with dynamic
// scheduling. The first exception thrown by any task is rethrown here after
// all threads have joined. Callers that need determinism must make fn(i)
// write only to slot i of a preallocated result.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  workers = resolve_workers(workers);
  if (n == 0) return;
  if (workers <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    for (;;) {
      std::size_t const i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::size_t const thread_count = std::min<std::size_t>(workers, n);
  std::vector<std::jthread> threads;
  threads.reserve(thread_count - 1);
  for (std::size_t t = 1; t < thread_count; ++t) threads.emplace_back(body);
  body();
  threads.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace vmvt
