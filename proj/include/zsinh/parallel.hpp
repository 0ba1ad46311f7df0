#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace zsinh {

// Worker count from ZSINH_THREADS, capped by the hardware; 1 when unset or
// unparsable.
inline int threads_from_env() {
  const char* s = std::getenv("ZSINH_THREADS");
  if (!s) return 1;
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end == s || v < 1) return 1;
  long hw = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<int>(std::min(v, hw));
}

// Runs fn(i) for i in [0, n). Each index is written by exactly one worker so
// callers fill preallocated slots; any reduction happens afterwards in index
// order, which keeps results independent of the thread count.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn, std::size_t min_chunk = 2048) {
  min_chunk = std::max<std::size_t>(min_chunk, 1);
  std::size_t workers = std::min<std::size_t>(std::max(threads, 1), (n + min_chunk - 1) / min_chunk);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard lk(mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace zsinh
