#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mlab {

struct Execution {
  int threads = 1;
};

// Runs body(begin, end) over contiguous chunks of [0, n). Results must be
// written to per-index slots so any later reduction can be done serially in
// index order; the chunking never influences values.
template <class Body>
void parallel_for(std::size_t n, const Execution& exec, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(std::max(1, exec.threads)), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace mlab
