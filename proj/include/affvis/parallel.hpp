#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace affvis {

/// Upper bound on worker threads used by library internals; 0 means
/// hardware concurrency.
void set_thread_limit(unsigned n);
unsigned thread_limit();

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunks are fixed by
/// n and the thread count only, so per-chunk results merged in chunk order are
/// deterministic.
template <class Body>
void parallel_chunks(std::size_t n, Body&& body, std::size_t min_chunk = 256) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(thread_limit(), (n + min_chunk - 1) / min_chunk));
  if (workers <= 1) {
    if (n > 0) body(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::size_t step = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * step;
    const std::size_t end = std::min(n, begin + step);
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
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t min_chunk = 256) {
  parallel_chunks(
      n,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      },
      min_chunk);
}

}  // namespace affvis
