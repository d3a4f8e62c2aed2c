#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace coarse {

/// Number of worker threads used by the checking routines.
inline unsigned worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : std::min(hw, 16u);
}

/// Runs body(chunk, begin, end) over [0, n) split into contiguous chunks.
/// Chunk boundaries depend only on n and the worker count, and callers
/// combine per-chunk results in chunk order, so output never depends on
/// scheduling.
inline void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& body,
                            std::size_t min_chunk = 256) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(worker_count(), n / min_chunk));
  if (workers <= 1) {
    body(0, 0, n);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  threads.reserve(workers);
  const std::size_t step = (n + workers - 1) / workers;
  for (std::size_t c = 0; c < workers; ++c) {
    const std::size_t begin = c * step;
    const std::size_t end = std::min(n, begin + step);
    if (begin >= end) break;
    threads.emplace_back([&, c, begin, end] {
      try {
        body(c, begin, end);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline std::size_t chunk_count(std::size_t n, std::size_t min_chunk = 256) {
  return std::max<std::size_t>(1, std::min<std::size_t>(worker_count(), n / min_chunk));
}

}  // namespace coarse
