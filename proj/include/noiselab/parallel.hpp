#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace noiselab {

/// Runs body(begin, end) over `threads` contiguous chunks of [0, count).
/// Chunk boundaries depend only on (count, threads); callers that need
/// thread-count-independent results reduce per-item, not per-chunk.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  threads = std::max(1u, threads);
  if (threads == 1 || count < 2) {
    body(std::size_t{0}, count);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, count);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace noiselab
