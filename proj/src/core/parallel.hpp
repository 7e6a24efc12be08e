#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <span>
#include <thread>
#include <vector>

namespace zetalab {

// Worker cap shared by every parallel loop in the library. 0 means "use the
// hardware concurrency".
void set_thread_count(unsigned count) noexcept;
unsigned thread_count() noexcept;

// Runs body(i) for i in [0, n) over contiguous static chunks. Each index is
// written by exactly one worker, so results do not depend on the thread count.
// The exception from the lowest failing chunk is rethrown.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t workers =
      std::min<std::size_t>(thread_count(), n / 64 + 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = n * w / workers;
      const std::size_t end = n * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] {
        try {
          for (std::size_t i = begin; i < end; ++i) body(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Fixed-topology pairwise summation; bitwise reproducible for a given input.
double pairwise_sum(std::span<const double> values) noexcept;

}  // namespace zetalab
