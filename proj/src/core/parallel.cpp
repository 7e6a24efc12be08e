#include "parallel.hpp"

#include <atomic>

namespace zetalab {

namespace {
std::atomic<unsigned> g_thread_count{0};
}

void set_thread_count(unsigned count) noexcept { g_thread_count = count; }

unsigned thread_count() noexcept {
  const unsigned requested = g_thread_count.load();
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

double pairwise_sum(std::span<const double> values) noexcept {
  const std::size_t n = values.size();
  if (n <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace zetalab
