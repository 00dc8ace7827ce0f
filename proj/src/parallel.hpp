#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tcap::detail {

inline unsigned resolve_threads(unsigned requested, std::uint64_t work) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  if (work < n) n = static_cast<unsigned>(std::max<std::uint64_t>(work, 1));
  return n;
}

// Splits [0, n) into contiguous ranges, calls body(begin, end, worker) on each
// and rethrows the first exception. Callers only combine per-worker results
// with order-independent reductions (or write by index), so the outcome does
// not depend on the thread count.
template <typename Body>
void parallel_ranges(std::uint64_t n, unsigned threads, Body&& body) {
  const unsigned workers = resolve_threads(threads, n);
  if (workers <= 1) {
    body(std::uint64_t{0}, n, 0u);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = n * w / workers;
    const std::uint64_t end = n * (w + 1) / workers;
    pool.emplace_back([&, begin, end, w] {
      try {
        body(begin, end, w);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

// Number of indices in [0, n) for which pred(i) holds.
template <typename Pred>
std::uint64_t parallel_count(std::uint64_t n, unsigned threads, Pred&& pred) {
  const unsigned workers = resolve_threads(threads, n);
  std::vector<std::uint64_t> counts(workers, 0);
  parallel_ranges(n, workers, [&](std::uint64_t begin, std::uint64_t end, unsigned w) {
    std::uint64_t local = 0;
    for (std::uint64_t i = begin; i < end; ++i) local += pred(i) ? 1 : 0;
    counts[w] = local;
  });
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

}  // namespace tcap::detail
