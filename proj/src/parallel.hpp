#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace beg::detail {

inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Calls body(worker, begin, end) on contiguous blocks of [0, n). Blocks are a
// pure function of (n, workers); the first exception is rethrown.
template <class Body>
void parallel_blocks(std::uint64_t n, unsigned workers, Body&& body) {
  workers = static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(workers), std::max<std::uint64_t>(n, 1)));
  if (workers <= 1) {
    body(0u, std::uint64_t{0}, n);
    return;
  }
  std::vector<std::thread> threads;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = n * w / workers;
    const std::uint64_t end = n * (w + 1) / workers;
    threads.emplace_back([&, w, begin, end] {
      try {
        body(w, begin, end);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace beg::detail
