#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace dmt {

/// Runs fn(0..count-1) on up to `jobs` threads. Each index must write only
/// its own output slot, so results are identical for any job count. The
/// first exception is rethrown after all workers finish.
inline void parallel_for(std::size_t count, int jobs,
                         const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  const auto workers = static_cast<std::size_t>(jobs < 1 ? 1 : jobs);
  if (workers <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  std::vector<std::thread> threads;
  const std::size_t n_threads = workers < count ? workers : count;
  threads.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace dmt
