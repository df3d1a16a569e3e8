#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gpt_spectra {

/// Worker count: GPT_SPECTRA_THREADS when set to a positive integer, else the
/// hardware concurrency.
int ThreadCount();

/// Runs fn(i) for i in [0, n). Tasks must write only to per-index outputs and
/// draw randomness from per-index seeds, so results do not depend on the
/// thread count. The exception of the lowest failing index is rethrown.
template <typename Fn>
void ParallelFor(int n, Fn&& fn) {
  const int workers = std::min(ThreadCount(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex mu;
  int failed_index = n;
  std::exception_ptr failure;
  auto work = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace gpt_spectra
