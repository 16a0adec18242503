#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace roughstruct {

/// Number of worker threads. Honours ROUGHSTRUCT_THREADS when set to a
/// positive integer, otherwise uses the hardware concurrency.
std::size_t worker_count();

/// Calls fn(i) for every i in [0, n). Work is split into contiguous chunks;
/// fn must only write state owned by index i. The first exception thrown by
/// any worker is rethrown on the calling thread.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t min_chunk = 32) {
  const std::size_t max_workers = (n + min_chunk - 1) / std::max<std::size_t>(min_chunk, 1);
  const std::size_t workers = std::min(worker_count(), max_workers);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        const std::size_t end = std::min(n, (w + 1) * chunk);
        for (std::size_t i = w * chunk; i < end; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// max_i fn(i) over [0, n), or 0 for n == 0. Order independent, hence
/// reproducible regardless of the worker count.
template <class Fn>
double parallel_max(std::size_t n, Fn&& fn, std::size_t min_chunk = 32) {
  std::vector<double> values(n, 0.0);
  parallel_for(n, [&](std::size_t i) { values[i] = fn(i); }, min_chunk);
  double best = 0.0;
  for (double v : values) best = std::max(best, v);
  return best;
}

}  // namespace roughstruct
