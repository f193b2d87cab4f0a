#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <future>
#include <thread>
#include <vector>

namespace swimmer {

/// Applies `fn` to every index in [0, n) using up to `workers` threads and
/// returns results in index order. Exceptions propagate from the lowest
/// failing index.
template <typename Fn>
auto parallel_map(std::size_t n, Fn fn, unsigned workers = std::thread::hardware_concurrency())
    -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> out;
  out.reserve(n);
  workers = std::max(1u, workers);
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
    return out;
  }
  for (std::size_t begin = 0; begin < n; begin += workers) {
    const std::size_t end = std::min(n, begin + workers);
    std::vector<std::future<Result>> batch;
    for (std::size_t i = begin; i < end; ++i)
      batch.push_back(std::async(std::launch::async, fn, i));
    for (auto& f : batch) out.push_back(f.get());
  }
  return out;
}

}  // namespace swimmer
