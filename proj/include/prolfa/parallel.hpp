#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace prolfa {

// Static block partition over [0, n). fn(i) must only write state owned by
// index i, which makes the result identical for every worker count.
template <class Fn>
void parallel_for(std::ptrdiff_t n, int threads, Fn&& fn) {
  if (n <= 0) return;
  if (threads <= 1 || n == 1) {
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = static_cast<int>(std::min<std::ptrdiff_t>(threads, n));
  const std::ptrdiff_t chunk = (n + workers - 1) / workers;
  auto run = [&fn, n, chunk](int w) {
    const std::ptrdiff_t lo = w * chunk;
    const std::ptrdiff_t hi = std::min(n, lo + chunk);
    for (std::ptrdiff_t i = lo; i < hi; ++i) fn(i);
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& t : pool) t.join();
}

}  // namespace prolfa
