#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace fieldscope {

inline unsigned default_thread_count() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

// Runs fn(begin, end) over contiguous chunks of [0, n). Each chunk writes to
// its own output slots, so results are independent of scheduling; callers get
// deterministic output as long as fn itself is deterministic per index.
template <class Fn>
void parallel_chunks(std::size_t n, unsigned n_threads, Fn&& fn) {
  if (n == 0) return;
  n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(n)));
  if (n_threads == 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  const std::size_t chunk = (n + n_threads - 1) / n_threads;
  for (unsigned t = 0; t < n_threads; ++t) {
    const std::size_t begin = static_cast<std::size_t>(t) * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& w : workers) w.join();
}

}  // namespace fieldscope
