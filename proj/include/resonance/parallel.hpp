#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace resonance {

/// Worker count: RES_THREADS if set to a positive integer, else the hardware
/// concurrency (at least 1).
std::size_t thread_count();

/// Calls fn(begin, end) on contiguous blocks covering [0, count). Each block
/// must write only to its own slots so results do not depend on scheduling.
template <class Fn>
void parallel_blocks(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min(thread_count(), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    fn(std::size_t{0}, count);
    return;
  }
  const std::size_t block = (count + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * block;
    const std::size_t end = std::min(count, begin + block);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
}

}  // namespace resonance
