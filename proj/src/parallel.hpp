#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace beacon_forge::detail {

inline unsigned effective_threads(unsigned requested, std::size_t work) {
  unsigned t = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  if (work < t) t = static_cast<unsigned>(std::max<std::size_t>(work, 1));
  return t;
}

/// Calls fn(chunk, begin, end) over contiguous chunks of [0, count). Chunk
/// boundaries depend only on (count, threads); callers reduce per-chunk
/// results in chunk order so the outcome does not depend on scheduling.
template <class Fn>
void parallel_chunks(std::size_t count, unsigned threads, Fn&& fn) {
  const unsigned t = effective_threads(threads, count);
  if (t <= 1) {
    fn(std::size_t{0}, std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (unsigned c = 0; c < t; ++c) {
    const std::size_t begin = count * c / t;
    const std::size_t end = count * (c + 1) / t;
    pool.emplace_back([&fn, c, begin, end] { fn(std::size_t{c}, begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace beacon_forge::detail
