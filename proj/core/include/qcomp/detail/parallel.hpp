#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace qcomp {

template <typename Pred>
std::uint64_t count_hits(std::uint64_t trials, Pred&& hit) {
  constexpr std::uint64_t kMinChunk = 4096;
  const std::uint64_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t workers =
      std::clamp<std::uint64_t>(trials / kMinChunk, 1, hw);
  if (workers == 1) {
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < trials; ++i) hits += hit(i) ? 1 : 0;
    return hits;
  }
  std::vector<std::uint64_t> partial(workers, 0);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const std::uint64_t begin = trials * w / workers;
        const std::uint64_t end = trials * (w + 1) / workers;
        std::uint64_t local = 0;
        for (std::uint64_t i = begin; i < end; ++i) local += hit(i) ? 1 : 0;
        partial[w] = local;
      });
    }
  }
  std::uint64_t hits = 0;
  for (auto p : partial) hits += p;
  return hits;
}

}  // namespace qcomp
