#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

namespace dtsr {

/// Splits [begin, end) into fixed-size chunks, evaluates `per_range(lo, hi)`
/// on up to `jobs` threads, and folds the chunk results strictly in chunk
/// order. The outcome is therefore independent of scheduling, which is what
/// lets callers expose --jobs without giving up reproducibility.
template <typename Result, typename PerRange, typename Fold>
Result chunked_reduce(std::uint64_t begin, std::uint64_t end, std::uint64_t chunk_size,
                      unsigned jobs, Result identity, PerRange per_range, Fold fold) {
  if (end <= begin) return identity;
  if (jobs <= 1 || end - begin <= chunk_size) {
    return fold(std::move(identity), per_range(begin, end));
  }
  const std::uint64_t nchunks = (end - begin + chunk_size - 1) / chunk_size;
  std::vector<std::optional<Result>> results(nchunks);
  std::atomic<std::uint64_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t c = cursor.fetch_add(1, std::memory_order_relaxed);
      if (c >= nchunks) return;
      const std::uint64_t lo = begin + c * chunk_size;
      const std::uint64_t hi = std::min<std::uint64_t>(end, lo + chunk_size);
      results[c] = per_range(lo, hi);
    }
  };
  std::vector<std::thread> pool;
  const unsigned nthreads = std::min<std::uint64_t>(jobs, nchunks);
  pool.reserve(nthreads);
  for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  Result acc = std::move(identity);
  for (auto& r : results) acc = fold(std::move(acc), std::move(*r));
  return acc;
}

}  // namespace dtsr
