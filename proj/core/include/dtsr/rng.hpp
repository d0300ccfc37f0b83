#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace dtsr {

/// Deterministic random source: std::mt19937_64 seeded directly with the
/// user-supplied seed. Bounded draws use unbiased rejection sampling on the
/// raw 64-bit stream (never std::uniform_int_distribution, whose output is
/// implementation-defined), so identical seeds give identical streams on any
/// conforming platform.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform in [0, bound); bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t rem = max % bound;
    if (rem + 1 == bound) return next() % bound;  // bound divides 2^64
    const std::uint64_t limit = max - rem;        // multiple of bound
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % bound;
  }

  bool coin() { return next() >> 63; }

  /// Sorted random `count`-subset of {0, ..., universe-1} (partial
  /// Fisher-Yates).
  std::vector<std::uint32_t> sample_distinct(std::uint32_t universe, std::uint32_t count) {
    std::vector<std::uint32_t> pool(universe);
    std::iota(pool.begin(), pool.end(), 0u);
    for (std::uint32_t i = 0; i < count; ++i) {
      const std::uint64_t j = i + below(universe - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace dtsr
