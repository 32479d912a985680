#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace predint::rng {

// All randomness flows through mt19937_64 raw draws plus the explicit
// transforms below. The std <random> distributions are avoided: their output
// is implementation-defined, and reports must be reproducible across
// platforms.
using Engine = std::mt19937_64;

// splitmix64 finalizer, used to derive independent stream seeds.
inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return mix(mix(seed ^ 0x5851f42d4c957f2dULL) + mix(a) + 3 * mix(b));
}

// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& eng, double a, double b) {
  return a + (b - a) * uniform01(eng);
}

// Box-Muller without caching; two raw draws per variate.
inline double standard_normal(Engine& eng) {
  double u1 = uniform01(eng);
  const double u2 = uniform01(eng);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Unbiased draw in [0, bound) by rejection.
inline std::uint64_t below(Engine& eng, std::uint64_t bound) {
  const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
  std::uint64_t r;
  do {
    r = eng();
  } while (r >= limit);
  return r % bound;
}

template <typename T>
void shuffle(std::vector<T>& values, Engine& eng) {
  for (std::size_t i = values.size(); i > 1; --i)
    std::swap(values[i - 1], values[below(eng, i)]);
}

// Fold id per index: seeded Fisher-Yates shuffle, then contiguous blocks.
// Fold sizes differ by at most one.
inline std::vector<std::size_t> kfold_assignment(std::size_t n, std::size_t k,
                                                 std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Engine eng(seed);
  shuffle(order, eng);

  std::vector<std::size_t> fold(n, 0);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    for (std::size_t j = 0; j < size; ++j) fold[order[pos++]] = f;
  }
  return fold;
}

}  // namespace predint::rng
