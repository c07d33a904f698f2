#include "eventcrawl/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace eventcrawl {

std::uint64_t repeat_seed(std::uint64_t seed, int repeat) {
  // splitmix64 finalizer over seed + repeat * golden ratio
  std::uint64_t z = seed + static_cast<std::uint64_t>(repeat) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::size_t sample_size(std::size_t n, double fraction) {
  auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
  return std::min(k, n);
}

std::vector<std::size_t> sample_indices(std::size_t n, double fraction, std::uint64_t seed) {
  const std::size_t k = sample_size(n, fraction);
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::mt19937_64 engine(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(engine() % (n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<std::size_t> complement_indices(std::size_t n, const std::vector<std::size_t>& sample) {
  std::vector<std::size_t> rest;
  rest.reserve(n - std::min(n, sample.size()));
  auto it = sample.begin();
  for (std::size_t i = 0; i < n; ++i) {
    if (it != sample.end() && *it == i) {
      ++it;
      continue;
    }
    rest.push_back(i);
  }
  return rest;
}

}  // namespace eventcrawl
