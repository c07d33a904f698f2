#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace eventcrawl {

// Seed schedule shared by every split-and-average estimate. Repeat r of a
// threshold estimate draws its sample from repeat_seed(seed, r); the event
// vector itself uses repeat 0. Content and temporal thresholds therefore see
// the same reference sample in the same repeat.
std::uint64_t repeat_seed(std::uint64_t seed, int repeat);

// floor(fraction * n) with a 1e-9 guard against representation error
// (0.29 * 100 is 28.999999999999996 in binary floating point).
std::size_t sample_size(std::size_t n, double fraction);

// Uniform sample without replacement of sample_size(n, fraction) indices in
// [0, n), returned in ascending order. Partial Fisher-Yates over a
// std::mt19937_64 seeded with `seed`: for slot i, j = i + engine() % (n - i).
std::vector<std::size_t> sample_indices(std::size_t n, double fraction, std::uint64_t seed);

// Indices in [0, n) not present in `sample` (which must be ascending).
std::vector<std::size_t> complement_indices(std::size_t n, const std::vector<std::size_t>& sample);

}  // namespace eventcrawl
