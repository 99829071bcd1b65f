#pragma once

// Brute-force references the solver and analysis tests are checked against.
// Deliberately naive: enumerate assignments with a Gray-code walk and track
// the signed side difference directly.

#include <cstdint>
#include <vector>

#include "npart/core.hpp"
#include "npart/rng.hpp"

namespace oracle {

inline int lowest_set_bit(std::uint64_t v) {
  int bit = 0;
  while ((v & 1) == 0) {
    v >>= 1;
    ++bit;
  }
  return bit;
}

/// Minimum energy over all 2^n assignments.
inline npart::Energy min_energy(const npart::Instance& instance) {
  const int n = instance.n();
  std::vector<std::uint8_t> x(static_cast<std::size_t>(n), 0);
  std::int64_t diff = -instance.total();  // side-1 sum minus side-0 sum
  std::int64_t best = diff < 0 ? -diff : diff;
  for (std::uint64_t step = 1; step < (std::uint64_t{1} << n); ++step) {
    const int i = lowest_set_bit(step);
    const std::int64_t w = instance.weight(i);
    auto& xi = x[static_cast<std::size_t>(i)];
    diff += xi ? -2 * w : 2 * w;
    xi ^= 1;
    const std::int64_t e = diff < 0 ? -diff : diff;
    if (e < best) best = e;
  }
  return best;
}

/// Number of assignments with energy exactly 0 (complement pairs counted
/// twice, the all-in assignments included when the total is 0).
inline std::int64_t zero_energy_count(const npart::Instance& instance) {
  const int n = instance.n();
  std::vector<std::uint8_t> x(static_cast<std::size_t>(n), 0);
  std::int64_t diff = -instance.total();
  std::int64_t count = diff == 0 ? 1 : 0;
  for (std::uint64_t step = 1; step < (std::uint64_t{1} << n); ++step) {
    const int i = lowest_set_bit(step);
    const std::int64_t w = instance.weight(i);
    auto& xi = x[static_cast<std::size_t>(i)];
    diff += xi ? -2 * w : 2 * w;
    xi ^= 1;
    if (diff == 0) ++count;
  }
  return count;
}

inline npart::Instance random_instance(npart::Rng& rng, int n, std::int64_t lo,
                                       std::int64_t hi) {
  std::vector<std::int64_t> weights(static_cast<std::size_t>(n));
  for (auto& w : weights) {
    w = lo + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  return npart::Instance(std::move(weights));
}

inline npart::Partition random_partition(npart::Rng& rng, int n) {
  std::vector<std::uint8_t> side(static_cast<std::size_t>(n));
  for (auto& s : side) s = static_cast<std::uint8_t>(rng.bit());
  return npart::Partition(std::move(side));
}

}  // namespace oracle
