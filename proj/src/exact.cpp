#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "npart/errors.hpp"
#include "npart/solvers.hpp"
#include "timing.hpp"

namespace npart {
namespace {

struct HalfState {
  std::int64_t sum;
  std::uint32_t mask;
};

// Subset sums of weights [begin, begin + count), indexed by bitmask.
std::vector<std::int64_t> half_sums(const Instance& instance, int begin, int count) {
  std::vector<std::int64_t> sums(std::size_t{1} << count);
  sums[0] = 0;
  for (std::uint32_t mask = 1; mask < sums.size(); ++mask) {
    const int bit = std::countr_zero(mask);
    sums[mask] = sums[mask & (mask - 1)] + instance.weight(begin + bit);
  }
  return sums;
}

}  // namespace

SolveResult solve_exact(const Instance& instance) {
  const auto start = detail::Clock::now();
  const int n = instance.n();
  if (n > kExactMaxN) {
    throw CapabilityError("solve_exact enumerates 2^(n/2) subset sums and is capped at n <= " +
                          std::to_string(kExactMaxN) + "; got n = " + std::to_string(n));
  }

  const int left_count = n / 2;
  const int right_count = n - left_count;
  const std::int64_t c = instance.total();

  const std::vector<std::int64_t> left = half_sums(instance, 0, left_count);
  std::vector<HalfState> right(std::size_t{1} << right_count);
  {
    const std::vector<std::int64_t> sums = half_sums(instance, left_count, right_count);
    for (std::uint32_t mask = 0; mask < right.size(); ++mask) {
      right[mask] = {sums[mask], mask};
    }
  }
  std::sort(right.begin(), right.end(), [](const HalfState& a, const HalfState& b) {
    return a.sum != b.sum ? a.sum < b.sum : a.mask < b.mask;
  });

  // For each left subset, the ideal right sum solves 2(sl + sr) = c; the
  // closest achievable values sit at lower_bound and its predecessor.
  Energy best_energy = std::numeric_limits<Energy>::max();
  std::uint32_t best_left = 0;
  std::uint32_t best_right = 0;
  for (std::uint32_t lmask = 0; lmask < left.size(); ++lmask) {
    const std::int64_t target = c - 2 * left[lmask];
    const auto it = std::lower_bound(
        right.begin(), right.end(), target,
        [](const HalfState& e, std::int64_t t) { return 2 * e.sum < t; });
    for (const auto* cand : {it != right.end() ? &*it : nullptr,
                             it != right.begin() ? &*(it - 1) : nullptr}) {
      if (cand == nullptr) continue;
      const std::int64_t diff = 2 * (left[lmask] + cand->sum) - c;
      const Energy e = diff < 0 ? -diff : diff;
      if (e < best_energy) {
        best_energy = e;
        best_left = lmask;
        best_right = cand->mask;
      }
    }
  }
  const std::int64_t search_us = detail::elapsed_us(start);

  std::vector<std::uint8_t> side(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < left_count; ++i) {
    if (best_left >> i & 1) side[static_cast<std::size_t>(i)] = 1;
  }
  for (int i = 0; i < right_count; ++i) {
    if (best_right >> i & 1) side[static_cast<std::size_t>(left_count + i)] = 1;
  }
  Partition partition(std::move(side));
  const Energy checked = energy(instance, partition);
  if (checked != best_energy) {
    throw std::logic_error("meet-in-the-middle reconstruction is inconsistent");
  }

  return SolveResult{std::move(partition),
                     checked,
                     "exact",
                     1,
                     search_us,
                     detail::elapsed_us(start),
                     static_cast<std::int64_t>(left.size()) +
                         static_cast<std::int64_t>(right.size())};
}

}  // namespace npart
