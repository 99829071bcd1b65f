#include "npart/analysis.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace npart {
namespace {

void check_regime(int n, std::int64_t lambda) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (lambda < 2) throw std::invalid_argument("lambda must be >= 2");
}

}  // namespace

void RegimeParams::validate() const {
  check_regime(n, lambda);
  if (target_sub_solutions < 0.0) {
    throw std::invalid_argument("target_sub_solutions must be >= 0");
  }
}

PerfectCountEstimate expected_perfect_count(int n, std::int64_t lambda) {
  check_regime(n, lambda);
  PerfectCountEstimate out;
  out.log2_value = static_cast<double>(n) - std::log2(static_cast<double>(lambda));
  if (n < 1024) {
    const double value = std::exp2(static_cast<double>(n)) / static_cast<double>(lambda);
    if (std::isfinite(value)) out.value = value;
  }
  return out;
}

double m_for_target(int n, std::int64_t lambda, double target) {
  check_regime(n, lambda);
  if (target < 0.0) throw std::invalid_argument("target must be >= 0");
  const double product = static_cast<double>(lambda) * target;
  if (product <= 1.0) {
    throw std::domain_error("lambda * target must exceed 1, got " + std::to_string(product));
  }
  return static_cast<double>(n) / std::log2(product);
}

int max_m_bound(int n, std::int64_t lambda) {
  check_regime(n, lambda);
  return static_cast<int>(std::floor(static_cast<double>(n) /
                                     std::log2(static_cast<double>(lambda))));
}

Instance pathological_instance(int n) {
  constexpr int kMax = 30;  // sum 2^(n+1) - 2 must stay under the core total bound
  if (n < 2 || n > kMax) {
    throw std::invalid_argument("pathological family needs 2 <= n <= " + std::to_string(kMax) +
                                ", got " + std::to_string(n));
  }
  std::vector<std::int64_t> weights;
  weights.reserve(static_cast<std::size_t>(n));
  for (int t = 1; t <= n; ++t) weights.push_back(std::int64_t{1} << t);
  return Instance(std::move(weights));
}

std::int64_t count_perfect_assignments(const Instance& instance) {
  const int n = instance.n();
  if (n > 24) {
    throw std::invalid_argument("count_perfect_assignments enumerates 2^n states, capped at n <= 24");
  }
  if (instance.total() % 2 != 0) {
    throw std::domain_error("an odd total admits no energy-0 assignment; even total required");
  }

  // Gray-code walk: one weight flips sign per step, so the running signed
  // difference is updated in O(1). Start at x = 0, difference -total.
  std::int64_t diff = -instance.total();
  std::int64_t count = diff == 0 ? 1 : 0;
  std::vector<std::uint8_t> x(static_cast<std::size_t>(n), 0);
  const std::uint64_t states = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < states; ++step) {
    const int bit = std::countr_zero(step);
    const auto ubit = static_cast<std::size_t>(bit);
    const std::int64_t w = instance.weight(bit);
    // Two half-steps keep every intermediate inside [-total, total].
    diff += x[ubit] ? -w : w;
    diff += x[ubit] ? -w : w;
    x[ubit] ^= 1;
    if (diff == 0) ++count;
  }
  return count;
}

}  // namespace npart
