#pragma once

#include <cstdint>
#include <optional>

#include "npart/core.hpp"

namespace npart {

/// Parameters of the uniform-weights regime: weights drawn from {1..lambda},
/// target_sub_solutions is the perfect-solution count each sub-problem
/// should be expected to retain after decomposition.
struct RegimeParams {
  int n = 1;
  std::int64_t lambda = 2;
  double target_sub_solutions = 1.0;

  void validate() const;
};

/// 2^n / lambda, the model's expected number of perfect assignments.
/// log2_value is always finite; value is present when it fits a double.
struct PerfectCountEstimate {
  double log2_value = 0.0;
  std::optional<double> value;
};

PerfectCountEstimate expected_perfect_count(int n, std::int64_t lambda);

/// n / log2(lambda * target): the sub-problem count at which each
/// sub-problem still expects `target` perfect solutions. Throws
/// std::domain_error when lambda * target <= 1 (non-positive logarithm).
double m_for_target(int n, std::int64_t lambda, double target);

/// floor(n / log2(lambda)): the largest m for which sub-problems are still
/// expected to admit a perfect solution at all.
int max_m_bound(int n, std::int64_t lambda);

/// {2^1, ..., 2^n}: exponentially spread weights on which decomposition
/// always loses the optimum. The core total bound caps n at 30; the
/// pathology shows from n = 2 on.
Instance pathological_instance(int n);

/// Number of assignments x in {0,1}^n with energy exactly 0, by full
/// enumeration (complementary pairs counted twice, matching the 2^n
/// normalization of the estimate). Requires n <= 24; throws
/// std::domain_error on an odd total, which cannot reach energy 0.
std::int64_t count_perfect_assignments(const Instance& instance);

}  // namespace npart
