#include <cmath>

#include "doctest.h"
#include "npart/analysis.hpp"
#include "npart/rng.hpp"
#include "npart/solvers.hpp"
#include "oracles.hpp"

using namespace npart;

TEST_CASE("expected perfect count is 2^n over lambda") {
  const PerfectCountEstimate at_20 = expected_perfect_count(20, 16);
  REQUIRE(at_20.value.has_value());
  CHECK(*at_20.value == doctest::Approx(65536.0));
  CHECK(at_20.log2_value == doctest::Approx(16.0));

  const PerfectCountEstimate large_scale = expected_perfect_count(500, 5000);
  CHECK(large_scale.log2_value == doctest::Approx(500.0 - std::log2(5000.0)));

  const PerfectCountEstimate huge = expected_perfect_count(5000, 2);
  CHECK_FALSE(huge.value.has_value());
  CHECK(huge.log2_value == doctest::Approx(4999.0));
}

TEST_CASE("expected perfect count is monotone") {
  double previous = expected_perfect_count(10, 8).log2_value;
  for (int n = 11; n <= 30; ++n) {
    const double current = expected_perfect_count(n, 8).log2_value;
    CHECK(current > previous);
    previous = current;
  }
  double last = expected_perfect_count(20, 2).log2_value;
  for (std::int64_t lambda = 4; lambda <= 1024; lambda *= 2) {
    const double current = expected_perfect_count(20, lambda).log2_value;
    CHECK(current < last);
    last = current;
  }
}

TEST_CASE("m_for_target and its floor agree with the bound") {
  CHECK(m_for_target(500, 5000, 1.0) == doctest::Approx(500.0 / std::log2(5000.0)));
  CHECK(max_m_bound(500, 5000) == 40);
  CHECK(max_m_bound(500, 2) == 500);

  Rng rng(404);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(2000));
    const std::int64_t lambda = 2 + static_cast<std::int64_t>(rng.below(10000));
    CHECK(max_m_bound(n, lambda) ==
          static_cast<int>(std::floor(m_for_target(n, lambda, 1.0))));
  }
}

TEST_CASE("regime parameter validation") {
  CHECK_THROWS_AS(expected_perfect_count(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(expected_perfect_count(5, 1), std::invalid_argument);
  CHECK_THROWS_AS(m_for_target(5, 4, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(m_for_target(5, 4, 0.0), std::domain_error);
  CHECK_THROWS_AS(m_for_target(5, 4, 0.25), std::domain_error);
  CHECK_NOTHROW(m_for_target(5, 4, 0.5));
  RegimeParams params{5, 4, -2.0};
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
}

TEST_CASE("pathological family doubles every weight") {
  const Instance w4 = pathological_instance(4);
  CHECK(w4.weights() == std::vector<std::int64_t>{2, 4, 8, 16});
  CHECK(solve_exact(w4).energy == 2);
  CHECK(solve_exact(pathological_instance(8)).energy == 2);
  CHECK_THROWS_AS(pathological_instance(1), std::invalid_argument);
  CHECK_THROWS_AS(pathological_instance(31), std::invalid_argument);
}

TEST_CASE("perfect assignment counts on known multisets") {
  CHECK(count_perfect_assignments(Instance({1, 1})) == 2);
  CHECK(count_perfect_assignments(Instance({1, 2, 3})) == 2);
  CHECK(count_perfect_assignments(Instance({2, 4, 8})) == 0);
  CHECK(count_perfect_assignments(Instance({5, 5, 5, 5})) == 6);
}

TEST_CASE("perfect assignment count matches the enumeration oracle") {
  Rng rng(1551);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(13));
    Instance inst = oracle::random_instance(rng, n, 1, 40);
    if (inst.total() % 2 != 0) {
      std::vector<std::int64_t> weights = inst.weights();
      weights[0] += 1;
      inst = Instance(std::move(weights));
    }
    CHECK(count_perfect_assignments(inst) == oracle::zero_energy_count(inst));
  }
}

TEST_CASE("perfect assignment count guards") {
  CHECK_THROWS_AS(count_perfect_assignments(Instance({1, 1, 1})), std::domain_error);
  std::vector<std::int64_t> big(25, 2);
  CHECK_THROWS_AS(count_perfect_assignments(Instance(big)), std::invalid_argument);
}
