#include <algorithm>
#include <cstdint>
#include <limits>

#include "doctest.h"
#include "npart/errors.hpp"
#include "npart/merge.hpp"
#include "npart/rng.hpp"
#include "oracles.hpp"

using namespace npart;

namespace {

/// Minimum of |sum of +-e_k| over all sign choices.
std::int64_t best_signed_sum(const std::vector<std::int64_t>& errors) {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  const std::size_t m = errors.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::int64_t sum = 0;
    for (std::size_t k = 0; k < m; ++k) {
      sum += (mask >> k) & 1 ? errors[k] : -errors[k];
    }
    best = std::min(best, sum < 0 ? -sum : sum);
  }
  return best;
}

}  // namespace

TEST_CASE("orient puts the heavier side first") {
  const Instance sub({1, 1, 3});
  const SubSolution oriented = orient(sub, Partition({0, 0, 1}), {0, 1, 2}, 1);
  CHECK(oriented.k == 1);
  CHECK(oriented.heavy == std::vector<int>{2});
  CHECK(oriented.light == std::vector<int>{0, 1});
  CHECK(oriented.e_k == 1);

  const SubSolution flipped = orient(sub, Partition({1, 1, 0}), {0, 1, 2}, 1);
  CHECK(flipped.heavy == std::vector<int>{2});
  CHECK(flipped.e_k == 1);
}

TEST_CASE("orient maps positions through the index map") {
  const Instance sub({4, 5, 6});
  const SubSolution oriented = orient(sub, Partition({1, 0, 1}), {3, 4, 5}, 2);
  CHECK(oriented.heavy == std::vector<int>{3, 5});
  CHECK(oriented.light == std::vector<int>{4});
  CHECK(oriented.e_k == 5);
}

TEST_CASE("orient keeps solver side 1 heavy on exact ties") {
  const Instance sub({5, 5});
  const SubSolution oriented = orient(sub, Partition({0, 1}), {0, 1}, 1);
  CHECK(oriented.heavy == std::vector<int>{1});
  CHECK(oriented.light == std::vector<int>{0});
  CHECK(oriented.e_k == 0);
}

TEST_CASE("orient validates lengths") {
  const Instance sub({1, 2});
  CHECK_THROWS_AS(orient(sub, Partition({1}), {0, 1}, 1), std::invalid_argument);
  CHECK_THROWS_AS(orient(sub, Partition({1, 0}), {0}, 1), std::invalid_argument);
}

TEST_CASE("auxiliary instance keeps zero errors") {
  std::vector<SubSolution> subs(2);
  subs[0] = SubSolution{1, {0}, {1}, 0};
  subs[1] = SubSolution{2, {2}, {3}, 5};
  const AuxiliaryInstance aux = build_auxiliary(subs);
  CHECK(aux.instance.weights() == std::vector<std::int64_t>{0, 5});
  CHECK(aux.sub_index == std::vector<int>{1, 2});
  CHECK_THROWS_AS(build_auxiliary({}), std::invalid_argument);
}

TEST_CASE("reconstruct flips exactly the unselected sub-problems") {
  std::vector<SubSolution> subs(2);
  subs[0] = SubSolution{1, {2}, {0, 1}, 1};
  subs[1] = SubSolution{2, {5}, {3, 4}, 3};

  const Partition both = reconstruct(6, subs, {1, 2});
  CHECK(both.side_one_indices() == std::vector<int>{2, 5});
  const Partition only_second = reconstruct(6, subs, {2});
  CHECK(only_second.side_one_indices() == std::vector<int>{0, 1, 5});
}

TEST_CASE("reconstruct validates coverage") {
  std::vector<SubSolution> subs(1);
  subs[0] = SubSolution{1, {0}, {1}, 1};
  CHECK_THROWS_AS(reconstruct(3, subs, {1}), std::invalid_argument);  // index 2 uncovered
  CHECK_THROWS_AS(reconstruct(2, subs, {2}), std::invalid_argument);  // no sub-problem 2

  std::vector<SubSolution> overlapping(2);
  overlapping[0] = SubSolution{1, {0}, {1}, 1};
  overlapping[1] = SubSolution{2, {0}, {1}, 1};
  CHECK_THROWS_AS(reconstruct(2, overlapping, {}), std::invalid_argument);

  std::vector<SubSolution> out_of_range(1);
  out_of_range[0] = SubSolution{1, {0}, {5}, 1};
  CHECK_THROWS_AS(reconstruct(2, out_of_range, {}), std::invalid_argument);
}

TEST_CASE("pipeline reproduces the six-element walkthrough") {
  const Instance inst({1, 1, 3, 4, 5, 6});
  PipelineOptions options;
  options.vector = DecomposingVector({1, 1, 1, 2, 2, 2}, 2);
  options.config.seed = 7;
  const auto exact = make_solver("exact");
  const PipelineResult result = run_pipeline(inst, *exact, *exact, options);

  CHECK(result.e_prime == 2);
  CHECK(energy(inst, result.a_hat) == 2);
  REQUIRE(result.sub_solutions.size() == 2);
  std::vector<std::int64_t> errors{result.sub_solutions[0].e_k, result.sub_solutions[1].e_k};
  std::sort(errors.begin(), errors.end());
  CHECK(errors == std::vector<std::int64_t>{1, 3});
  CHECK(result.m == 2);
}

TEST_CASE("pipeline is deterministic per seed and worker count") {
  const Instance inst = [] {
    Rng rng(606);
    return oracle::random_instance(rng, 48, 100, 900);
  }();
  const auto sa = make_solver("sa");
  const auto exact = make_solver("exact");

  PipelineOptions options;
  options.sub_size = 8;
  options.config.seed = 21;
  options.config.num_reads = 6;
  options.config.num_sweeps = 60;

  options.workers = 1;
  const PipelineResult serial = run_pipeline(inst, *sa, *exact, options);
  options.workers = 4;
  const PipelineResult parallel = run_pipeline(inst, *sa, *exact, options);

  CHECK(serial.e_prime == parallel.e_prime);
  CHECK(serial.a_hat == parallel.a_hat);
  CHECK(serial.aux_partition == parallel.aux_partition);
  CHECK(serial.sub_seeds == parallel.sub_seeds);
  CHECK(serial.timings.sequential_backend_ops == parallel.timings.sequential_backend_ops);

  options.config.seed = 22;
  options.workers = 1;
  const PipelineResult other = run_pipeline(inst, *sa, *exact, options);
  CHECK(serial.sub_seeds != other.sub_seeds);
}

TEST_CASE("pipeline seeds derive from the master seed by stream") {
  const Instance inst({10, 20, 30, 40, 50, 60});
  PipelineOptions options;
  options.m = 3;
  options.config.seed = 1234;
  const auto exact = make_solver("exact");
  const PipelineResult result = run_pipeline(inst, *exact, *exact, options);
  REQUIRE(result.sub_seeds.size() == 3);
  for (std::uint64_t k = 1; k <= 3; ++k) {
    CHECK(result.sub_seeds[k - 1] == derive_seed(1234, k));
  }
  CHECK(result.aux_seed == derive_seed(1234, 0));
  CHECK(result.master_seed == 1234);
}

TEST_CASE("pipeline energy equals the best signed error sum with an exact aux") {
  Rng rng(2468);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 12 + static_cast<int>(rng.below(24));
    const Instance inst = oracle::random_instance(rng, n, 50, 400);
    const int m = 2 + static_cast<int>(rng.below(5));
    PipelineOptions options;
    options.m = m;
    options.config.seed = rng.next();
    const auto greedy = make_solver("greedy");
    const auto exact = make_solver("exact");
    const PipelineResult result = run_pipeline(inst, *greedy, *exact, options);

    std::vector<std::int64_t> errors;
    for (const SubSolution& sub : result.sub_solutions) errors.push_back(sub.e_k);
    CHECK(result.e_prime == best_signed_sum(errors));
    CHECK(energy(inst, result.a_hat) == result.e_prime);
  }
}

TEST_CASE("pipeline selector validation") {
  const Instance inst({1, 2, 3, 4});
  const auto exact = make_solver("exact");
  PipelineOptions options;
  CHECK_THROWS_AS(run_pipeline(inst, *exact, *exact, options), std::invalid_argument);
  options.m = 2;
  options.sub_size = 2;
  CHECK_THROWS_AS(run_pipeline(inst, *exact, *exact, options), std::invalid_argument);
  options.sub_size.reset();
  options.m = 5;
  CHECK_THROWS_AS(run_pipeline(inst, *exact, *exact, options), std::invalid_argument);
  options.m.reset();
  options.sub_size = 9;
  CHECK_THROWS_AS(run_pipeline(inst, *exact, *exact, options), std::invalid_argument);
}

TEST_CASE("sub_size selects m = floor(n / N)") {
  const Instance inst({5, 6, 7, 8, 9, 10, 11, 12, 13});
  PipelineOptions options;
  options.sub_size = 4;
  options.config.seed = 3;
  const auto exact = make_solver("exact");
  const PipelineResult result = run_pipeline(inst, *exact, *exact, options);
  CHECK(result.m == 2);
  REQUIRE(result.sub_size.has_value());
  CHECK(*result.sub_size == 4);
}

TEST_CASE("sub-solver failures carry the failing sub-problem") {
  std::vector<std::int64_t> weights(90, 7);
  const Instance inst(weights);
  PipelineOptions options;
  options.m = 2;  // sub-problems of 45 exceed the exact solver's reach
  options.config.seed = 1;
  const auto exact = make_solver("exact");
  CHECK_THROWS_WITH_AS(run_pipeline(inst, *exact, *exact, options),
                       doctest::Contains("sub-problem"), CapabilityError);
}

TEST_CASE("pipeline timings add up") {
  const Instance inst = [] {
    Rng rng(13);
    return oracle::random_instance(rng, 40, 10, 100);
  }();
  PipelineOptions options;
  options.m = 4;
  options.config.seed = 5;
  options.config.num_reads = 4;
  options.config.num_sweeps = 40;
  const auto sa = make_solver("sa");
  const PipelineResult result = run_pipeline(inst, *sa, *sa, options);

  std::int64_t sum_ops = result.aux_backend_ops;
  std::int64_t max_ops = 0;
  for (const std::int64_t ops : result.sub_backend_ops) {
    sum_ops += ops;
    max_ops = std::max(max_ops, ops);
  }
  CHECK(result.timings.sequential_backend_ops == sum_ops);
  CHECK(result.timings.parallel_backend_ops == max_ops + result.aux_backend_ops);
  CHECK(result.timings.wall_us >= 0);

  const nlohmann::json j = result.to_json();
  CHECK(j["e_prime"] == result.e_prime);
  CHECK(j["per_k"].size() == 4);
  CHECK(j["seeds"]["master"] == 5);
  CHECK(j["ops"]["parallel_backend"] == result.timings.parallel_backend_ops);
  CHECK(j["solvers"]["sub"] == "sa");
}
