#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "npart/core.hpp"
#include "npart/decompose.hpp"
#include "npart/solvers.hpp"

namespace npart {

/// One oriented sub-solution: heavy holds sub-problem k's heavier side as
/// original element indices, e_k = heavy sum - light sum >= 0.
struct SubSolution {
  int k = 0;
  std::vector<int> heavy;
  std::vector<int> light;
  Energy e_k = 0;
};

/// The auxiliary NPP over sub-problem errors: element at position k-1 holds
/// E_k. Zeros are legitimate here, hence the relaxed weight floor.
struct AuxiliaryInstance {
  Instance instance;
  std::vector<int> sub_index;  // position -> k
};

/// Relabels a solved sub-problem so side A1 is the heavier one; on an exact
/// tie the solver's side 1 is kept as the heavy side.
SubSolution orient(const Instance& sub_instance, const Partition& partition,
                   const std::vector<int>& index_map, int k);

AuxiliaryInstance build_auxiliary(const std::vector<SubSolution>& subs);

/// Assembles the estimate: sub-problems listed in aux_partition (by index
/// k, never by error value) contribute their heavy side to A, the rest
/// their light side. Every original index must be covered exactly once.
Partition reconstruct(int n, const std::vector<SubSolution>& subs,
                      const std::vector<int>& aux_partition);

struct PipelineTimings {
  std::int64_t sequential_backend_us = 0;  // sum of sub solves + auxiliary
  std::int64_t parallel_backend_us = 0;    // max over sub solves + auxiliary
  std::int64_t wall_us = 0;
  std::int64_t sequential_backend_ops = 0;
  std::int64_t parallel_backend_ops = 0;
};

struct PipelineOptions {
  /// Exactly one of m / sub_size / vector selects the decomposition; with
  /// sub_size N, m = floor(n / N).
  std::optional<int> m;
  std::optional<int> sub_size;
  std::optional<DecomposingVector> vector;
  /// config.seed is the master seed: sub k solves with derive_seed(seed, k),
  /// the auxiliary NPP with derive_seed(seed, 0), and the random decomposing
  /// vector draws from the master seed itself.
  SolverConfig config;
  /// 0 = NPP_WORKERS env var, falling back to hardware concurrency.
  int workers = 0;
};

struct PipelineResult {
  Partition a_hat;
  Energy e_prime = 0;
  std::vector<SubSolution> sub_solutions;
  std::vector<int> aux_partition;  // ascending k with the heavy side in A
  int m = 0;
  std::optional<int> sub_size;
  std::string sub_solver_id;
  std::string aux_solver_id;
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> sub_seeds;
  std::uint64_t aux_seed = 0;
  std::vector<std::int64_t> sub_backend_us;
  std::vector<std::int64_t> sub_backend_ops;
  std::int64_t aux_backend_us = 0;
  std::int64_t aux_backend_ops = 0;
  PipelineTimings timings;

  nlohmann::json to_json() const;
};

/// Full decompose / solve / merge pass. Sub-problems fan out to a worker
/// pool but seeds are fixed per k, so any worker count gives bit-identical
/// results. Solver failures are rethrown with the failing k attached.
PipelineResult run_pipeline(const Instance& instance, const SubproblemSolver& sub_solver,
                            const SubproblemSolver& aux_solver, const PipelineOptions& options);

/// NPP_WORKERS env var when set to a positive integer, else hardware
/// concurrency, floored at 1.
int default_workers();

}  // namespace npart
