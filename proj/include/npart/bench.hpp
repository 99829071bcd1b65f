#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "npart/core.hpp"

namespace npart {

/// Conversion rate between deterministic work counts and the time columns
/// of the CSV output. The CSV must be byte-identical across machines,
/// reruns, and worker counts, so its time columns are work-model times at
/// this nominal rate; measured wall-clock times go to the JSONL sidecar.
inline constexpr std::int64_t kOpsPerMicrosecond = 32;

/// Weight bounds for generated instances: absolute when lo/hi are set,
/// otherwise factors of n. The default is the [5n, 10n] rule.
struct WeightRangeRule {
  std::optional<std::int64_t> lo;
  std::optional<std::int64_t> hi;
  std::int64_t lo_factor = 5;
  std::int64_t hi_factor = 10;

  std::pair<std::int64_t, std::int64_t> bounds_for(int n) const;
  nlohmann::json to_json() const;
};

/// One solver column of the experiment: a plain solver id or a pipeline
/// with sub/aux roles. SA knobs apply to sa, remote, and pipeline entries.
struct SolverSpec {
  std::string id;  // exact | greedy | ldm | sa | remote | pipeline
  std::string label;
  std::string endpoint;
  std::string sub_solver;
  std::string aux_solver;
  std::optional<int> m;
  std::optional<int> sub_size;
  std::optional<int> num_reads;
  std::optional<int> num_sweeps;
  std::optional<double> beta_min;
  std::optional<double> beta_max;

  /// Seed-independent solvers get a single run per instance.
  bool deterministic() const { return id == "exact" || id == "greedy" || id == "ldm"; }
};

struct ExperimentConfig {
  std::vector<int> n_values;
  int instances_per_n = 10;
  int runs_per_solver = 5;
  std::uint64_t master_seed = 0;
  bool even_sum = false;
  WeightRangeRule range;
  std::vector<SolverSpec> solvers;

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;
};

struct RunRecord {
  int n = 0;
  int instance_id = 0;
  std::uint64_t instance_seed = 0;
  int solver_index = 0;
  std::string solver;
  int run = 0;
  std::uint64_t run_seed = 0;
  bool failed = false;
  std::string error;
  Energy energy = 0;
  bool perfect = false;
  std::optional<int> m;
  std::optional<int> sub_size;
  std::int64_t backend_ops = 0;           // sequential for pipelines
  std::int64_t parallel_backend_ops = 0;  // equals backend_ops for plain solvers
  std::int64_t wall_ops = 0;
  std::int64_t measured_backend_us = 0;
  std::int64_t measured_wall_us = 0;
  nlohmann::json detail;  // full result, partition included
};

/// n weights uniform on the inclusive range [lo, hi]; when even_sum is set
/// and the total lands odd, one uniformly chosen weight moves by +1 (-1 at
/// the upper bound) to fix the parity. Deterministic per seed.
Instance generate_instance(int n, std::uint64_t seed, std::int64_t lo, std::int64_t hi,
                           bool even_sum);

/// Runs the full grid on a worker pool (0 = NPP_WORKERS / hardware); cell
/// seeds are fixed upfront, so results do not depend on the worker count.
/// Individual solver failures become failed records, never aborting the
/// grid. Records come back canonically sorted by (n, instance, solver, run).
std::vector<RunRecord> run_experiment(const ExperimentConfig& config, int workers = 0);

/// Columns: n,instance_id,solver,run,energy,is_perfect,m,sub_size,
/// backend_us,parallel_backend_us,wall_us,seed. Failed records are skipped
/// (they live in the sidecar); time columns are work-model times.
std::string to_csv(const std::vector<RunRecord>& records);

/// One JSON object per record, failures included.
std::string to_jsonl(const std::vector<RunRecord>& records);

nlohmann::json manifest_json(const ExperimentConfig& config);

/// Per (n, solver): energy five-number summary plus mean, fraction perfect,
/// and four mean times (backend, wall, and both with the sub-solve stage
/// parallelized).
nlohmann::json summarize(const std::vector<RunRecord>& records);

}  // namespace npart
