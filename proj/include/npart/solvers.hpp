#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "npart/core.hpp"
#include "npart/qubo.hpp"

namespace npart {

inline constexpr int kExactMaxN = 40;
inline constexpr int kDefaultNumReads = 100;
inline constexpr int kDefaultNumSweeps = 1000;

/// Geometric inverse-temperature ramp, beta_min at the first sweep up to
/// beta_max at the last. Leave the endpoints unset to let the annealer
/// derive a range from the QUBO's own coefficient scale; integer NPP
/// couplings span many orders of magnitude across instance sizes, so no
/// single fixed range anneals all of them well.
struct BetaSchedule {
  std::optional<double> beta_min;
  std::optional<double> beta_max;
};

struct SolverConfig {
  std::uint64_t seed = 0;
  int num_reads = kDefaultNumReads;
  int num_sweeps = kDefaultNumSweeps;
  BetaSchedule beta_schedule;
  /// Wall-clock cap checked between reads; at least one read always runs.
  /// Results are only seed-deterministic when this is unset.
  std::optional<std::chrono::milliseconds> time_budget;

  void validate() const;
};

/// Work counts use an abstract unit (one proposal evaluation, one
/// enumerated subset, one placed element). Benchmarks convert them to the
/// deterministic time columns; see bench.hpp.
struct SolveResult {
  Partition partition;
  Energy energy;
  std::string solver_id;
  int reads_performed = 0;
  std::int64_t backend_us = 0;   // measured time inside the sampling loop
  std::int64_t wall_us = 0;      // measured total solve time
  std::int64_t backend_ops = 0;  // deterministic work count

  nlohmann::json to_json() const;
};

/// Pluggable solver contract. Implementations must be deterministic given
/// (instance, config.seed) and safe to call concurrently on distinct
/// instances.
class SubproblemSolver {
 public:
  virtual ~SubproblemSolver() = default;
  virtual SolveResult solve(const Instance& instance, const SolverConfig& config) const = 0;
  virtual std::string id() const = 0;
};

/// Meet-in-the-middle exact search, n <= kExactMaxN (memory guard).
/// Throws CapabilityError above the guard.
SolveResult solve_exact(const Instance& instance);

/// Descending weights onto the lighter side, ties toward side 1.
SolveResult solve_greedy(const Instance& instance);

/// Karmarkar-Karp differencing. Ties between equal largest values break
/// toward the tree containing the lowest original index; zero differences
/// stay in the multiset. The partition is rebuilt by 2-coloring the
/// must-differ forest accumulated during the merge steps.
SolveResult solve_ldm(const Instance& instance);

/// Metropolis single-bit-flip annealing on the instance's QUBO.
SolveResult solve_sa(const Instance& instance, const SolverConfig& config);

/// Client for the remote sampler protocol (see README): POSTs the QUBO
/// export with {"num_reads", "seed"}, re-validates every returned sample's
/// objective locally, and keeps the best valid one. The server applies its
/// own sweep count and beta schedule; only seed and num_reads travel.
SolveResult solve_remote(const std::string& endpoint, const Instance& instance,
                         const SolverConfig& config);

/// ids: exact | greedy | ldm | sa | remote (remote needs the endpoint).
std::unique_ptr<SubproblemSolver> make_solver(const std::string& id,
                                              const std::string& endpoint = "");

/// One sample per read: the best state seen during that read.
struct AnnealSample {
  std::vector<std::uint8_t> x;
  std::int64_t objective;
};

struct AnnealOutput {
  std::vector<AnnealSample> samples;
  std::int64_t ops = 0;
  std::int64_t backend_us = 0;
};

/// The annealing engine shared by solve_sa and the loopback sampler server,
/// so a remote round trip reproduces a local solve bit for bit.
AnnealOutput anneal_qubo(const QuboMatrix& q, const SolverConfig& config);

/// Schedule endpoints actually used for a given matrix: explicit config
/// values win, otherwise a range derived from the coefficient magnitudes.
std::pair<double, double> resolve_beta_range(const QuboMatrix& q, const SolverConfig& config);

}  // namespace npart
