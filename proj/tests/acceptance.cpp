// Acceptance gate: one line per criterion, exit 0 only if every one passes.
// Thresholds and time limits are pinned here, next to each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "npart/analysis.hpp"
#include "npart/bench.hpp"
#include "npart/merge.hpp"
#include "npart/qubo.hpp"
#include "npart/rng.hpp"
#include "npart/sampler_server.hpp"
#include "npart/solvers.hpp"
#include "oracles.hpp"

using namespace npart;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Criterion {
  int id;
  std::string summary;
  std::function<bool(std::string&)> check;
};

bool check_worked_example(std::string& detail) {
  constexpr double kTimeLimitSeconds = 1.0;
  const auto start = Clock::now();

  const Instance inst({1, 1, 3, 4, 5, 6});
  PipelineOptions options;
  options.vector = DecomposingVector({1, 1, 1, 2, 2, 2}, 2);
  options.config.seed = 7;
  const auto exact = make_solver("exact");
  const PipelineResult result = run_pipeline(inst, *exact, *exact, options);

  std::vector<std::int64_t> errors;
  for (const SubSolution& sub : result.sub_solutions) errors.push_back(sub.e_k);
  std::sort(errors.begin(), errors.end());

  const double elapsed = seconds_since(start);
  std::ostringstream note;
  note << "e_prime=" << result.e_prime << " errors=(" << errors[0] << "," << errors[1] << ") "
       << std::fixed << std::setprecision(2) << elapsed << "s";
  detail = note.str();
  return result.e_prime == 2 && energy(inst, result.a_hat) == 2 &&
         errors == std::vector<std::int64_t>{1, 3} && elapsed < kTimeLimitSeconds;
}

bool check_hamiltonian_identity(std::string& detail) {
  constexpr int kPairs = 1000;
  constexpr double kTimeLimitSeconds = 5.0;
  const auto start = Clock::now();

  Rng rng(20260817);
  int failures = 0;
  for (int trial = 0; trial < kPairs; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(64));
    const Instance inst = oracle::random_instance(rng, n, 1, 1000000);
    const Partition x = oracle::random_partition(rng, n);
    if (!verify_hamiltonian_identity(inst, x)) ++failures;
  }

  const double elapsed = seconds_since(start);
  std::ostringstream note;
  note << failures << "/" << kPairs << " failures " << std::fixed << std::setprecision(2)
       << elapsed << "s";
  detail = note.str();
  return failures == 0 && elapsed < kTimeLimitSeconds;
}

bool check_exact_oracle(std::string& detail) {
  constexpr int kInstances = 200;
  constexpr double kTimeLimitSeconds = 30.0;
  const auto start = Clock::now();

  Rng rng(31415);
  int failures = 0;
  for (int trial = 0; trial < kInstances; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(20));
    const Instance inst = oracle::random_instance(rng, n, 1, 5000);
    if (solve_exact(inst).energy != oracle::min_energy(inst)) ++failures;
  }

  const double elapsed = seconds_since(start);
  std::ostringstream note;
  note << failures << "/" << kInstances << " mismatches " << std::fixed << std::setprecision(2)
       << elapsed << "s";
  detail = note.str();
  return failures == 0 && elapsed < kTimeLimitSeconds;
}

bool check_ldm_pathology(std::string& detail) {
  const Instance inst({3000, 3000, 2000, 2000, 2000});
  const Energy ldm = solve_ldm(inst).energy;
  const Energy exact = solve_exact(inst).energy;
  detail = "ldm=" + std::to_string(ldm) + " exact=" + std::to_string(exact);
  return ldm == 2000 && exact == 0;
}

bool check_ldm_large_n(std::string& detail) {
  constexpr int kInstances = 10;
  constexpr int kRequiredPerfect = 9;
  constexpr double kTimeLimitSeconds = 1.0;
  const auto start = Clock::now();

  int perfect = 0;
  for (int i = 0; i < kInstances; ++i) {
    const Instance inst =
        generate_instance(500, derive_seed(9000, static_cast<std::uint64_t>(i)), 2500, 5000, false);
    if (is_perfect(solve_ldm(inst).energy)) ++perfect;
  }

  const double elapsed = seconds_since(start);
  std::ostringstream note;
  note << perfect << "/" << kInstances << " perfect " << std::fixed << std::setprecision(3)
       << elapsed << "s";
  detail = note.str();
  return perfect >= kRequiredPerfect && elapsed < kTimeLimitSeconds;
}

bool check_sa_pipeline_large_n(std::string& detail) {
  constexpr double kRequiredPerfectFraction = 0.60;
  constexpr double kMaxMedianEnergy = 2.0;
  const auto start = Clock::now();

  ExperimentConfig config;
  config.n_values = {500};
  config.instances_per_n = 10;
  config.runs_per_solver = 5;
  config.master_seed = 260817;
  SolverSpec spec;
  spec.id = "pipeline";
  spec.label = "our-sa-20";
  spec.sub_solver = "sa";
  spec.aux_solver = "sa";
  spec.sub_size = 20;
  config.solvers = {spec};

  const std::vector<RunRecord> records = run_experiment(config, 0);
  std::vector<double> energies;
  int perfect = 0;
  for (const RunRecord& record : records) {
    if (record.failed) continue;
    energies.push_back(static_cast<double>(record.energy));
    if (record.perfect) ++perfect;
  }
  std::sort(energies.begin(), energies.end());
  const std::size_t runs = energies.size();
  const double median =
      runs == 0 ? std::numeric_limits<double>::infinity()
                : (runs % 2 == 1 ? energies[runs / 2]
                                 : (energies[runs / 2 - 1] + energies[runs / 2]) / 2.0);
  const double fraction = runs == 0 ? 0.0 : static_cast<double>(perfect) / static_cast<double>(runs);

  const double elapsed = seconds_since(start);
  std::ostringstream note;
  note << perfect << "/" << runs << " perfect, median=" << median << ", " << std::fixed
       << std::setprecision(1) << elapsed << "s";
  detail = note.str();
  return runs == 50 && fraction >= kRequiredPerfectFraction && median <= kMaxMedianEnergy;
}

bool check_merge_optimality(std::string& detail) {
  constexpr int kPipelines = 100;
  Rng rng(777);
  int failures = 0;
  for (int trial = 0; trial < kPipelines; ++trial) {
    const int m = 2 + static_cast<int>(rng.below(15));  // 2..16
    const int n = m * (2 + static_cast<int>(rng.below(3)));
    const Instance inst = oracle::random_instance(rng, n, 20, 600);

    PipelineOptions options;
    options.m = m;
    options.config.seed = rng.next();
    const auto greedy = make_solver("greedy");
    const auto exact = make_solver("exact");
    const PipelineResult result = run_pipeline(inst, *greedy, *exact, options);

    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      std::int64_t sum = 0;
      for (int k = 0; k < m; ++k) {
        const std::int64_t e = result.sub_solutions[static_cast<std::size_t>(k)].e_k;
        sum += (mask >> k) & 1 ? e : -e;
      }
      best = std::min(best, sum < 0 ? -sum : sum);
    }
    if (result.e_prime != best) ++failures;
  }
  detail = std::to_string(failures) + "/" + std::to_string(kPipelines) + " mismatches";
  return failures == 0;
}

bool check_conservation_failure(std::string& detail) {
  std::ostringstream note;
  bool ok = true;
  for (const int n : {8, 10, 12}) {
    const Instance inst = pathological_instance(n);
    const Energy optimal = solve_exact(inst).energy;
    PipelineOptions options;
    options.m = 2;
    options.config.seed = 1;
    const auto exact = make_solver("exact");
    const PipelineResult result = run_pipeline(inst, *exact, *exact, options);
    note << "n=" << n << ": " << result.e_prime << ">" << optimal << " ";
    ok = ok && result.e_prime > optimal;
  }
  detail = note.str();
  return ok;
}

bool check_count_scaling(std::string& detail) {
  constexpr int kInstancesPerLambda = 30;
  constexpr double kRatioLow = 1.4;
  constexpr double kRatioHigh = 2.8;
  constexpr double kTimeLimitSeconds = 120.0;
  const auto start = Clock::now();

  const auto mean_count = [](std::int64_t lambda) {
    double sum = 0.0;
    for (int i = 0; i < kInstancesPerLambda; ++i) {
      const Instance inst = generate_instance(
          20, derive_seed(0x5ca1e + static_cast<std::uint64_t>(lambda),
                          static_cast<std::uint64_t>(i)),
          1, lambda, true);
      sum += static_cast<double>(count_perfect_assignments(inst));
    }
    return sum / kInstancesPerLambda;
  };
  const double at_16 = mean_count(16);
  const double at_32 = mean_count(32);
  const double ratio = at_16 / at_32;

  const double elapsed = seconds_since(start);
  std::ostringstream note;
  note << "mean@16=" << at_16 << " mean@32=" << at_32 << " ratio=" << std::setprecision(3)
       << ratio << " " << std::fixed << std::setprecision(1) << elapsed << "s";
  detail = note.str();
  return ratio >= kRatioLow && ratio <= kRatioHigh && elapsed < kTimeLimitSeconds;
}

bool check_m_bound_anchor(std::string& detail) {
  const int bound = max_m_bound(500, 5000);
  detail = "max_m_bound(500, 5000)=" + std::to_string(bound);
  return bound == 40;
}

bool check_determinism_and_accounting(std::string& detail) {
  ExperimentConfig config;
  config.n_values = {32, 48};
  config.instances_per_n = 3;
  config.runs_per_solver = 2;
  config.master_seed = 4242;
  config.range.lo = 100;
  config.range.hi = 900;

  SolverSpec greedy;
  greedy.id = "greedy";
  greedy.label = "greedy";
  SolverSpec ldm;
  ldm.id = "ldm";
  ldm.label = "ldm";
  SolverSpec sa;
  sa.id = "sa";
  sa.label = "sa";
  sa.num_reads = 3;
  sa.num_sweeps = 30;
  SolverSpec pipe;
  pipe.id = "pipeline";
  pipe.label = "pipeline-sa-exact-N8";
  pipe.sub_solver = "sa";
  pipe.aux_solver = "exact";
  pipe.sub_size = 8;
  pipe.num_reads = 3;
  pipe.num_sweeps = 30;
  config.solvers = {greedy, ldm, sa, pipe};

  const std::string csv_one = to_csv(run_experiment(config, 1));
  const std::vector<RunRecord> records = run_experiment(config, 8);
  const std::string csv_eight = to_csv(records);
  const std::string csv_again = to_csv(run_experiment(config, 8));

  int accounting_failures = 0;
  int pipeline_rows = 0;
  for (const RunRecord& record : records) {
    if (record.failed || !record.detail.contains("per_k")) continue;
    ++pipeline_rows;
    std::int64_t max_sub_ops = 0;
    std::int64_t max_sub_us = 0;
    for (const auto& sub : record.detail["per_k"]) {
      max_sub_ops = std::max(max_sub_ops, sub["backend_ops"].get<std::int64_t>());
      max_sub_us = std::max(max_sub_us, sub["backend_us"].get<std::int64_t>());
    }
    const bool ops_ok =
        record.detail["ops"]["parallel_backend"].get<std::int64_t>() ==
        max_sub_ops + record.detail["ops"]["aux_backend"].get<std::int64_t>();
    const bool us_ok = record.detail["timings"]["parallel_backend"].get<std::int64_t>() ==
                       max_sub_us + record.detail["aux_backend_us"].get<std::int64_t>();
    if (!ops_ok || !us_ok) ++accounting_failures;
  }

  std::ostringstream note;
  note << (csv_one == csv_eight ? "csv stable across workers" : "CSV DIFFERS ACROSS WORKERS")
       << ", " << (csv_eight == csv_again ? "rerun identical" : "RERUN DIFFERS") << ", "
       << accounting_failures << "/" << pipeline_rows << " accounting failures";
  detail = note.str();
  return csv_one == csv_eight && csv_eight == csv_again && pipeline_rows > 0 &&
         accounting_failures == 0;
}

bool check_remote_round_trip(std::string& detail) {
  constexpr int kCases = 20;
  SolverConfig server_defaults;
  server_defaults.num_sweeps = 120;
  SamplerServer server(server_defaults);
  const int port = server.start("127.0.0.1", 0);
  if (port < 0) {
    detail = "could not bind loopback sampler";
    return false;
  }
  const std::string endpoint = "http://127.0.0.1:" + std::to_string(port) + "/sample";

  Rng rng(5150);
  int failures = 0;
  for (int trial = 0; trial < kCases; ++trial) {
    const int n = 10 + static_cast<int>(rng.below(20));
    const Instance inst = oracle::random_instance(rng, n, 10, 400);
    SolverConfig config;
    config.seed = rng.next();
    config.num_reads = 6;
    config.num_sweeps = 120;
    const SolveResult local = solve_sa(inst, config);
    const SolveResult remote = solve_remote(endpoint, inst, config);
    if (!(remote.energy == local.energy && remote.partition == local.partition)) ++failures;
  }
  detail = std::to_string(failures) + "/" + std::to_string(kCases) + " mismatches";
  return failures == 0;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "worked example: pipeline(exact, exact) on the six-element instance",
       check_worked_example},
      {2, "squared-energy identity over 1000 random (instance, x) pairs",
       check_hamiltonian_identity},
      {3, "meet-in-the-middle equals enumeration on 200 instances", check_exact_oracle},
      {4, "differencing pathology: ldm 2000 vs exact 0", check_ldm_pathology},
      {5, "ldm perfect on >= 9/10 instances at n=500", check_ldm_large_n},
      {6, "sa pipeline at n=500, sub-size 20: >= 60% perfect, median <= 2",
       check_sa_pipeline_large_n},
      {7, "merge equals the enumerated signed-sum optimum on 100 pipelines",
       check_merge_optimality},
      {8, "doubling family: pipeline strictly above the optimum", check_conservation_failure},
      {9, "perfect-count scaling ratio between lambda 16 and 32", check_count_scaling},
      {10, "analysis anchor: max_m_bound(500, 5000) = 40", check_m_bound_anchor},
      {11, "csv byte-stable across workers; parallel backend = max(sub) + aux",
       check_determinism_and_accounting},
      {12, "remote round trip equals direct sa on 20 seeded cases", check_remote_round_trip},
  };

  int passed = 0;
  for (const Criterion& criterion : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << " [" << std::setw(2) << criterion.id << "] "
              << criterion.summary << (detail.empty() ? "" : "  -- " + detail) << '\n';
    if (ok) ++passed;
  }
  std::cout << passed << "/" << criteria.size() << " criteria passed" << std::endl;
  return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
