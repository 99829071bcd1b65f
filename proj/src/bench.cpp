#include "npart/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "npart/merge.hpp"
#include "npart/rng.hpp"
#include "npart/solvers.hpp"

namespace npart {
namespace {

constexpr std::uint64_t kInstanceTag = 0x696e7374;  // "inst"
constexpr std::uint64_t kRunTag = 0x72756e;         // "run"

constexpr const char* kCsvColumns =
    "n,instance_id,solver,run,energy,is_perfect,m,sub_size,"
    "backend_us,parallel_backend_us,wall_us,seed";

std::uint64_t instance_seed_for(std::uint64_t master, int n, int instance_id) {
  return derive_seed(derive_seed(derive_seed(master, kInstanceTag),
                                 static_cast<std::uint64_t>(n)),
                     static_cast<std::uint64_t>(instance_id));
}

std::uint64_t run_seed_for(std::uint64_t instance_seed, int solver_index, int run) {
  return derive_seed(derive_seed(derive_seed(instance_seed, kRunTag),
                                 static_cast<std::uint64_t>(solver_index)),
                     static_cast<std::uint64_t>(run));
}

bool label_char_ok(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '.' || c == ':' || c == '+' || c == '(' || c == ')' || c == '=' ||
         c == '-';
}

std::string default_label(const SolverSpec& spec) {
  if (spec.id != "pipeline") return spec.id;
  std::string label = "pipeline-" + spec.sub_solver + "-" + spec.aux_solver;
  if (spec.sub_size) return label + "-N" + std::to_string(*spec.sub_size);
  if (spec.m) return label + "-m" + std::to_string(*spec.m);
  return label;
}

SolverConfig config_for(const SolverSpec& spec, std::uint64_t seed) {
  SolverConfig config;
  config.seed = seed;
  if (spec.num_reads) config.num_reads = *spec.num_reads;
  if (spec.num_sweeps) config.num_sweeps = *spec.num_sweeps;
  config.beta_schedule.beta_min = spec.beta_min;
  config.beta_schedule.beta_max = spec.beta_max;
  return config;
}

RunRecord execute_cell(const SolverSpec& spec, const Instance& instance, RunRecord record) {
  const SolverConfig config = config_for(spec, record.run_seed);
  try {
    if (spec.id == "pipeline") {
      const auto sub = make_solver(spec.sub_solver, spec.endpoint);
      const auto aux = make_solver(spec.aux_solver, spec.endpoint);
      PipelineOptions options;
      options.m = spec.m;
      options.sub_size = spec.sub_size;
      options.config = config;
      options.workers = 1;  // the grid pool is the only parallelism here
      const PipelineResult result = run_pipeline(instance, *sub, *aux, options);
      if (energy(instance, result.a_hat) != result.e_prime) {
        throw std::logic_error("pipeline energy does not match its partition");
      }
      record.energy = result.e_prime;
      record.perfect = is_perfect(result.e_prime);
      record.m = result.m;
      record.sub_size = result.sub_size;
      record.backend_ops = result.timings.sequential_backend_ops;
      record.parallel_backend_ops = result.timings.parallel_backend_ops;
      record.wall_ops =
          result.timings.sequential_backend_ops + instance.n() + result.m;
      record.measured_backend_us = result.timings.sequential_backend_us;
      record.measured_wall_us = result.timings.wall_us;
      record.detail = result.to_json();
    } else {
      const auto solver = make_solver(spec.id, spec.endpoint);
      const SolveResult result = solver->solve(instance, config);
      if (energy(instance, result.partition) != result.energy) {
        throw std::logic_error("solver energy does not match its partition");
      }
      record.energy = result.energy;
      record.perfect = is_perfect(result.energy);
      record.backend_ops = result.backend_ops;
      record.parallel_backend_ops = result.backend_ops;
      record.wall_ops = result.backend_ops + instance.n();
      record.measured_backend_us = result.backend_us;
      record.measured_wall_us = result.wall_us;
      record.detail = result.to_json();
    }
  } catch (const std::exception& e) {
    record.failed = true;
    record.error = e.what();
    record.detail = {{"error", e.what()}};
  }
  return record;
}

double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.size() == 1) return sorted.front();
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double mean(const std::vector<double>& values) {
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

std::pair<std::int64_t, std::int64_t> WeightRangeRule::bounds_for(int n) const {
  if (lo && hi) return {*lo, *hi};
  return {lo_factor * n, hi_factor * n};
}

nlohmann::json WeightRangeRule::to_json() const {
  if (lo && hi) return {{"lo", *lo}, {"hi", *hi}};
  return {{"lo_factor", lo_factor}, {"hi_factor", hi_factor}};
}

Instance generate_instance(int n, std::uint64_t seed, std::int64_t lo, std::int64_t hi,
                           bool even_sum) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (lo < 1 || hi < lo) {
    throw std::invalid_argument("weight range [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "] is invalid");
  }
  Rng rng(seed);
  std::vector<std::int64_t> weights(static_cast<std::size_t>(n));
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  std::int64_t total = 0;
  for (auto& w : weights) {
    w = lo + static_cast<std::int64_t>(rng.below(span));
    total += w;
  }
  if (even_sum && total % 2 != 0) {
    auto& w = weights[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n)))];
    w += w == hi ? -1 : 1;
  }
  return Instance(std::move(weights));
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("experiment config must be a JSON object");
  ExperimentConfig config;

  if (!j.contains("n_values") || !j["n_values"].is_array() || j["n_values"].empty()) {
    throw std::invalid_argument("config needs a non-empty 'n_values' array");
  }
  for (const auto& v : j["n_values"]) {
    if (!v.is_number_integer()) throw std::invalid_argument("n_values must hold integers");
    config.n_values.push_back(v.get<int>());
  }
  config.instances_per_n = j.value("instances_per_n", 10);
  config.runs_per_solver = j.value("runs_per_solver", 5);
  config.master_seed = j.value("master_seed", std::uint64_t{0});
  config.even_sum = j.value("even_sum", false);

  if (j.contains("weight_range")) {
    const auto& r = j["weight_range"];
    if (!r.is_object()) throw std::invalid_argument("weight_range must be an object");
    const bool absolute = r.contains("lo") || r.contains("hi");
    const bool factors = r.contains("lo_factor") || r.contains("hi_factor");
    if (absolute && factors) {
      throw std::invalid_argument("weight_range takes lo/hi or lo_factor/hi_factor, not both");
    }
    if (absolute) {
      if (!r.contains("lo") || !r.contains("hi")) {
        throw std::invalid_argument("weight_range needs both lo and hi");
      }
      config.range.lo = r["lo"].get<std::int64_t>();
      config.range.hi = r["hi"].get<std::int64_t>();
    } else if (factors) {
      if (!r.contains("lo_factor") || !r.contains("hi_factor")) {
        throw std::invalid_argument("weight_range needs both lo_factor and hi_factor");
      }
      config.range.lo_factor = r["lo_factor"].get<std::int64_t>();
      config.range.hi_factor = r["hi_factor"].get<std::int64_t>();
    }
  }

  for (const auto& s : j.value("solvers", nlohmann::json::array())) {
    if (!s.is_object() || !s.contains("id")) {
      throw std::invalid_argument("each solver entry needs an 'id'");
    }
    SolverSpec spec;
    spec.id = s["id"].get<std::string>();
    spec.label = s.value("label", "");
    spec.endpoint = s.value("endpoint", "");
    spec.sub_solver = s.value("sub_solver", "");
    spec.aux_solver = s.value("aux_solver", "");
    if (s.contains("m")) spec.m = s["m"].get<int>();
    if (s.contains("sub_size")) spec.sub_size = s["sub_size"].get<int>();
    if (s.contains("num_reads")) spec.num_reads = s["num_reads"].get<int>();
    if (s.contains("num_sweeps")) spec.num_sweeps = s["num_sweeps"].get<int>();
    if (s.contains("beta_min")) spec.beta_min = s["beta_min"].get<double>();
    if (s.contains("beta_max")) spec.beta_max = s["beta_max"].get<double>();
    if (spec.label.empty()) spec.label = default_label(spec);
    config.solvers.push_back(std::move(spec));
  }

  config.validate();
  return config;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json solver_list = nlohmann::json::array();
  for (const SolverSpec& spec : solvers) {
    nlohmann::json s = {{"id", spec.id}, {"label", spec.label}};
    if (!spec.endpoint.empty()) s["endpoint"] = spec.endpoint;
    if (!spec.sub_solver.empty()) s["sub_solver"] = spec.sub_solver;
    if (!spec.aux_solver.empty()) s["aux_solver"] = spec.aux_solver;
    if (spec.m) s["m"] = *spec.m;
    if (spec.sub_size) s["sub_size"] = *spec.sub_size;
    if (spec.num_reads) s["num_reads"] = *spec.num_reads;
    if (spec.num_sweeps) s["num_sweeps"] = *spec.num_sweeps;
    if (spec.beta_min) s["beta_min"] = *spec.beta_min;
    if (spec.beta_max) s["beta_max"] = *spec.beta_max;
    solver_list.push_back(std::move(s));
  }
  return {{"n_values", n_values},
          {"instances_per_n", instances_per_n},
          {"runs_per_solver", runs_per_solver},
          {"master_seed", master_seed},
          {"even_sum", even_sum},
          {"weight_range", range.to_json()},
          {"solvers", std::move(solver_list)}};
}

void ExperimentConfig::validate() const {
  if (n_values.empty()) throw std::invalid_argument("n_values must be non-empty");
  for (const int n : n_values) {
    if (n < 1) throw std::invalid_argument("every n must be >= 1");
    const auto [lo, hi] = range.bounds_for(n);
    if (lo < 1 || lo >= hi) {
      throw std::invalid_argument("weight range [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "] for n = " + std::to_string(n) +
                                  " needs 1 <= lower < upper");
    }
    if (hi > kMaxTotal / n) {
      throw std::invalid_argument("weights up to " + std::to_string(hi) + " at n = " +
                                  std::to_string(n) + " could overflow the total bound");
    }
  }
  std::vector<int> sorted_n = n_values;
  std::sort(sorted_n.begin(), sorted_n.end());
  if (std::adjacent_find(sorted_n.begin(), sorted_n.end()) != sorted_n.end()) {
    throw std::invalid_argument("n_values must be distinct");
  }
  if (instances_per_n < 1) throw std::invalid_argument("instances_per_n must be >= 1");
  if (runs_per_solver < 1) throw std::invalid_argument("runs_per_solver must be >= 1");

  std::vector<std::string> labels;
  for (const SolverSpec& spec : solvers) {
    const bool pipeline = spec.id == "pipeline";
    if (!pipeline && spec.id != "exact" && spec.id != "greedy" && spec.id != "ldm" &&
        spec.id != "sa" && spec.id != "remote") {
      throw std::invalid_argument("unknown solver id: '" + spec.id + "'");
    }
    if (pipeline) {
      for (const std::string& role : {spec.sub_solver, spec.aux_solver}) {
        if (role.empty() || role == "pipeline") {
          throw std::invalid_argument("pipeline entries need plain sub_solver and aux_solver");
        }
      }
      if (spec.m.has_value() == spec.sub_size.has_value()) {
        throw std::invalid_argument("pipeline entries need exactly one of m or sub_size");
      }
    } else if (spec.m || spec.sub_size) {
      throw std::invalid_argument("m/sub_size only apply to pipeline entries");
    }
    const bool needs_endpoint =
        spec.id == "remote" || spec.sub_solver == "remote" || spec.aux_solver == "remote";
    if (needs_endpoint && spec.endpoint.empty()) {
      throw std::invalid_argument("remote solvers need an endpoint");
    }
    if (spec.num_reads && *spec.num_reads < 1) {
      throw std::invalid_argument("num_reads must be >= 1");
    }
    if (spec.num_sweeps && *spec.num_sweeps < 1) {
      throw std::invalid_argument("num_sweeps must be >= 1");
    }
    if (spec.beta_min.has_value() != spec.beta_max.has_value()) {
      throw std::invalid_argument("beta_min and beta_max must be set together");
    }
    if (spec.beta_min && (*spec.beta_min <= 0 || *spec.beta_max <= *spec.beta_min)) {
      throw std::invalid_argument("need 0 < beta_min < beta_max");
    }
    if (spec.label.empty() || spec.label.size() > 64) {
      throw std::invalid_argument("solver labels must be 1..64 characters");
    }
    for (const char c : spec.label) {
      if (!label_char_ok(c)) {
        throw std::invalid_argument("solver label '" + spec.label +
                                    "' has characters unsafe for CSV");
      }
    }
    labels.push_back(spec.label);
  }
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
    throw std::invalid_argument("solver labels must be unique");
  }
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config, int workers) {
  config.validate();

  std::vector<Instance> instances;
  std::vector<std::uint64_t> instance_seeds;
  instances.reserve(config.n_values.size() * static_cast<std::size_t>(config.instances_per_n));
  for (const int n : config.n_values) {
    const auto [lo, hi] = config.range.bounds_for(n);
    for (int inst = 0; inst < config.instances_per_n; ++inst) {
      const std::uint64_t seed = instance_seed_for(config.master_seed, n, inst);
      instance_seeds.push_back(seed);
      instances.push_back(generate_instance(n, seed, lo, hi, config.even_sum));
    }
  }

  std::vector<RunRecord> cells;
  for (std::size_t ni = 0; ni < config.n_values.size(); ++ni) {
    for (int inst = 0; inst < config.instances_per_n; ++inst) {
      const std::size_t slot = ni * static_cast<std::size_t>(config.instances_per_n) +
                               static_cast<std::size_t>(inst);
      for (std::size_t si = 0; si < config.solvers.size(); ++si) {
        const SolverSpec& spec = config.solvers[si];
        const int runs = spec.deterministic() ? 1 : config.runs_per_solver;
        for (int run = 0; run < runs; ++run) {
          RunRecord record;
          record.n = config.n_values[ni];
          record.instance_id = inst;
          record.instance_seed = instance_seeds[slot];
          record.solver_index = static_cast<int>(si);
          record.solver = spec.label;
          record.run = run;
          record.run_seed = run_seed_for(instance_seeds[slot], static_cast<int>(si), run);
          cells.push_back(std::move(record));
        }
      }
    }
  }

  std::vector<RunRecord> records(cells.size(), RunRecord{});
  const auto instance_slot = [&](const RunRecord& cell) {
    std::size_t ni = 0;
    while (config.n_values[ni] != cell.n) ++ni;
    return ni * static_cast<std::size_t>(config.instances_per_n) +
           static_cast<std::size_t>(cell.instance_id);
  };

  const int pool_size = std::min<int>(static_cast<int>(cells.size()),
                                      workers > 0 ? workers : default_workers());
  if (pool_size <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      records[i] = execute_cell(config.solvers[static_cast<std::size_t>(cells[i].solver_index)],
                                instances[instance_slot(cells[i])], cells[i]);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(pool_size));
    for (int w = 0; w < pool_size; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
          records[i] =
              execute_cell(config.solvers[static_cast<std::size_t>(cells[i].solver_index)],
                           instances[instance_slot(cells[i])], cells[i]);
        }
      });
    }
    for (std::thread& worker : pool) worker.join();
  }

  std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    if (a.n != b.n) return a.n < b.n;
    if (a.instance_id != b.instance_id) return a.instance_id < b.instance_id;
    if (a.solver_index != b.solver_index) return a.solver_index < b.solver_index;
    return a.run < b.run;
  });
  return records;
}

std::string to_csv(const std::vector<RunRecord>& records) {
  std::string out = kCsvColumns;
  out += '\n';
  for (const RunRecord& r : records) {
    if (r.failed) continue;
    out += std::to_string(r.n);
    out += ',';
    out += std::to_string(r.instance_id);
    out += ',';
    out += r.solver;
    out += ',';
    out += std::to_string(r.run);
    out += ',';
    out += std::to_string(r.energy);
    out += ',';
    out += r.perfect ? '1' : '0';
    out += ',';
    if (r.m) out += std::to_string(*r.m);
    out += ',';
    if (r.sub_size) out += std::to_string(*r.sub_size);
    out += ',';
    out += std::to_string(r.backend_ops / kOpsPerMicrosecond);
    out += ',';
    out += std::to_string(r.parallel_backend_ops / kOpsPerMicrosecond);
    out += ',';
    out += std::to_string(r.wall_ops / kOpsPerMicrosecond);
    out += ',';
    out += std::to_string(r.run_seed);
    out += '\n';
  }
  return out;
}

std::string to_jsonl(const std::vector<RunRecord>& records) {
  std::string out;
  for (const RunRecord& r : records) {
    nlohmann::json row = {{"n", r.n},
                          {"instance_id", r.instance_id},
                          {"instance_seed", r.instance_seed},
                          {"solver", r.solver},
                          {"run", r.run},
                          {"seed", r.run_seed},
                          {"failed", r.failed}};
    if (r.failed) {
      row["error"] = r.error;
    } else {
      row["energy"] = r.energy;
      row["is_perfect"] = r.perfect;
      if (r.m) row["m"] = *r.m;
      if (r.sub_size) row["sub_size"] = *r.sub_size;
      row["ops"] = {{"backend", r.backend_ops},
                    {"parallel_backend", r.parallel_backend_ops},
                    {"wall", r.wall_ops}};
      row["measured"] = {{"backend_us", r.measured_backend_us},
                         {"wall_us", r.measured_wall_us}};
    }
    row["detail"] = r.detail;
    out += row.dump();
    out += '\n';
  }
  return out;
}

nlohmann::json manifest_json(const ExperimentConfig& config) {
  config.validate();
  nlohmann::json instances = nlohmann::json::array();
  for (const int n : config.n_values) {
    const auto [lo, hi] = config.range.bounds_for(n);
    for (int inst = 0; inst < config.instances_per_n; ++inst) {
      instances.push_back({{"n", n},
                           {"instance_id", inst},
                           {"seed", instance_seed_for(config.master_seed, n, inst)},
                           {"lo", lo},
                           {"hi", hi}});
    }
  }
  return {{"config", config.to_json()},
          {"instances", std::move(instances)},
          {"csv_columns", kCsvColumns},
          {"ops_per_microsecond", kOpsPerMicrosecond},
          {"weight_interval", "inclusive"}};
}

nlohmann::json summarize(const std::vector<RunRecord>& records) {
  struct Group {
    int n;
    std::string solver;
    std::vector<double> energies;
    int perfect = 0;
    std::vector<double> backend_us;
    std::vector<double> wall_us;
    std::vector<double> parallel_backend_us;
    std::vector<double> parallel_wall_us;
  };
  std::vector<Group> groups;
  const auto group_for = [&](const RunRecord& r) -> Group& {
    for (Group& g : groups) {
      if (g.n == r.n && g.solver == r.solver) return g;
    }
    groups.push_back(Group{r.n, r.solver, {}, 0, {}, {}, {}, {}});
    return groups.back();
  };

  for (const RunRecord& r : records) {
    if (r.failed) continue;
    Group& g = group_for(r);
    g.energies.push_back(static_cast<double>(r.energy));
    g.perfect += r.perfect ? 1 : 0;
    g.backend_us.push_back(
        static_cast<double>(r.backend_ops / kOpsPerMicrosecond));
    g.wall_us.push_back(static_cast<double>(r.wall_ops / kOpsPerMicrosecond));
    g.parallel_backend_us.push_back(
        static_cast<double>(r.parallel_backend_ops / kOpsPerMicrosecond));
    g.parallel_wall_us.push_back(static_cast<double>(
        (r.wall_ops - r.backend_ops + r.parallel_backend_ops) / kOpsPerMicrosecond));
  }
  std::sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) {
    return a.n != b.n ? a.n < b.n : a.solver < b.solver;
  });

  nlohmann::json out = nlohmann::json::array();
  for (Group& g : groups) {
    std::sort(g.energies.begin(), g.energies.end());
    out.push_back(
        {{"n", g.n},
         {"solver", g.solver},
         {"runs", g.energies.size()},
         {"energy",
          {{"min", g.energies.front()},
           {"q1", quantile(g.energies, 0.25)},
           {"median", quantile(g.energies, 0.5)},
           {"q3", quantile(g.energies, 0.75)},
           {"max", g.energies.back()},
           {"mean", mean(g.energies)}}},
         {"fraction_perfect",
          static_cast<double>(g.perfect) / static_cast<double>(g.energies.size())},
         {"time_us",
          {{"backend", mean(g.backend_us)},
           {"wall", mean(g.wall_us)},
           {"parallel_backend", mean(g.parallel_backend_us)},
           {"parallel_wall", mean(g.parallel_wall_us)}}}});
  }
  return {{"groups", std::move(out)}};
}

}  // namespace npart
