#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "npart/analysis.hpp"
#include "npart/bench.hpp"
#include "npart/core.hpp"
#include "npart/decompose.hpp"
#include "npart/errors.hpp"
#include "npart/merge.hpp"
#include "npart/sampler_server.hpp"
#include "npart/solvers.hpp"

namespace {

using nlohmann::json;

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

std::vector<int> parse_label_list(const std::string& text) {
  std::vector<int> labels;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(token, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("--vector entries must be integers, got '" + token + "'");
    }
    if (used != token.size()) {
      throw std::invalid_argument("--vector entries must be integers, got '" + token + "'");
    }
    labels.push_back(value);
  }
  if (labels.empty()) throw std::invalid_argument("--vector must list at least one label");
  return labels;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw npart::IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw npart::IoError("failed while writing '" + path + "'");
}

struct GenArgs {
  int n = 0;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> lo;
  std::optional<std::int64_t> hi;
  bool even_sum = false;
  std::string out_path;
};

int cmd_gen(const GenArgs& args) {
  npart::WeightRangeRule range;
  range.lo = args.lo;
  range.hi = args.hi;
  if (args.lo.has_value() != args.hi.has_value()) {
    throw std::invalid_argument("--lo and --hi must be given together");
  }
  const auto [lo, hi] = range.bounds_for(args.n);
  const npart::Instance instance =
      npart::generate_instance(args.n, args.seed, lo, hi, args.even_sum);
  if (!args.out_path.empty()) npart::write_instance(instance, args.out_path);
  print_json({{"n", instance.n()},
              {"seed", args.seed},
              {"lo", lo},
              {"hi", hi},
              {"even_sum", args.even_sum},
              {"total", instance.total()},
              {"weights", instance.weights()}});
  return 0;
}

struct SolveArgs {
  std::string instance_path;
  std::string solver = "exact";
  std::uint64_t seed = 0;
  std::optional<int> num_reads;
  std::optional<int> num_sweeps;
  std::optional<double> beta_min;
  std::optional<double> beta_max;
  std::optional<std::int64_t> time_budget_ms;
  std::string endpoint;
  std::string sub_solver = "sa";
  std::string aux_solver = "sa";
  std::optional<int> m;
  std::optional<int> sub_size;
  std::string vector_text;
  int workers = 0;
};

int cmd_solve(const SolveArgs& args) {
  const npart::Instance instance = npart::read_instance(args.instance_path);
  npart::SolverConfig config;
  config.seed = args.seed;
  if (args.num_reads) config.num_reads = *args.num_reads;
  if (args.num_sweeps) config.num_sweeps = *args.num_sweeps;
  config.beta_schedule.beta_min = args.beta_min;
  config.beta_schedule.beta_max = args.beta_max;
  if (args.time_budget_ms) config.time_budget = std::chrono::milliseconds(*args.time_budget_ms);

  if (args.solver == "pipeline") {
    npart::PipelineOptions options;
    if (!args.vector_text.empty()) {
      auto vector = npart::DecomposingVector::from_labels(parse_label_list(args.vector_text));
      if (args.m && *args.m != vector.m()) {
        throw std::invalid_argument("--m says " + std::to_string(*args.m) +
                                    " sub-problems but --vector has " +
                                    std::to_string(vector.m()));
      }
      options.vector = std::move(vector);
    } else {
      options.m = args.m;
      options.sub_size = args.sub_size;
    }
    options.config = config;
    options.workers = args.workers;
    const auto sub = npart::make_solver(args.sub_solver, args.endpoint);
    const auto aux = npart::make_solver(args.aux_solver, args.endpoint);
    print_json(npart::run_pipeline(instance, *sub, *aux, options).to_json());
    return 0;
  }
  if (!args.vector_text.empty()) {
    throw std::invalid_argument("--vector only applies to the pipeline solver");
  }
  const auto solver = npart::make_solver(args.solver, args.endpoint);
  print_json(solver->solve(instance, config).to_json());
  return 0;
}

struct AnalyzeArgs {
  std::string instance_path;
  std::optional<int> n;
  std::int64_t lambda = 2;
  double target = 1.0;
};

int cmd_analyze(const AnalyzeArgs& args) {
  std::optional<npart::Instance> instance;
  if (!args.instance_path.empty()) instance = npart::read_instance(args.instance_path);
  if (!instance && !args.n) {
    throw std::invalid_argument("analyze needs an instance file or --n");
  }
  const int n = instance ? instance->n() : *args.n;

  const npart::PerfectCountEstimate estimate = npart::expected_perfect_count(n, args.lambda);
  json out = {{"n", n},
              {"lambda", args.lambda},
              {"target_sub_solutions", args.target},
              {"expected_perfect_count",
               {{"log2", estimate.log2_value},
                {"value", estimate.value ? json(*estimate.value) : json()}}},
              {"m_for_target", npart::m_for_target(n, args.lambda, args.target)},
              {"max_m_bound", npart::max_m_bound(n, args.lambda)}};
  if (instance && n <= 24) {
    out["empirical_count"] = npart::count_perfect_assignments(*instance);
  }
  print_json(out);
  return 0;
}

struct BenchArgs {
  std::string config_path;
  std::string out_dir = ".";
  int workers = 0;
  bool manifest_only = false;
};

int cmd_bench(const BenchArgs& args) {
  std::ifstream in(args.config_path);
  if (!in) throw npart::IoError("cannot open config '" + args.config_path + "'");
  json raw;
  try {
    raw = json::parse(in);
  } catch (const json::parse_error& e) {
    throw npart::IoError("config '" + args.config_path + "' is not valid JSON: " + e.what());
  }
  const npart::ExperimentConfig config = npart::ExperimentConfig::from_json(raw);

  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);
  if (ec) throw npart::IoError("cannot create output directory '" + args.out_dir + "'");
  const auto path_in_dir = [&](const char* name) {
    return (std::filesystem::path(args.out_dir) / name).string();
  };

  const std::string manifest_path = path_in_dir("manifest.json");
  write_text_file(manifest_path, npart::manifest_json(config).dump(2) + "\n");
  json out = {{"manifest", manifest_path}};

  if (!config.solvers.empty() && !args.manifest_only) {
    const std::vector<npart::RunRecord> records = npart::run_experiment(config, args.workers);
    const std::string csv_path = path_in_dir("results.csv");
    const std::string jsonl_path = path_in_dir("results.jsonl");
    const std::string summary_path = path_in_dir("summary.json");
    write_text_file(csv_path, npart::to_csv(records));
    write_text_file(jsonl_path, npart::to_jsonl(records));
    const json summary = npart::summarize(records);
    write_text_file(summary_path, summary.dump(2) + "\n");
    out["csv"] = csv_path;
    out["jsonl"] = jsonl_path;
    out["summary_file"] = summary_path;
    out["rows"] = records.size();
    out["summary"] = summary;
  }
  print_json(out);
  return 0;
}

struct ServeArgs {
  int port = 8080;
  std::string host = "127.0.0.1";
  int num_reads = npart::kDefaultNumReads;
  int num_sweeps = npart::kDefaultNumSweeps;
  std::optional<double> beta_min;
  std::optional<double> beta_max;
  std::uint64_t seed = 0;
};

int cmd_serve(const ServeArgs& args) {
  npart::SolverConfig defaults;
  defaults.seed = args.seed;
  defaults.num_reads = args.num_reads;
  defaults.num_sweeps = args.num_sweeps;
  defaults.beta_schedule.beta_min = args.beta_min;
  defaults.beta_schedule.beta_max = args.beta_max;

  npart::SamplerServer server(defaults);
  const int port = server.start(args.host, args.port);
  if (port < 0) {
    throw npart::IoError("cannot bind sampler to " + args.host + ":" + std::to_string(args.port));
  }
  print_json({{"listening", true}, {"host", args.host}, {"port", port}});
  std::cout.flush();
  while (true) std::this_thread::sleep_for(std::chrono::hours(1));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Number partitioning solver suite"};
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--n", gen_args.n, "Number of elements")->required();
  gen->add_option("--seed", gen_args.seed, "Generator seed");
  auto* lo_opt = gen->add_option("--lo", gen_args.lo, "Lower weight bound (default 5n)");
  gen->add_option("--hi", gen_args.hi, "Upper weight bound (default 10n)")->needs(lo_opt);
  gen->add_flag("--even-sum", gen_args.even_sum, "Repair the total to even parity");
  gen->add_option("--out", gen_args.out_path, "Also write the instance file here");

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "Solve one instance file");
  solve->add_option("instance", solve_args.instance_path, "Instance file")->required();
  solve->add_option("--solver", solve_args.solver,
                    "exact | greedy | ldm | sa | remote | pipeline");
  solve->add_option("--seed", solve_args.seed, "Master seed");
  solve->add_option("--num-reads", solve_args.num_reads, "Annealer restarts");
  solve->add_option("--num-sweeps", solve_args.num_sweeps, "Sweeps per read");
  solve->add_option("--beta-min", solve_args.beta_min, "Initial inverse temperature");
  solve->add_option("--beta-max", solve_args.beta_max, "Final inverse temperature");
  solve->add_option("--time-budget-ms", solve_args.time_budget_ms,
                    "Optional annealer time budget (trades determinism for latency)");
  solve->add_option("--endpoint", solve_args.endpoint, "Remote sampler URL");
  solve->add_option("--sub-solver", solve_args.sub_solver, "Pipeline sub-problem solver");
  solve->add_option("--aux-solver", solve_args.aux_solver, "Pipeline auxiliary solver");
  auto* m_opt = solve->add_option("--m", solve_args.m, "Number of sub-problems");
  auto* sub_size_opt =
      solve->add_option("--sub-size", solve_args.sub_size, "Target sub-problem size")
          ->excludes(m_opt);
  solve->add_option("--vector", solve_args.vector_text,
                    "Explicit decomposing vector, e.g. 1,1,1,2,2,2")
      ->excludes(sub_size_opt);
  solve->add_option("--workers", solve_args.workers, "Sub-solve worker cap (0 = auto)");

  AnalyzeArgs analyze_args;
  CLI::App* analyze = app.add_subcommand("analyze", "Decomposition regime formulas");
  analyze->add_option("instance", analyze_args.instance_path,
                      "Optional instance file (enables the empirical count for n <= 24)");
  analyze->add_option("--n", analyze_args.n, "Problem size when no file is given");
  analyze->add_option("--lambda", analyze_args.lambda, "Sub-problem size");
  analyze->add_option("--target", analyze_args.target, "Target perfect solutions per sub-problem");

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "Run an experiment grid from a config file");
  bench->add_option("config", bench_args.config_path, "Experiment config JSON")->required();
  bench->add_option("--out-dir", bench_args.out_dir, "Output directory");
  bench->add_option("--workers", bench_args.workers, "Worker pool size (0 = auto)");
  bench->add_flag("--manifest-only", bench_args.manifest_only, "Write the manifest and stop");

  ServeArgs serve_args;
  CLI::App* serve = app.add_subcommand("serve-sampler", "Loopback annealing sampler");
  serve->add_option("--port", serve_args.port, "Port (0 picks a free one)");
  serve->add_option("--host", serve_args.host, "Bind address");
  serve->add_option("--num-reads", serve_args.num_reads, "Default reads per request");
  serve->add_option("--num-sweeps", serve_args.num_sweeps, "Sweeps per read");
  serve->add_option("--beta-min", serve_args.beta_min, "Initial inverse temperature");
  serve->add_option("--beta-max", serve_args.beta_max, "Final inverse temperature");
  serve->add_option("--seed", serve_args.seed, "Default seed when requests omit one");

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return cmd_gen(gen_args);
    if (solve->parsed()) return cmd_solve(solve_args);
    if (analyze->parsed()) return cmd_analyze(analyze_args);
    if (bench->parsed()) return cmd_bench(bench_args);
    if (serve->parsed()) return cmd_serve(serve_args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const npart::CapabilityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const npart::SolveError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const npart::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const npart::ProtocolError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const npart::NetworkError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
