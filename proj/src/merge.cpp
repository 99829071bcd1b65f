#include "npart/merge.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "npart/errors.hpp"
#include "npart/rng.hpp"
#include "timing.hpp"

namespace npart {
namespace {

[[noreturn]] void rethrow_with_context(std::exception_ptr error, const std::string& where) {
  try {
    std::rethrow_exception(error);
  } catch (const CapabilityError& e) {
    throw CapabilityError(where + ": " + e.what());
  } catch (const SolveError& e) {
    throw SolveError(where + ": " + e.what());
  } catch (const ProtocolError& e) {
    throw ProtocolError(where + ": " + e.what());
  } catch (const NetworkError& e) {
    throw NetworkError(where + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError(where + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(where + ": " + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(where + ": " + e.what());
  }
}

int resolve_m(const Instance& instance, const PipelineOptions& options) {
  const int given = static_cast<int>(options.m.has_value()) +
                    static_cast<int>(options.sub_size.has_value()) +
                    static_cast<int>(options.vector.has_value());
  if (given != 1) {
    throw std::invalid_argument(
        "exactly one of m, sub_size, or an explicit decomposing vector is required");
  }
  if (options.vector) return options.vector->m();
  if (options.m) {
    if (*options.m < 1 || *options.m > instance.n()) {
      throw std::invalid_argument("m must be in [1, n]; got m = " + std::to_string(*options.m) +
                                  ", n = " + std::to_string(instance.n()));
    }
    return *options.m;
  }
  if (*options.sub_size < 1) throw std::invalid_argument("sub_size must be >= 1");
  const int m = instance.n() / *options.sub_size;
  if (m < 1) {
    throw std::invalid_argument("sub_size " + std::to_string(*options.sub_size) +
                                " exceeds n = " + std::to_string(instance.n()));
  }
  return m;
}

}  // namespace

SubSolution orient(const Instance& sub_instance, const Partition& partition,
                   const std::vector<int>& index_map, int k) {
  if (sub_instance.n() != partition.n()) {
    throw std::invalid_argument("partition has " + std::to_string(partition.n()) +
                                " labels, sub-instance has " + std::to_string(sub_instance.n()));
  }
  if (static_cast<int>(index_map.size()) != sub_instance.n()) {
    throw std::invalid_argument("index map has " + std::to_string(index_map.size()) +
                                " entries, sub-instance has " + std::to_string(sub_instance.n()));
  }
  std::int64_t side_one = 0;
  for (int i = 0; i < sub_instance.n(); ++i) {
    if (partition.on_side_one(i)) side_one += sub_instance.weight(i);
  }
  const bool side_one_heavy = side_one >= sub_instance.total() - side_one;

  SubSolution out;
  out.k = k;
  for (int i = 0; i < sub_instance.n(); ++i) {
    const bool heavy = partition.on_side_one(i) == side_one_heavy;
    (heavy ? out.heavy : out.light).push_back(index_map[static_cast<std::size_t>(i)]);
  }
  const std::int64_t diff = 2 * side_one - sub_instance.total();
  out.e_k = diff < 0 ? -diff : diff;
  return out;
}

AuxiliaryInstance build_auxiliary(const std::vector<SubSolution>& subs) {
  if (subs.empty()) throw std::invalid_argument("need at least one sub-solution");
  std::vector<std::int64_t> errors;
  std::vector<int> sub_index;
  errors.reserve(subs.size());
  sub_index.reserve(subs.size());
  for (const SubSolution& sub : subs) {
    errors.push_back(sub.e_k);
    sub_index.push_back(sub.k);
  }
  return AuxiliaryInstance{Instance::allowing_zeros(std::move(errors)), std::move(sub_index)};
}

Partition reconstruct(int n, const std::vector<SubSolution>& subs,
                      const std::vector<int>& aux_partition) {
  const int m = static_cast<int>(subs.size());
  std::vector<std::uint8_t> heavy_label(static_cast<std::size_t>(m) + 1, 0);
  for (const int k : aux_partition) {
    if (k < 1 || k > m) {
      throw std::invalid_argument("auxiliary partition names sub-problem " + std::to_string(k) +
                                  ", valid range is [1, " + std::to_string(m) + "]");
    }
    heavy_label[static_cast<std::size_t>(k)] = 1;
  }

  constexpr std::uint8_t kUnset = 2;
  std::vector<std::uint8_t> side(static_cast<std::size_t>(n), kUnset);
  const auto place = [&](const std::vector<int>& indices, std::uint8_t label) {
    for (const int i : indices) {
      if (i < 0 || i >= n) {
        throw std::invalid_argument("sub-solution index " + std::to_string(i) +
                                    " outside [0, " + std::to_string(n) + ")");
      }
      if (side[static_cast<std::size_t>(i)] != kUnset) {
        throw std::invalid_argument("element " + std::to_string(i) +
                                    " appears in more than one sub-solution");
      }
      side[static_cast<std::size_t>(i)] = label;
    }
  };
  for (const SubSolution& sub : subs) {
    const std::uint8_t label = heavy_label[static_cast<std::size_t>(sub.k)];
    place(sub.heavy, label);
    place(sub.light, static_cast<std::uint8_t>(1 - label));
  }
  for (int i = 0; i < n; ++i) {
    if (side[static_cast<std::size_t>(i)] == kUnset) {
      throw std::invalid_argument("element " + std::to_string(i) +
                                  " is covered by no sub-solution");
    }
  }
  return Partition(std::move(side));
}

int default_workers() {
  if (const char* env = std::getenv("NPP_WORKERS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && parsed >= 1 && parsed <= 4096) {
      return static_cast<int>(parsed);
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

PipelineResult run_pipeline(const Instance& instance, const SubproblemSolver& sub_solver,
                            const SubproblemSolver& aux_solver, const PipelineOptions& options) {
  const auto start = detail::Clock::now();
  options.config.validate();
  const int m = resolve_m(instance, options);
  const std::uint64_t master = options.config.seed;

  const DecomposingVector vector =
      options.vector ? *options.vector : balanced_random_vector(instance.n(), m, master);
  const Decomposition parts = decompose(instance, vector);

  // Fan the sub-solves out; slot k-1 owns all of sub-problem k's state, so
  // workers never contend and the join is a plain gather.
  std::vector<std::optional<SolveResult>> sub_results(static_cast<std::size_t>(m));
  std::vector<std::exception_ptr> sub_errors(static_cast<std::size_t>(m));
  std::vector<std::uint64_t> sub_seeds(static_cast<std::size_t>(m));
  const auto solve_one = [&](int index) {
    SolverConfig config = options.config;
    config.seed = derive_seed(master, static_cast<std::uint64_t>(index) + 1);
    sub_seeds[static_cast<std::size_t>(index)] = config.seed;
    try {
      sub_results[static_cast<std::size_t>(index)] =
          sub_solver.solve(parts.subs[static_cast<std::size_t>(index)], config);
    } catch (...) {
      sub_errors[static_cast<std::size_t>(index)] = std::current_exception();
    }
  };

  const int workers = std::min(m, options.workers > 0 ? options.workers : default_workers());
  if (workers <= 1) {
    for (int index = 0; index < m; ++index) solve_one(index);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int index = next.fetch_add(1); index < m; index = next.fetch_add(1)) {
          solve_one(index);
        }
      });
    }
    for (std::thread& worker : pool) worker.join();
  }
  for (int index = 0; index < m; ++index) {
    if (sub_errors[static_cast<std::size_t>(index)]) {
      rethrow_with_context(sub_errors[static_cast<std::size_t>(index)],
                           "sub-problem " + std::to_string(index + 1));
    }
  }

  std::vector<SubSolution> sub_solutions;
  std::vector<std::int64_t> sub_backend_us;
  std::vector<std::int64_t> sub_backend_ops;
  sub_solutions.reserve(static_cast<std::size_t>(m));
  for (int index = 0; index < m; ++index) {
    const SolveResult& result = *sub_results[static_cast<std::size_t>(index)];
    sub_solutions.push_back(orient(parts.subs[static_cast<std::size_t>(index)],
                                   result.partition,
                                   parts.index_maps[static_cast<std::size_t>(index)], index + 1));
    sub_backend_us.push_back(result.backend_us);
    sub_backend_ops.push_back(result.backend_ops);
  }

  const AuxiliaryInstance aux = build_auxiliary(sub_solutions);
  SolverConfig aux_config = options.config;
  aux_config.seed = derive_seed(master, 0);
  const SolveResult aux_result = [&] {
    try {
      return aux_solver.solve(aux.instance, aux_config);
    } catch (...) {
      rethrow_with_context(std::current_exception(), "auxiliary solve");
    }
  }();

  std::vector<int> aux_partition;
  for (int position = 0; position < aux.instance.n(); ++position) {
    if (aux_result.partition.on_side_one(position)) {
      aux_partition.push_back(aux.sub_index[static_cast<std::size_t>(position)]);
    }
  }

  Partition a_hat = reconstruct(instance.n(), sub_solutions, aux_partition);
  const Energy e_prime = energy(instance, a_hat);

  std::int64_t signed_sum = 0;
  for (const SubSolution& sub : sub_solutions) {
    signed_sum += aux_result.partition.on_side_one(sub.k - 1) ? sub.e_k : -sub.e_k;
  }
  if (e_prime != (signed_sum < 0 ? -signed_sum : signed_sum)) {
    throw std::logic_error("reconstructed energy disagrees with the signed error sum");
  }

  PipelineTimings timings;
  std::int64_t max_sub_us = 0;
  std::int64_t max_sub_ops = 0;
  for (int index = 0; index < m; ++index) {
    timings.sequential_backend_us += sub_backend_us[static_cast<std::size_t>(index)];
    timings.sequential_backend_ops += sub_backend_ops[static_cast<std::size_t>(index)];
    max_sub_us = std::max(max_sub_us, sub_backend_us[static_cast<std::size_t>(index)]);
    max_sub_ops = std::max(max_sub_ops, sub_backend_ops[static_cast<std::size_t>(index)]);
  }
  timings.sequential_backend_us += aux_result.backend_us;
  timings.sequential_backend_ops += aux_result.backend_ops;
  timings.parallel_backend_us = max_sub_us + aux_result.backend_us;
  timings.parallel_backend_ops = max_sub_ops + aux_result.backend_ops;
  timings.wall_us = detail::elapsed_us(start);

  return PipelineResult{.a_hat = std::move(a_hat),
                        .e_prime = e_prime,
                        .sub_solutions = std::move(sub_solutions),
                        .aux_partition = std::move(aux_partition),
                        .m = m,
                        .sub_size = options.sub_size,
                        .sub_solver_id = sub_solver.id(),
                        .aux_solver_id = aux_solver.id(),
                        .master_seed = master,
                        .sub_seeds = std::move(sub_seeds),
                        .aux_seed = aux_config.seed,
                        .sub_backend_us = std::move(sub_backend_us),
                        .sub_backend_ops = std::move(sub_backend_ops),
                        .aux_backend_us = aux_result.backend_us,
                        .aux_backend_ops = aux_result.backend_ops,
                        .timings = timings};
}

nlohmann::json PipelineResult::to_json() const {
  nlohmann::json per_k = nlohmann::json::array();
  for (std::size_t index = 0; index < sub_solutions.size(); ++index) {
    const SubSolution& sub = sub_solutions[index];
    per_k.push_back({{"k", sub.k},
                     {"e_k", sub.e_k},
                     {"heavy_indices", sub.heavy},
                     {"light_indices", sub.light},
                     {"backend_us", sub_backend_us[index]},
                     {"backend_ops", sub_backend_ops[index]}});
  }
  nlohmann::json out = {
      {"e_prime", e_prime},
      {"a_hat", a_hat.side()},
      {"m", m},
      {"per_k", std::move(per_k)},
      {"aux_partition", aux_partition},
      {"aux_backend_us", aux_backend_us},
      {"timings",
       {{"sequential_backend", timings.sequential_backend_us},
        {"parallel_backend", timings.parallel_backend_us},
        {"wall", timings.wall_us}}},
      {"ops",
       {{"sequential_backend", timings.sequential_backend_ops},
        {"parallel_backend", timings.parallel_backend_ops},
        {"aux_backend", aux_backend_ops}}},
      {"seeds", {{"master", master_seed}, {"sub", sub_seeds}, {"aux", aux_seed}}},
      {"solvers", {{"sub", sub_solver_id}, {"aux", aux_solver_id}}}};
  if (sub_size) out["sub_size"] = *sub_size;
  return out;
}

}  // namespace npart
