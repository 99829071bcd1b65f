#include "npart/solvers.hpp"

#include <stdexcept>

namespace npart {

nlohmann::json SolveResult::to_json() const {
  return {{"solver", solver_id},
          {"n", partition.n()},
          {"energy", energy},
          {"is_perfect", is_perfect(energy)},
          {"partition", partition.side()},
          {"reads_performed", reads_performed},
          {"backend_us", backend_us},
          {"wall_us", wall_us},
          {"backend_ops", backend_ops}};
}

void SolverConfig::validate() const {
  if (num_reads < 1) throw std::invalid_argument("num_reads must be >= 1");
  if (num_sweeps < 1) throw std::invalid_argument("num_sweeps must be >= 1");
  const bool has_min = beta_schedule.beta_min.has_value();
  const bool has_max = beta_schedule.beta_max.has_value();
  if (has_min != has_max) {
    throw std::invalid_argument("beta_min and beta_max must be set together");
  }
  if (has_min) {
    if (*beta_schedule.beta_min <= 0.0) throw std::invalid_argument("beta_min must be > 0");
    if (*beta_schedule.beta_max <= *beta_schedule.beta_min) {
      throw std::invalid_argument("beta_max must be > beta_min");
    }
  }
  if (time_budget && time_budget->count() < 0) {
    throw std::invalid_argument("time_budget must be non-negative");
  }
}

namespace {

class ExactSolver final : public SubproblemSolver {
 public:
  SolveResult solve(const Instance& instance, const SolverConfig&) const override {
    return solve_exact(instance);
  }
  std::string id() const override { return "exact"; }
};

class GreedySolver final : public SubproblemSolver {
 public:
  SolveResult solve(const Instance& instance, const SolverConfig&) const override {
    return solve_greedy(instance);
  }
  std::string id() const override { return "greedy"; }
};

class LdmSolver final : public SubproblemSolver {
 public:
  SolveResult solve(const Instance& instance, const SolverConfig&) const override {
    return solve_ldm(instance);
  }
  std::string id() const override { return "ldm"; }
};

class SaSolver final : public SubproblemSolver {
 public:
  SolveResult solve(const Instance& instance, const SolverConfig& config) const override {
    return solve_sa(instance, config);
  }
  std::string id() const override { return "sa"; }
};

class RemoteSolver final : public SubproblemSolver {
 public:
  explicit RemoteSolver(std::string endpoint) : endpoint_(std::move(endpoint)) {}
  SolveResult solve(const Instance& instance, const SolverConfig& config) const override {
    return solve_remote(endpoint_, instance, config);
  }
  std::string id() const override { return "remote"; }

 private:
  std::string endpoint_;
};

}  // namespace

std::unique_ptr<SubproblemSolver> make_solver(const std::string& id,
                                              const std::string& endpoint) {
  if (id == "exact") return std::make_unique<ExactSolver>();
  if (id == "greedy") return std::make_unique<GreedySolver>();
  if (id == "ldm") return std::make_unique<LdmSolver>();
  if (id == "sa") return std::make_unique<SaSolver>();
  if (id == "remote") {
    if (endpoint.empty()) throw std::invalid_argument("remote solver needs an endpoint URL");
    return std::make_unique<RemoteSolver>(endpoint);
  }
  throw std::invalid_argument("unknown solver id: '" + id +
                              "' (known: exact, greedy, ldm, sa, remote)");
}

}  // namespace npart
