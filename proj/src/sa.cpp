#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "npart/rng.hpp"
#include "npart/solvers.hpp"
#include "timing.hpp"

namespace npart {

std::pair<double, double> resolve_beta_range(const QuboMatrix& q, const SolverConfig& config) {
  if (config.beta_schedule.beta_min) {
    return {*config.beta_schedule.beta_min, *config.beta_schedule.beta_max};
  }

  // Derived range. Hot end: the worst possible single-flip increase is
  // accepted with probability 1/2, so the walk starts effectively free.
  // Cold end: the smallest nonzero coefficient is the scale of the last
  // useful refinement moves; freeze it down to acceptance 1/100.
  const int n = q.n();
  std::int64_t max_row = 0;
  std::int64_t min_entry = std::numeric_limits<std::int64_t>::max();
  for (int i = 0; i < n; ++i) {
    std::int64_t row = 0;
    for (int j = 0; j < n; ++j) {
      const std::int64_t magnitude = q.at(i, j) < 0 ? -q.at(i, j) : q.at(i, j);
      row += j == i ? magnitude : 2 * magnitude;
      if (magnitude > 0 && magnitude < min_entry) min_entry = magnitude;
    }
    if (row > max_row) max_row = row;
  }
  if (max_row == 0) return {1.0, 2.0};  // all-zero matrix; any schedule is equivalent

  const double beta_hot = std::log(2.0) / static_cast<double>(max_row);
  double beta_cold = std::log(100.0) / static_cast<double>(min_entry);
  if (beta_cold <= beta_hot) beta_cold = beta_hot * 100.0;
  return {beta_hot, beta_cold};
}

AnnealOutput anneal_qubo(const QuboMatrix& q, const SolverConfig& config) {
  config.validate();
  const auto start = detail::Clock::now();
  const int n = q.n();
  const auto [beta_lo, beta_hi] = resolve_beta_range(q, config);

  std::vector<double> betas(static_cast<std::size_t>(config.num_sweeps), beta_lo);
  for (int s = 1; s < config.num_sweeps; ++s) {
    const double frac = static_cast<double>(s) / static_cast<double>(config.num_sweeps - 1);
    betas[static_cast<std::size_t>(s)] = beta_lo * std::pow(beta_hi / beta_lo, frac);
  }

  AnnealOutput out;
  out.samples.reserve(static_cast<std::size_t>(config.num_reads));
  std::vector<std::uint8_t> x(static_cast<std::size_t>(n));
  std::vector<std::int64_t> rho(static_cast<std::size_t>(n));  // off-diagonal row sums
  std::vector<int> order(static_cast<std::size_t>(n));

  for (int read = 0; read < config.num_reads; ++read) {
    if (read > 0 && config.time_budget &&
        detail::elapsed_us(start) >= config.time_budget->count() * 1000) {
      break;
    }
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(read)));

    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = rng.bit() ? 1 : 0;
    std::int64_t current = 0;
    for (int i = 0; i < n; ++i) {
      std::int64_t sum = 0;
      for (int j = 0; j < n; ++j) {
        if (j != i && x[static_cast<std::size_t>(j)]) sum += q.at(i, j);
      }
      rho[static_cast<std::size_t>(i)] = sum;
      if (x[static_cast<std::size_t>(i)]) current += q.at(i, i) + sum;
    }

    std::vector<std::uint8_t> best_x = x;
    std::int64_t best = current;
    std::iota(order.begin(), order.end(), 0);

    for (int sweep = 0; sweep < config.num_sweeps; ++sweep) {
      const double beta = betas[static_cast<std::size_t>(sweep)];
      rng.shuffle(order);
      for (const int i : order) {
        const auto ui = static_cast<std::size_t>(i);
        const std::int64_t base = q.at(i, i) + 2 * rho[ui];
        const std::int64_t delta = x[ui] ? -base : base;
        // The uniform draw happens only for uphill moves; this draw order
        // is part of the determinism contract.
        if (delta > 0 && rng.unit() >= std::exp(-beta * static_cast<double>(delta))) {
          continue;
        }
        const std::int64_t sign = x[ui] ? -1 : 1;
        x[ui] ^= 1;
        current += delta;
        for (int j = 0; j < n; ++j) {
          if (j != i) rho[static_cast<std::size_t>(j)] += sign * q.at(i, j);
        }
        if (current < best) {
          best = current;
          best_x = x;
        }
      }
    }
    out.samples.push_back(AnnealSample{best_x, best});
    out.ops += static_cast<std::int64_t>(n) * n +
               static_cast<std::int64_t>(config.num_sweeps) * n;
  }
  out.backend_us = detail::elapsed_us(start);
  return out;
}

SolveResult solve_sa(const Instance& instance, const SolverConfig& config) {
  const auto start = detail::Clock::now();
  const QuboMatrix q = build_npp_qubo(instance);
  AnnealOutput out = anneal_qubo(q, config);

  std::size_t best = 0;
  for (std::size_t i = 1; i < out.samples.size(); ++i) {
    if (out.samples[i].objective < out.samples[best].objective) best = i;
  }
  Partition partition(std::move(out.samples[best].x));
  const Energy e = energy(instance, partition);
  return SolveResult{std::move(partition),
                     e,
                     "sa",
                     static_cast<int>(out.samples.size()),
                     out.backend_us,
                     detail::elapsed_us(start),
                     out.ops};
}

}  // namespace npart
