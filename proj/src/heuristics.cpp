#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

#include "npart/solvers.hpp"
#include "timing.hpp"

namespace npart {

SolveResult solve_greedy(const Instance& instance) {
  const auto start = detail::Clock::now();
  const int n = instance.n();

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return instance.weight(a) != instance.weight(b) ? instance.weight(a) > instance.weight(b)
                                                    : a < b;
  });

  std::vector<std::uint8_t> side(static_cast<std::size_t>(n), 0);
  std::int64_t sums[2] = {0, 0};
  for (int i : order) {
    const int target = sums[1] <= sums[0] ? 1 : 0;
    side[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(target);
    sums[target] += instance.weight(i);
  }
  const std::int64_t loop_us = detail::elapsed_us(start);

  Partition partition(std::move(side));
  const Energy e = energy(instance, partition);
  return SolveResult{std::move(partition), e,      "greedy", 1,
                     loop_us,              detail::elapsed_us(start), n};
}

namespace {

// One differencing-tree root: the running difference value, the smallest
// original index inside the tree (tie rule), and the element currently
// representing the tree's heavier side.
struct DiffNode {
  std::int64_t value;
  int tie_id;
  int anchor;
};

struct DiffNodeOrder {
  bool operator()(const DiffNode& a, const DiffNode& b) const {
    return a.value != b.value ? a.value < b.value : a.tie_id > b.tie_id;
  }
};

}  // namespace

SolveResult solve_ldm(const Instance& instance) {
  const auto start = detail::Clock::now();
  const int n = instance.n();

  std::priority_queue<DiffNode, std::vector<DiffNode>, DiffNodeOrder> heap;
  for (int i = 0; i < n; ++i) heap.push(DiffNode{instance.weight(i), i, i});

  // Each merge replaces the two largest values by their difference and
  // pins the two anchors to opposite sides of the final partition.
  std::vector<std::pair<int, int>> must_differ;
  must_differ.reserve(static_cast<std::size_t>(n));
  while (heap.size() > 1) {
    const DiffNode a = heap.top();
    heap.pop();
    const DiffNode b = heap.top();
    heap.pop();
    must_differ.emplace_back(a.anchor, b.anchor);
    heap.push(DiffNode{a.value - b.value, std::min(a.tie_id, b.tie_id), a.anchor});
  }
  const DiffNode root = heap.top();

  std::vector<std::vector<int>> adjacent(static_cast<std::size_t>(n));
  for (const auto& [u, v] : must_differ) {
    adjacent[static_cast<std::size_t>(u)].push_back(v);
    adjacent[static_cast<std::size_t>(v)].push_back(u);
  }
  std::vector<std::uint8_t> side(static_cast<std::size_t>(n), 0);
  std::vector<std::uint8_t> colored(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{root.anchor};
  side[static_cast<std::size_t>(root.anchor)] = 1;
  colored[static_cast<std::size_t>(root.anchor)] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adjacent[static_cast<std::size_t>(u)]) {
      if (colored[static_cast<std::size_t>(v)]) continue;
      colored[static_cast<std::size_t>(v)] = 1;
      side[static_cast<std::size_t>(v)] =
          static_cast<std::uint8_t>(1 - side[static_cast<std::size_t>(u)]);
      stack.push_back(v);
    }
  }
  const std::int64_t loop_us = detail::elapsed_us(start);

  Partition partition(std::move(side));
  const Energy e = energy(instance, partition);
  if (e != root.value) {
    throw std::logic_error("differencing-tree coloring is inconsistent with the final value");
  }
  return SolveResult{std::move(partition), e,      "ldm", 1,
                     loop_us,              detail::elapsed_us(start), n};
}

}  // namespace npart
