#include "npart/decompose.hpp"

#include <numeric>
#include <stdexcept>

#include "npart/rng.hpp"

namespace npart {

DecomposingVector::DecomposingVector(std::vector<int> labels, int m)
    : labels_(std::move(labels)), m_(m) {
  if (labels_.empty()) throw std::invalid_argument("decomposing vector must be non-empty");
  if (m_ < 1 || m_ > n()) {
    throw std::invalid_argument("m must be in [1, n]; got m = " + std::to_string(m_) +
                                ", n = " + std::to_string(n()));
  }
  std::vector<std::uint8_t> used(static_cast<std::size_t>(m_), 0);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const int k = labels_[i];
    if (k < 1 || k > m_) {
      throw std::invalid_argument("label at index " + std::to_string(i) + " is " +
                                  std::to_string(k) + ", outside [1, " + std::to_string(m_) +
                                  "]");
    }
    used[static_cast<std::size_t>(k - 1)] = 1;
  }
  for (int k = 1; k <= m_; ++k) {
    if (!used[static_cast<std::size_t>(k - 1)]) {
      throw std::invalid_argument("sub-problem " + std::to_string(k) +
                                  " would be empty; every k in [1, m] must occur");
    }
  }
}

DecomposingVector DecomposingVector::from_labels(std::vector<int> labels) {
  if (labels.empty()) throw std::invalid_argument("decomposing vector must be non-empty");
  int m = 0;
  for (const int k : labels) m = std::max(m, k);
  return DecomposingVector(std::move(labels), m);
}

DecomposingVector balanced_random_vector(int n, int m, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (m < 1 || m > n) {
    throw std::invalid_argument("m must be in [1, n]; got m = " + std::to_string(m) +
                                ", n = " + std::to_string(n));
  }
  std::vector<int> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), 0);
  Rng rng(seed);
  rng.shuffle(ids);

  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    labels[static_cast<std::size_t>(ids[static_cast<std::size_t>(t)])] = t % m + 1;
  }
  return DecomposingVector(std::move(labels), m);
}

Decomposition decompose(const Instance& instance, const DecomposingVector& j) {
  if (instance.n() != j.n()) {
    throw std::invalid_argument("decomposing vector has " + std::to_string(j.n()) +
                                " labels, instance has " + std::to_string(instance.n()));
  }
  std::vector<std::vector<std::int64_t>> weights(static_cast<std::size_t>(j.m()));
  std::vector<std::vector<int>> index_maps(static_cast<std::size_t>(j.m()));
  for (int i = 0; i < instance.n(); ++i) {
    const auto group = static_cast<std::size_t>(j.label(i) - 1);
    weights[group].push_back(instance.weight(i));
    index_maps[group].push_back(i);
  }

  Decomposition out;
  out.subs.reserve(weights.size());
  out.index_maps = std::move(index_maps);
  for (auto& group : weights) {
    out.subs.push_back(Instance::allowing_zeros(std::move(group)));
  }
  return out;
}

}  // namespace npart
