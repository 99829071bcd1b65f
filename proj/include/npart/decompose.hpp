#pragma once

#include <cstdint>
#include <vector>

#include "npart/core.hpp"

namespace npart {

/// Assignment of each element to one of m sub-problems. Labels are 1-based
/// like the sub-problem indices they name.
class DecomposingVector {
 public:
  /// Requires every label in [1, m], every k in [1, m] used at least once,
  /// and m <= n.
  DecomposingVector(std::vector<int> labels, int m);

  /// Derives m as the largest label, then validates as above.
  static DecomposingVector from_labels(std::vector<int> labels);

  int n() const { return static_cast<int>(labels_.size()); }
  int m() const { return m_; }
  int label(int i) const { return labels_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& labels() const { return labels_; }

 private:
  std::vector<int> labels_;
  int m_;
};

/// Seeded uniform shuffle of 0..n-1 dealt round-robin into m groups, so
/// group sizes differ by at most one. Deterministic per seed.
DecomposingVector balanced_random_vector(int n, int m, std::uint64_t seed);

/// Sub-instances in label order plus, for each, the original indices of its
/// elements (ascending). Flattening through index_maps reproduces the input.
struct Decomposition {
  std::vector<Instance> subs;
  std::vector<std::vector<int>> index_maps;
};

Decomposition decompose(const Instance& instance, const DecomposingVector& j);

}  // namespace npart
