#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace npart {

/// Absolute difference of the two side sums. Always non-negative and has
/// the same parity as the instance total.
using Energy = std::int64_t;

/// Largest allowed Σw: the NPP's QUBO squares the total, so (Σw)² must
/// stay inside signed 64-bit range.
inline constexpr std::int64_t kMaxTotal = 3037000499;

/// A number-partitioning instance: a fixed multiset of integer weights.
/// Elements are identified by index, so duplicate values stay distinct.
/// Immutable after construction; safe to share between threads.
class Instance {
 public:
  /// Requires n >= 1, every weight >= 1, and Σw <= kMaxTotal.
  explicit Instance(std::vector<std::int64_t> weights);

  /// Same bounds but weights >= 0. Difference instances built from
  /// sub-problem energies may legitimately contain zeros.
  static Instance allowing_zeros(std::vector<std::int64_t> weights);

  int n() const { return static_cast<int>(weights_.size()); }
  std::int64_t weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }
  const std::vector<std::int64_t>& weights() const { return weights_; }
  std::int64_t total() const { return total_; }

 private:
  Instance(std::vector<std::int64_t> weights, std::int64_t min_weight);

  std::vector<std::int64_t> weights_;
  std::int64_t total_ = 0;
};

/// Side labels for one instance: side(i) == 1 puts element i in subset A,
/// side(i) == 0 in the complement. Length must equal the instance's n,
/// checked by every operation that pairs the two.
class Partition {
 public:
  /// Labels must be 0 or 1 and non-empty.
  explicit Partition(std::vector<std::uint8_t> side);

  /// Builds the n-element partition whose side-1 set is exactly `side_one`.
  static Partition from_indices(int n, const std::vector<int>& side_one);

  int n() const { return static_cast<int>(side_.size()); }
  bool on_side_one(int i) const { return side_[static_cast<std::size_t>(i)] != 0; }
  const std::vector<std::uint8_t>& side() const { return side_; }
  std::vector<int> side_one_indices() const;

  bool operator==(const Partition&) const = default;

 private:
  std::vector<std::uint8_t> side_;
};

/// |Σ_A w − Σ_{W∖A} w| in exact integer arithmetic.
Energy energy(const Instance& instance, const Partition& partition);

/// A partition is perfect iff its energy is 0 or 1.
inline bool is_perfect(Energy e) { return e == 0 || e == 1; }

/// Flips every side label; energy is unchanged.
Partition complement(const Partition& partition);

// Instance file format: plain text, one decimal weight per line, `#` starts
// a comment. An empty file (no weights) is invalid. Content problems throw
// IoError with the offending line number.
Instance parse_instance(std::istream& in, const std::string& origin = "<stream>");
Instance read_instance(const std::string& path);
void write_instance(const Instance& instance, const std::string& path);

}  // namespace npart
