#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "npart/core.hpp"

namespace npart {

/// Dense symmetric QUBO matrix with 64-bit integer entries.
/// For a matrix built from an NPP instance (weights w, total c):
///   Q_ij = w_i * w_j   (i != j)
///   Q_ii = w_i * (w_i - c)
/// so that x'Qx = s * (s - c) with s the selected-weight sum.
class QuboMatrix {
 public:
  /// entries is row-major n*n and must be symmetric.
  QuboMatrix(int n, std::vector<std::int64_t> entries, std::int64_t c);

  int n() const { return n_; }
  std::int64_t at(int i, int j) const {
    return entries_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
                    static_cast<std::size_t>(j)];
  }
  const std::vector<std::int64_t>& entries() const { return entries_; }

  /// Total weight of the source instance; 0 for matrices parsed from JSON,
  /// where the source total is not part of the wire format.
  std::int64_t c() const { return c_; }

  /// Wire format: {"n": int, "terms": [[i, j, value], ...]} with the upper
  /// triangle including the diagonal, row-major order.
  nlohmann::json to_json() const;

  /// Parses the wire format. Terms may be sparse (missing entries are 0)
  /// but indices must satisfy 0 <= i <= j < n with no duplicates, and the
  /// coefficient mass must be small enough that every objective value and
  /// flip delta fits signed 64-bit. Violations throw ProtocolError.
  static QuboMatrix from_json(const nlohmann::json& j);

 private:
  int n_;
  std::vector<std::int64_t> entries_;
  std::int64_t c_;
};

/// The NPP's QUBO: Q_ij = w_i w_j off the diagonal, Q_ii = w_i (w_i - c).
QuboMatrix build_npp_qubo(const Instance& instance);

/// x'Qx in exact integer arithmetic.
std::int64_t qubo_energy(const QuboMatrix& q, const Partition& x);

/// Checks the squared-energy identity linking the two objectives:
///   energy(instance, x)^2 = c^2 + 4 * qubo_energy(build_npp_qubo(instance), x)
/// as exact integers. The factor 4 is required for consistency with the
/// matrix entries above; it does not move the argmin.
bool verify_hamiltonian_identity(const Instance& instance, const Partition& x);

}  // namespace npart
