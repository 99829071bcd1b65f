#include "npart/qubo.hpp"

#include <stdexcept>

#include "npart/errors.hpp"

namespace npart {
namespace {

// Cap on the summed coefficient magnitude of foreign matrices. Any state's
// objective is bounded by this sum and any single-flip delta by twice it,
// so staying under 2^61 keeps objective + delta in exact 64-bit arithmetic.
constexpr std::int64_t kMaxCoefficientMass = std::int64_t{1} << 61;

}  // namespace

QuboMatrix::QuboMatrix(int n, std::vector<std::int64_t> entries, std::int64_t c)
    : n_(n), entries_(std::move(entries)), c_(c) {
  if (n_ < 1) throw std::invalid_argument("QUBO dimension must be >= 1");
  const auto expected = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
  if (entries_.size() != expected) {
    throw std::invalid_argument("QUBO entries must be a dense n*n block");
  }
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      if (at(i, j) != at(j, i)) throw std::invalid_argument("QUBO matrix must be symmetric");
    }
  }
}

nlohmann::json QuboMatrix::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) {
      terms.push_back({i, j, at(i, j)});
    }
  }
  return {{"n", n_}, {"terms", std::move(terms)}};
}

QuboMatrix QuboMatrix::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("terms")) {
    throw ProtocolError("qubo payload must be an object with 'n' and 'terms'");
  }
  if (!j["n"].is_number_integer()) throw ProtocolError("qubo 'n' must be an integer");
  const std::int64_t n_raw = j["n"].get<std::int64_t>();
  if (n_raw < 1 || n_raw > 100000) {
    throw ProtocolError("qubo 'n' out of range: " + std::to_string(n_raw));
  }
  const int n = static_cast<int>(n_raw);
  if (!j["terms"].is_array()) throw ProtocolError("qubo 'terms' must be an array");

  std::vector<std::int64_t> entries(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  std::vector<std::uint8_t> seen(entries.size(), 0);
  unsigned __int128 mass = 0;
  for (const auto& term : j["terms"]) {
    if (!term.is_array() || term.size() != 3 || !term[0].is_number_integer() ||
        !term[1].is_number_integer() || !term[2].is_number_integer()) {
      throw ProtocolError("qubo term must be [i, j, integer value]");
    }
    const std::int64_t i = term[0].get<std::int64_t>();
    const std::int64_t jj = term[1].get<std::int64_t>();
    const std::int64_t value = term[2].get<std::int64_t>();
    if (i < 0 || jj < i || jj >= n) {
      throw ProtocolError("qubo term index out of range: [" + std::to_string(i) + ", " +
                          std::to_string(jj) + "]");
    }
    const auto upper = static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                       static_cast<std::size_t>(jj);
    if (seen[upper]) {
      throw ProtocolError("duplicate qubo term at [" + std::to_string(i) + ", " +
                          std::to_string(jj) + "]");
    }
    seen[upper] = 1;
    entries[upper] = value;
    entries[static_cast<std::size_t>(jj) * static_cast<std::size_t>(n) +
            static_cast<std::size_t>(i)] = value;
    const __int128 wide = value;
    mass += static_cast<unsigned __int128>(wide < 0 ? -wide : wide);
    if (mass > static_cast<unsigned __int128>(kMaxCoefficientMass)) {
      throw ProtocolError("qubo coefficient mass exceeds 64-bit safe range");
    }
  }
  return QuboMatrix(n, std::move(entries), 0);
}

QuboMatrix build_npp_qubo(const Instance& instance) {
  const int n = instance.n();
  const std::int64_t c = instance.total();
  std::vector<std::int64_t> entries(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const std::int64_t w = instance.weight(i);
    entries[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
            static_cast<std::size_t>(i)] = w * (w - c);
    for (int j = i + 1; j < n; ++j) {
      const std::int64_t value = w * instance.weight(j);
      entries[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
              static_cast<std::size_t>(j)] = value;
      entries[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) +
              static_cast<std::size_t>(i)] = value;
    }
  }
  return QuboMatrix(n, std::move(entries), c);
}

std::int64_t qubo_energy(const QuboMatrix& q, const Partition& x) {
  if (q.n() != x.n()) {
    throw std::invalid_argument("partition has " + std::to_string(x.n()) +
                                " labels, QUBO has dimension " + std::to_string(q.n()));
  }
  const std::vector<int> selected = x.side_one_indices();
  __int128 acc = 0;
  for (std::size_t a = 0; a < selected.size(); ++a) {
    acc += q.at(selected[a], selected[a]);
    for (std::size_t b = a + 1; b < selected.size(); ++b) {
      acc += 2 * static_cast<__int128>(q.at(selected[a], selected[b]));
    }
  }
  return static_cast<std::int64_t>(acc);
}

bool verify_hamiltonian_identity(const Instance& instance, const Partition& x) {
  const Energy e = energy(instance, x);
  const __int128 lhs = static_cast<__int128>(e) * e;
  const __int128 c = instance.total();
  const __int128 rhs = c * c + 4 * static_cast<__int128>(qubo_energy(build_npp_qubo(instance), x));
  return lhs == rhs;
}

}  // namespace npart
