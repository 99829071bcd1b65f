#pragma once

#include <stdexcept>
#include <string>

namespace npart {

// Error taxonomy. Plain argument misuse (bad sizes, out-of-range
// parameters) throws std::invalid_argument and is not wrapped here.

/// The request is well-formed but exceeds what the chosen backend can
/// handle: instance too large for exact enumeration, QUBO coefficients
/// that would overflow 64-bit arithmetic, and similar hard limits.
class CapabilityError : public std::runtime_error {
 public:
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

/// The solver ran but produced no usable answer, e.g. a remote sampler
/// whose samples were all rejected during validation.
class SolveError : public std::runtime_error {
 public:
  explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

/// Local input/output failure: unreadable instance file, malformed
/// file contents, unwritable output path.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// The remote side violated the sampling protocol: non-200 status,
/// unparsable body, vectors of the wrong length.
class ProtocolError : public std::runtime_error {
 public:
  explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

/// Transport-level failure reaching a remote sampler (connection refused,
/// timeout). Transient by nature; callers may retry.
class NetworkError : public std::runtime_error {
 public:
  explicit NetworkError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace npart
