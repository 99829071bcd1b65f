#pragma once

#include <memory>
#include <string>

#include "npart/solvers.hpp"

namespace npart {

/// Loopback sampler speaking the remote protocol, backed by anneal_qubo so
/// a round trip through it reproduces a direct solve_sa bit for bit.
/// Sweep count and beta schedule come from the config given here; each
/// request supplies its own seed and num_reads. POST endpoint: /sample.
class SamplerServer {
 public:
  explicit SamplerServer(SolverConfig defaults = {});
  ~SamplerServer();
  SamplerServer(const SamplerServer&) = delete;
  SamplerServer& operator=(const SamplerServer&) = delete;

  /// Binds and serves on a background thread. port 0 picks a free port.
  /// Returns the bound port, or -1 when binding fails.
  int start(const std::string& host, int port);

  /// Serves on the calling thread until stop(); false when binding fails.
  bool run(const std::string& host, int port);

  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace npart
