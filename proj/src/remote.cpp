#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include "httplib.h"
#include "json.hpp"
#include "npart/errors.hpp"
#include "npart/solvers.hpp"
#include "timing.hpp"

namespace npart {
namespace {

// "http://host:port/path" -> ("http://host:port", "/path")
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  const auto scheme = endpoint.find("://");
  if (scheme == std::string::npos) {
    throw std::invalid_argument("endpoint must look like http://host:port/path, got '" +
                                endpoint + "'");
  }
  const auto slash = endpoint.find('/', scheme + 3);
  if (slash == std::string::npos) return {endpoint, "/"};
  return {endpoint.substr(0, slash), endpoint.substr(slash)};
}

}  // namespace

SolveResult solve_remote(const std::string& endpoint, const Instance& instance,
                         const SolverConfig& config) {
  config.validate();
  const auto start = detail::Clock::now();
  const int n = instance.n();
  const QuboMatrix q = build_npp_qubo(instance);

  const nlohmann::json request = {
      {"qubo", q.to_json()}, {"num_reads", config.num_reads}, {"seed", config.seed}};

  const auto [base, path] = split_endpoint(endpoint);
  httplib::Client client(base);
  client.set_connection_timeout(10, 0);
  client.set_read_timeout(600, 0);

  const auto sent = detail::Clock::now();
  const httplib::Result result = client.Post(path, request.dump(), "application/json");
  if (!result) {
    throw NetworkError("no response from " + endpoint + ": " + httplib::to_string(result.error()));
  }
  const std::int64_t round_trip_us = detail::elapsed_us(sent);
  if (result->status != 200) {
    throw ProtocolError("sampler returned HTTP " + std::to_string(result->status) + ": " +
                        result->body.substr(0, 200));
  }

  const nlohmann::json body = nlohmann::json::parse(result->body, nullptr, false);
  if (body.is_discarded() || !body.is_object() || !body.contains("samples") ||
      !body["samples"].is_array()) {
    throw ProtocolError("sampler response is not a JSON object with a 'samples' array");
  }
  const auto& samples = body["samples"];
  if (samples.empty()) throw SolveError("sampler returned no samples");

  // Trust nothing: each sample's objective is recomputed locally and the
  // sample dropped on mismatch.
  int rejected = 0;
  std::int64_t best_objective = std::numeric_limits<std::int64_t>::max();
  std::vector<std::uint8_t> best_x;
  for (const auto& sample : samples) {
    if (!sample.is_object() || !sample.contains("x") || !sample["x"].is_array() ||
        !sample.contains("energy") || !sample["energy"].is_number_integer()) {
      throw ProtocolError("sample must be {\"x\": [0/1,...], \"energy\": integer}");
    }
    const auto& bits = sample["x"];
    if (static_cast<int>(bits.size()) != n) {
      throw ProtocolError("sample x has length " + std::to_string(bits.size()) +
                          ", expected " + std::to_string(n));
    }
    std::vector<std::uint8_t> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      if (!bits[static_cast<std::size_t>(i)].is_number_integer()) {
        throw ProtocolError("sample x entries must be integers");
      }
      const std::int64_t bit = bits[static_cast<std::size_t>(i)].get<std::int64_t>();
      if (bit != 0 && bit != 1) {
        throw ProtocolError("sample x entries must be 0 or 1, got " + std::to_string(bit));
      }
      x[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(bit);
    }
    const std::int64_t claimed = sample["energy"].get<std::int64_t>();
    if (qubo_energy(q, Partition(x)) != claimed) {
      ++rejected;
      continue;
    }
    if (claimed < best_objective) {
      best_objective = claimed;
      best_x = std::move(x);
    }
  }
  if (best_x.empty()) {
    throw SolveError("all " + std::to_string(rejected) +
                     " samples failed local energy validation");
  }

  std::int64_t backend_us = round_trip_us;
  if (body.contains("sampling_time_us")) {
    if (!body["sampling_time_us"].is_number_integer() ||
        body["sampling_time_us"].get<std::int64_t>() < 0) {
      throw ProtocolError("sampling_time_us must be a non-negative integer");
    }
    backend_us = body["sampling_time_us"].get<std::int64_t>();
  }

  Partition partition(std::move(best_x));
  const Energy e = energy(instance, partition);
  return SolveResult{std::move(partition),
                     e,
                     "remote",
                     static_cast<int>(samples.size()),
                     backend_us,
                     detail::elapsed_us(start),
                     static_cast<std::int64_t>(config.num_reads) *
                         (static_cast<std::int64_t>(n) * n +
                          static_cast<std::int64_t>(kDefaultNumSweeps) * n)};
}

}  // namespace npart
