#include "npart/sampler_server.hpp"

#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "npart/errors.hpp"
#include "npart/qubo.hpp"

namespace npart {
namespace {

constexpr int kMaxRequestReads = 1000000;

void fail(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(nlohmann::json{{"error", message}}.dump(), "application/json");
}

}  // namespace

struct SamplerServer::Impl {
  explicit Impl(SolverConfig defaults) : defaults(std::move(defaults)) {}

  void handle(const httplib::Request& req, httplib::Response& res) {
    const nlohmann::json body = nlohmann::json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
      fail(res, 400, "request body must be a JSON object");
      return;
    }
    if (!body.contains("qubo") || !body.contains("num_reads") ||
        !body["num_reads"].is_number_integer()) {
      fail(res, 400, "request needs 'qubo' and integer 'num_reads'");
      return;
    }
    const std::int64_t num_reads = body["num_reads"].get<std::int64_t>();
    if (num_reads < 1 || num_reads > kMaxRequestReads) {
      fail(res, 400, "num_reads must be in [1, " + std::to_string(kMaxRequestReads) + "]");
      return;
    }
    std::uint64_t seed = 0;
    if (body.contains("seed")) {
      if (body["seed"].is_number_unsigned()) {
        seed = body["seed"].get<std::uint64_t>();
      } else if (body["seed"].is_number_integer() && body["seed"].get<std::int64_t>() >= 0) {
        seed = static_cast<std::uint64_t>(body["seed"].get<std::int64_t>());
      } else {
        fail(res, 400, "seed must be a non-negative integer");
        return;
      }
    }

    try {
      const QuboMatrix q = QuboMatrix::from_json(body["qubo"]);
      SolverConfig config = defaults;
      config.seed = seed;
      config.num_reads = static_cast<int>(num_reads);
      const AnnealOutput out = anneal_qubo(q, config);

      nlohmann::json samples = nlohmann::json::array();
      for (const AnnealSample& sample : out.samples) {
        nlohmann::json x = nlohmann::json::array();
        for (const std::uint8_t bit : sample.x) x.push_back(static_cast<int>(bit));
        samples.push_back({{"x", std::move(x)}, {"energy", sample.objective}});
      }
      const nlohmann::json reply = {{"samples", std::move(samples)},
                                    {"sampling_time_us", out.backend_us}};
      res.set_content(reply.dump(), "application/json");
    } catch (const ProtocolError& e) {
      fail(res, 400, e.what());
    } catch (const std::invalid_argument& e) {
      fail(res, 400, e.what());
    } catch (const std::exception& e) {
      fail(res, 500, e.what());
    }
  }

  SolverConfig defaults;
  httplib::Server server;
  std::thread thread;
};

SamplerServer::SamplerServer(SolverConfig defaults)
    : impl_(std::make_unique<Impl>(std::move(defaults))) {
  impl_->defaults.validate();
  // httplib's defaults include SO_REUSEPORT, which would let a second server
  // silently share a live port instead of failing to bind.
  impl_->server.set_socket_options([](int sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
  });
  impl_->server.Post("/sample", [impl = impl_.get()](const httplib::Request& req,
                                                     httplib::Response& res) {
    impl->handle(req, res);
  });
}

SamplerServer::~SamplerServer() { stop(); }

int SamplerServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) return -1;
  } else if (!impl_->server.bind_to_port(host, port)) {
    return -1;
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

bool SamplerServer::run(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

void SamplerServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace npart
