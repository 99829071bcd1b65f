#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <chrono>
#include <cstdint>
#include <optional>

#include "json.hpp"
#include "npart/analysis.hpp"
#include "npart/bench.hpp"
#include "npart/core.hpp"
#include "npart/decompose.hpp"
#include "npart/errors.hpp"
#include "npart/merge.hpp"
#include "npart/qubo.hpp"
#include "npart/solvers.hpp"

namespace py = pybind11;

namespace {

py::object to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

npart::SolverConfig make_config(std::uint64_t seed, int num_reads, int num_sweeps,
                                std::optional<double> beta_min, std::optional<double> beta_max,
                                std::optional<std::int64_t> time_budget_ms) {
  npart::SolverConfig config;
  config.seed = seed;
  config.num_reads = num_reads;
  config.num_sweeps = num_sweeps;
  config.beta_schedule.beta_min = beta_min;
  config.beta_schedule.beta_max = beta_max;
  if (time_budget_ms) config.time_budget = std::chrono::milliseconds(*time_budget_ms);
  return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Number partitioning solvers with a divide-and-merge pipeline";

  py::register_exception<npart::CapabilityError>(m, "CapabilityError", PyExc_RuntimeError);
  py::register_exception<npart::SolveError>(m, "SolveError", PyExc_RuntimeError);
  py::register_exception<npart::IoError>(m, "IoError", PyExc_RuntimeError);
  py::register_exception<npart::ProtocolError>(m, "ProtocolError", PyExc_RuntimeError);
  py::register_exception<npart::NetworkError>(m, "NetworkError", PyExc_RuntimeError);

  py::class_<npart::Instance>(m, "Instance")
      .def(py::init<std::vector<std::int64_t>>(), py::arg("weights"))
      .def_static("allowing_zeros", &npart::Instance::allowing_zeros, py::arg("weights"))
      .def_property_readonly("n", &npart::Instance::n)
      .def_property_readonly("total", &npart::Instance::total)
      .def_property_readonly("weights",
                             [](const npart::Instance& self) { return self.weights(); })
      .def("__len__", &npart::Instance::n)
      .def("__repr__", [](const npart::Instance& self) {
        return "Instance(n=" + std::to_string(self.n()) +
               ", total=" + std::to_string(self.total()) + ")";
      });

  py::class_<npart::Partition>(m, "Partition")
      .def(py::init<std::vector<std::uint8_t>>(), py::arg("side"))
      .def_static("from_indices", &npart::Partition::from_indices, py::arg("n"),
                  py::arg("side_one"))
      .def_property_readonly("side",
                             [](const npart::Partition& self) { return self.side(); })
      .def("side_one_indices", &npart::Partition::side_one_indices)
      .def("__len__", &npart::Partition::n)
      .def("__eq__", [](const npart::Partition& a, const npart::Partition& b) { return a == b; });

  m.def("energy", &npart::energy, py::arg("instance"), py::arg("partition"));
  m.def("is_perfect", &npart::is_perfect, py::arg("energy"));
  m.def("complement", &npart::complement, py::arg("partition"));
  m.def("read_instance", &npart::read_instance, py::arg("path"));
  m.def("write_instance", &npart::write_instance, py::arg("instance"), py::arg("path"));

  py::class_<npart::QuboMatrix>(m, "QuboMatrix")
      .def_property_readonly("n", &npart::QuboMatrix::n)
      .def_property_readonly("c", &npart::QuboMatrix::c)
      .def("at", &npart::QuboMatrix::at, py::arg("i"), py::arg("j"))
      .def("to_json", [](const npart::QuboMatrix& self) { return to_py(self.to_json()); });
  m.def("build_npp_qubo", &npart::build_npp_qubo, py::arg("instance"));
  m.def("qubo_energy", &npart::qubo_energy, py::arg("qubo"), py::arg("x"));
  m.def("verify_hamiltonian_identity", &npart::verify_hamiltonian_identity, py::arg("instance"),
        py::arg("x"));

  m.def("solve_exact",
        [](const npart::Instance& instance) { return to_py(npart::solve_exact(instance).to_json()); },
        py::arg("instance"));
  m.def("solve_greedy",
        [](const npart::Instance& instance) { return to_py(npart::solve_greedy(instance).to_json()); },
        py::arg("instance"));
  m.def("solve_ldm",
        [](const npart::Instance& instance) { return to_py(npart::solve_ldm(instance).to_json()); },
        py::arg("instance"));
  m.def(
      "solve_sa",
      [](const npart::Instance& instance, std::uint64_t seed, int num_reads, int num_sweeps,
         std::optional<double> beta_min, std::optional<double> beta_max,
         std::optional<std::int64_t> time_budget_ms) {
        const auto config =
            make_config(seed, num_reads, num_sweeps, beta_min, beta_max, time_budget_ms);
        return to_py(npart::solve_sa(instance, config).to_json());
      },
      py::arg("instance"), py::arg("seed") = 0, py::arg("num_reads") = npart::kDefaultNumReads,
      py::arg("num_sweeps") = npart::kDefaultNumSweeps, py::arg("beta_min") = py::none(),
      py::arg("beta_max") = py::none(), py::arg("time_budget_ms") = py::none());
  m.def(
      "solve_remote",
      [](const std::string& endpoint, const npart::Instance& instance, std::uint64_t seed,
         int num_reads) {
        auto config = make_config(seed, num_reads, npart::kDefaultNumSweeps, std::nullopt,
                                  std::nullopt, std::nullopt);
        return to_py(npart::solve_remote(endpoint, instance, config).to_json());
      },
      py::arg("endpoint"), py::arg("instance"), py::arg("seed") = 0,
      py::arg("num_reads") = npart::kDefaultNumReads);

  m.def("balanced_random_vector",
        [](int n, int m_subs, std::uint64_t seed) {
          return npart::balanced_random_vector(n, m_subs, seed).labels();
        },
        py::arg("n"), py::arg("m"), py::arg("seed"));
  m.def(
      "run_pipeline",
      [](const npart::Instance& instance, std::optional<int> m_subs, std::optional<int> sub_size,
         std::optional<std::vector<int>> vector, const std::string& sub_solver,
         const std::string& aux_solver, const std::string& endpoint, std::uint64_t seed,
         int num_reads, int num_sweeps, std::optional<double> beta_min,
         std::optional<double> beta_max, int workers) {
        npart::PipelineOptions options;
        options.m = m_subs;
        options.sub_size = sub_size;
        if (vector) {
          options.vector = npart::DecomposingVector::from_labels(*vector);
          if (m_subs && *m_subs != options.vector->m()) {
            throw std::invalid_argument("m does not match the decomposing vector's group count");
          }
          options.m.reset();
        }
        options.config =
            make_config(seed, num_reads, num_sweeps, beta_min, beta_max, std::nullopt);
        options.workers = workers;
        const auto sub = npart::make_solver(sub_solver, endpoint);
        const auto aux = npart::make_solver(aux_solver, endpoint);
        return to_py(npart::run_pipeline(instance, *sub, *aux, options).to_json());
      },
      py::arg("instance"), py::arg("m") = py::none(), py::arg("sub_size") = py::none(),
      py::arg("vector") = py::none(), py::arg("sub_solver") = "sa", py::arg("aux_solver") = "sa",
      py::arg("endpoint") = "", py::arg("seed") = 0,
      py::arg("num_reads") = npart::kDefaultNumReads,
      py::arg("num_sweeps") = npart::kDefaultNumSweeps, py::arg("beta_min") = py::none(),
      py::arg("beta_max") = py::none(), py::arg("workers") = 0);

  m.def("expected_perfect_count",
        [](int n, std::int64_t lambda) {
          const auto estimate = npart::expected_perfect_count(n, lambda);
          py::dict out;
          out["log2"] = estimate.log2_value;
          out["value"] = estimate.value ? py::cast(*estimate.value) : py::none();
          return out;
        },
        py::arg("n"), py::arg("lambda_max"));
  m.def("m_for_target", &npart::m_for_target, py::arg("n"), py::arg("lambda_max"),
        py::arg("target"));
  m.def("max_m_bound", &npart::max_m_bound, py::arg("n"), py::arg("lambda_max"));
  m.def("pathological_instance", &npart::pathological_instance, py::arg("n"));
  m.def("count_perfect_assignments", &npart::count_perfect_assignments, py::arg("instance"));

  m.def("generate_instance", &npart::generate_instance, py::arg("n"), py::arg("seed"),
        py::arg("lo"), py::arg("hi"), py::arg("even_sum") = false);
  m.def(
      "run_bench",
      [](const py::object& config_obj, int workers) {
        const auto dumped =
            py::module_::import("json").attr("dumps")(config_obj).cast<std::string>();
        const auto config = npart::ExperimentConfig::from_json(nlohmann::json::parse(dumped));
        const auto records = npart::run_experiment(config, workers);
        py::dict out;
        out["manifest"] = to_py(npart::manifest_json(config));
        out["csv"] = npart::to_csv(records);
        out["jsonl"] = npart::to_jsonl(records);
        out["summary"] = to_py(npart::summarize(records));
        return out;
      },
      py::arg("config"), py::arg("workers") = 0);
}
