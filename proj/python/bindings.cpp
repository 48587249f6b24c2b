#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>

#include "osl/config.hpp"
#include "osl/io.hpp"
#include "osl/swarm.hpp"

namespace py = pybind11;
using namespace osl;

namespace {

RunConfig make_config(const std::string& text, const std::map<std::string, std::string>& overrides) {
  RunConfig c = parse_config(text);
  for (const auto& [k, v] : overrides) set_config_value(c, k, v);
  c.validate();
  return c;
}

py::dict run(const std::string& text, const std::map<std::string, std::string>& overrides,
             std::optional<std::uint64_t> seed) {
  RunConfig cfg = make_config(text, overrides);
  if (seed) cfg.swarm.seed = *seed;
  RunResult r;
  {
    py::gil_scoped_release release;
    r = run_episode(cfg, cfg.swarm.seed);
  }
  std::ostringstream csv;
  write_trajectory(csv, r, cfg);
  py::dict out;
  out["seed"] = r.seed;
  out["success"] = r.success;
  out["search_time"] = r.search_time;
  out["declaring_agent"] = r.declaring_agent;
  out["estimate_error"] = r.estimate_error;
  out["iterations"] = r.iterations;
  out["trajectory_csv"] = csv.str();
  out["summary_json"] = summary_json(aggregate({r}), cfg);
  return out;
}

std::string mc(const std::string& text, const std::map<std::string, std::string>& overrides,
               int runs, std::optional<std::uint64_t> seed, int workers) {
  RunConfig cfg = make_config(text, overrides);
  if (seed) cfg.swarm.seed = *seed;
  py::gil_scoped_release release;
  return summary_json(monte_carlo(cfg, runs, cfg.swarm.seed, workers), cfg);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-agent odor source localization core";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("default_config", [] { return serialize_config(RunConfig{}); },
        "Canonical key = value text of the default configuration.");
  m.def("canonical_config",
        [](const std::string& text, const std::map<std::string, std::string>& overrides) {
          return serialize_config(make_config(text, overrides));
        },
        py::arg("text") = "", py::arg("overrides") = std::map<std::string, std::string>{});
  m.def("config_hash",
        [](const std::string& text) { return config_hash(parse_config(text)); },
        py::arg("text") = "");
  m.def("variants", [] {
    std::vector<std::string> out;
    for (Variant v : all_variants()) out.emplace_back(to_string(v));
    return out;
  });

  m.def("encounter_rate",
        [](std::array<double, 3> sensor, const std::string& text) {
          const RunConfig c = parse_config(text);
          return mean_encounter_rate(Vec3(sensor[0], sensor[1], sensor[2]), c.plume, c.source);
        },
        py::arg("sensor"), py::arg("config") = "",
        "Mean encounter rate at `sensor` for the plume and source in `config`.");
  m.def("diffusion_ratio",
        [](const std::string& text) {
          const RunConfig c = parse_config(text);
          return diffusion_ratio(c.plume, c.source, c.volume, c.concentration_threshold());
        },
        py::arg("config") = "");
  m.def("max_step", &max_step, py::arg("zeta"), py::arg("ceiling") = 10);

  m.def("movement_energy",
        [](long hovers, double distance, long turns, double speed) {
          EnergyLedger l;
          l.record_flight(distance, speed);
          for (long i = 0; i < hovers; ++i) l.record_hover();
          for (long i = 0; i < turns; ++i) l.record_turn();
          const auto e = l.breakdown(EnergyParams{});
          return std::map<std::string, double>{
              {"E_f", e.flight}, {"E_h", e.hover}, {"E_b", e.turn}, {"E_M", e.movement()}};
        },
        py::arg("hovers"), py::arg("distance"), py::arg("turns"), py::arg("speed") = 1.0);

  m.def("payload_values",
        [](const std::string& algo, std::size_t particles) {
          const auto v = parse_variant(algo);
          if (!v) throw py::value_error("unknown algorithm " + algo);
          const auto p = payload_report(*v, particles);
          return std::pair<int, int>{p.nominal_values, p.actual_values};
        },
        py::arg("algo"), py::arg("particles") = 100);

  m.def("run", &run, py::arg("config") = "",
        py::arg("overrides") = std::map<std::string, std::string>{},
        py::arg("seed") = py::none(),
        "Run one episode; returns outcome fields plus the CSV and JSON outputs as text.");
  m.def("monte_carlo", &mc, py::arg("config") = "",
        py::arg("overrides") = std::map<std::string, std::string>{}, py::arg("runs") = 200,
        py::arg("seed") = py::none(), py::arg("workers") = 1,
        "Run a seeded batch; returns the summary JSON text.");
}
