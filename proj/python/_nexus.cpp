#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cli.hpp"
#include "nexus/coupling.hpp"
#include "nexus/gas.hpp"
#include "nexus/ingest.hpp"
#include "nexus/studies.hpp"

namespace py = pybind11;
using namespace nexus;

namespace {

py::dict violation_dict(const gas::PressureViolation& v) {
  py::dict d;
  d["node"] = v.node_id;
  d["kind"] = gas::to_string(v.kind);
  d["onset_s"] = v.onset;
  d["duration_s"] = v.duration;
  d["worst_bar"] = v.worst_pressure / 1e5;
  d["worst_time_s"] = v.worst_time;
  return d;
}

py::list violations(const std::vector<gas::PressureViolation>& vs) {
  py::list out;
  for (const auto& v : vs) out.append(violation_dict(v));
  return out;
}

py::dict day_dict(const gas::DayResult& day) {
  py::dict d;
  d["injected_kg"] = day.injected_kg;
  d["offtaken_kg"] = day.offtaken_kg;
  d["closure"] = day.closure;
  d["mass_balance_error_kg"] = day.mass_balance_error();
  std::vector<double> t, lp;
  for (const auto& r : day.linepack) {
    t.push_back(r.time);
    lp.push_back(r.total_kg);
  }
  d["time_s"] = t;
  d["linepack_kg"] = lp;
  d["violations"] = violations(day.violations);
  return d;
}

}  // namespace

PYBIND11_MODULE(_nexus, m) {
  m.doc() = "Coupled gas and electricity reliability studies.";

  py::class_<Finding>(m, "Finding")
      .def_readonly("category", &Finding::category)
      .def_readonly("element", &Finding::element)
      .def_readonly("message", &Finding::message)
      .def("__repr__", [](const Finding& f) { return "<Finding " + f.category + ":" + f.element + " " + f.message + ">"; });

  m.def("validate", [](const std::filesystem::path& dir) { return ingest::validate_scenario(dir).findings; },
        py::arg("scenario_dir"), "Findings for a bundle directory; empty when it is usable.");

  py::class_<ingest::LoadedScenario>(m, "Scenario")
      .def_property_readonly("horizon", [](const ingest::LoadedScenario& s) { return s.bundle.horizon; })
      .def_property_readonly("buses", [](const ingest::LoadedScenario& s) { return s.system->electric().buses.size(); })
      .def_property_readonly("lines", [](const ingest::LoadedScenario& s) { return s.system->electric().lines.size(); })
      .def_property_readonly("generators",
                             [](const ingest::LoadedScenario& s) { return s.system->electric().generators.size(); })
      .def_property_readonly("gas_nodes", [](const ingest::LoadedScenario& s) { return s.system->gas().nodes.size(); })
      .def_property_readonly("pipes", [](const ingest::LoadedScenario& s) { return s.system->gas().pipes.size(); })
      .def_property_readonly("compressors",
                             [](const ingest::LoadedScenario& s) { return s.system->gas().compressors.size(); });

  // Throws on a bundle that does not load; validate() reports instead.
  m.def("load_scenario", &ingest::load_scenario, py::arg("scenario_dir"));

  py::class_<studies::Contingency>(m, "Contingency")
      .def_readonly("id", &studies::Contingency::id)
      .def_property_readonly("kind", [](const studies::Contingency& c) { return studies::to_string(c.cls); })
      .def_readonly("element", &studies::Contingency::element)
      .def_readonly("capacity_lost", &studies::Contingency::capacity_lost)
      .def("__repr__", [](const studies::Contingency& c) { return "<Contingency " + c.id + ">"; });

  m.def("enumerate_contingencies",
        [](const ingest::LoadedScenario& s, double generator_cap_mw, double wind_cap_mw) {
          studies::ContingencyConfig cfg;
          cfg.generator_cap_mw = generator_cap_mw;
          cfg.wind_cap_mw = wind_cap_mw;
          return studies::enumerate_contingencies(*s.system, cfg);
        },
        py::arg("scenario"), py::arg("generator_cap_mw") = 3960.0, py::arg("wind_cap_mw") = 2000.0);

  m.def("gas_day",
        [](const ingest::LoadedScenario& s, double dt, double dx) {
          gas::SolverOptions opt;
          opt.dt = dt;
          opt.dx = dx;
          gas::DayResult day;
          {
            py::gil_scoped_release release;
            gas::Simulator sim(*s.system, opt);
            day = gas::simulate_day(sim, s.scenario.gas);
          }
          return day_dict(day);
        },
        py::arg("scenario"), py::arg("dt") = 60.0, py::arg("dx") = 5000.0,
        "Transient day on the bundle's own schedules, without plant off-takes.");

  m.def("adequacy",
        [](const ingest::LoadedScenario& s, std::optional<double> reserve_mw, double gap, double time_limit_s) {
          studies::AdequacyOptions opt;
          opt.reserve_mw = reserve_mw;
          opt.coupled.gap_target = gap;
          opt.coupled.time_limit_s = time_limit_s;
          studies::AdequacyReport r;
          {
            py::gil_scoped_release release;
            r = studies::run_adequacy(*s.system, s.scenario, opt);
          }
          py::dict shares;
          for (std::size_t c = 0; c < studies::kShareColumns; ++c)
            shares[studies::to_string(static_cast<studies::ShareColumn>(c))] = r.shares[c];
          py::dict d;
          d["shares"] = shares;
          d["shed_MWh"] = r.shed_mwh;
          d["wind_curtailed_GWh"] = r.wind_curtailed_gwh;
          d["solar_curtailed_GWh"] = r.solar_curtailed_gwh;
          d["linepack_swing_mcm"] = r.linepack_swing_mcm();
          d["gas_curtailed_kg"] = r.gas_curtailed_kg;
          d["adequacy_without_res"] = r.adequacy_without_res;
          d["iterations"] = r.solution.iterations;
          d["converged"] = r.solution.converged;
          d["termination"] = r.solution.termination;
          d["fuel_constraints"] = r.solution.constraints.size();
          d["violations"] = violations(r.violations);
          return d;
        },
        py::arg("scenario"), py::arg("reserve_mw") = py::none(), py::arg("gap") = 1e-3,
        py::arg("time_limit_s") = 300.0);

  m.def("run_cli",
        [](std::vector<std::string> args) {
          args.insert(args.begin(), "nexus");
          py::gil_scoped_release release;
          return cli::run_cli(args);
        },
        py::arg("args"), "Runs the nexus command line in-process and returns its exit code.");

  m.attr("EXIT_CLEAN") = cli::kExitClean;
  m.attr("EXIT_USAGE") = cli::kExitUsage;
  m.attr("EXIT_FINDINGS") = cli::kExitFindings;
  m.attr("EXIT_STUDY_FAILED") = cli::kExitStudyFailed;
}
