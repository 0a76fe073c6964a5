#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "nexus/error.hpp"
#include "nexus/ingest.hpp"
#include "nexus/report.hpp"
#include "nexus/studies.hpp"
#include "nexus/units.hpp"

#ifndef NEXUS_VERSION
#define NEXUS_VERSION "0.0.0"
#endif

namespace nexus::cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw IoError("sha256 unavailable");
  char buf[1 << 15];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

namespace {

struct RunConfig {
  std::string scenario;
  std::string out;
  // Unset solver options fall back to the study's defaults: adequacy uses a
  // gap and time limit, security the node-limited deterministic settings.
  std::optional<double> reserve_mw;
  std::optional<double> gap;
  std::optional<double> time_limit_s;
  std::optional<long> node_limit;
  double dt = 60.0;
  double dx = 10000.0;
  int iteration_cap = 10;
  double safety_factor = 1.1;
  int jobs = 1;
  unsigned long seed = 0;
  bool omit_timing = false;
  int pressure_stride_s = 3600;
  // security
  double generator_cap_mw = 3960.0;
  double wind_cap_mw = 2000.0;
  std::string contingency_file;
  // gas-sim
  bool with_dispatch = false;

  coupling::CoupledOptions solver_options(const std::string& study) const {
    auto opt = study == "security" ? studies::SecurityOptions::deterministic() : coupling::CoupledOptions{};
    if (gap) opt.gap_target = *gap;
    if (time_limit_s) opt.time_limit_s = *time_limit_s;
    if (node_limit) opt.node_limit = *node_limit;
    opt.iteration_cap = iteration_cap;
    opt.safety_factor = safety_factor;
    opt.gas.dt = dt;
    opt.gas.dx = dx;
    return opt;
  }

  json to_json(const std::string& study) const {
    json j = {{"study", study},         {"scenario", scenario},       {"dt_s", dt},
              {"dx_m", dx},             {"seed", seed}};
    if (study == "adequacy" || study == "security") {
      const auto opt = solver_options(study);
      j["gap_target"] = opt.gap_target;
      j["time_limit_s"] = opt.time_limit_s;
      j["node_limit"] = opt.node_limit;
      j["iteration_cap"] = iteration_cap;
      j["safety_factor"] = safety_factor;
    }
    if (study == "adequacy" && reserve_mw) j["reserve_MW"] = *reserve_mw;
    if (study == "security") {
      j["jobs"] = jobs;
      j["generator_cap_MW"] = generator_cap_mw;
      j["wind_cap_MW"] = wind_cap_mw;
      if (!contingency_file.empty()) j["contingencies"] = contingency_file;
    }
    if (study == "gas-sim") j["with_dispatch"] = with_dispatch;
    return j;
  }
};

bool verbose() {
  const char* v = std::getenv("NEXUS_VERBOSE");
  return v != nullptr && *v != '\0' && std::string(v) != "0";
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void print_findings(const ValidationReport& rep, std::ostream& os) {
  for (const auto& f : rep.findings) {
    os << f.category;
    if (!f.element.empty()) os << ' ' << f.element;
    os << ": " << f.message << '\n';
  }
}

// Files written so far, in order, for the manifest.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& text) {
    report::write_file(dir_ / name, text);
    names_.push_back(name);
  }
  template <typename Fn>
  void stream(const std::string& name, Fn&& fn) {
    std::ostringstream os;
    fn(os);
    write(name, os.str());
  }

  void manifest(const RunConfig& cfg, const std::string& study, const ingest::ScenarioBundle& bundle) {
    json inputs = json::array();
    const fs::path dir = cfg.scenario;
    std::vector<fs::path> files = {dir / "scenario.json", dir / "load_snapshot.json", dir / "gas_demand_split.json",
                                   bundle.electric_network, bundle.gas_network};
    if (!cfg.contingency_file.empty()) files.emplace_back(cfg.contingency_file);
    for (const auto& f : files) {
      inputs.push_back({{"path", f.lexically_relative(dir).generic_string()}, {"sha256", sha256_file(f)}});
    }
    json outputs = json::array();
    for (const auto& n : names_) outputs.push_back({{"path", n}, {"sha256", sha256_file(dir_ / n)}});
    const json doc = {{"tool", "nexus"},
                      {"version", NEXUS_VERSION},
                      {"config", cfg.to_json(study)},
                      {"bundle", {{"pathway", bundle.pathway}, {"year", bundle.year}, {"hours", bundle.horizon}}},
                      {"inputs", inputs},
                      {"outputs", outputs},
                      {"libraries",
                       {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                      "." + std::to_string(EIGEN_MINOR_VERSION)},
                        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                        {"cli11", CLI11_VERSION},
                        {"compiler", __VERSION__}}}};
    report::write_file(dir_ / "manifest.json", doc.dump(2) + "\n");
  }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

// Validation shared by every study: bundle, networks, coupling.
bool precheck(const RunConfig& cfg, int& code) {
  const auto rep = ingest::validate_scenario(cfg.scenario);
  if (rep.empty()) return true;
  print_findings(rep, std::cout);
  code = kExitFindings;
  return false;
}

std::vector<gas::LinepackRecord> after_start(const std::vector<gas::LinepackRecord>& lp) {
  return lp.size() > 1 ? std::vector<gas::LinepackRecord>(lp.begin() + 1, lp.end()) : lp;
}

int stride_steps(const RunConfig& cfg) {
  return std::max(1, static_cast<int>(std::lround(cfg.pressure_stride_s / cfg.dt)));
}

int cmd_validate(const RunConfig& cfg) {
  const auto rep = ingest::validate_scenario(cfg.scenario);
  if (rep.empty()) {
    std::cout << "no findings\n";
    return kExitClean;
  }
  print_findings(rep, std::cout);
  return kExitFindings;
}

int cmd_adequacy(const RunConfig& cfg) {
  int code = kExitClean;
  if (!precheck(cfg, code)) return code;
  const auto start = std::chrono::steady_clock::now();
  const auto loaded = ingest::load_scenario(cfg.scenario);
  std::ostringstream log;
  studies::AdequacyOptions opt;
  opt.reserve_mw = cfg.reserve_mw;
  opt.coupled = cfg.solver_options("adequacy");
  opt.coupled.log = &log;
  const auto rep = studies::run_adequacy(*loaded.system, loaded.scenario, opt);
  if (verbose()) std::cerr << log.str();
  const auto& sol = rep.solution;
  const auto& sys = *loaded.system;

  Outputs out(cfg.out);
  out.stream("generation_shares.csv", [&](std::ostream& os) { report::write_shares_csv(os, loaded.bundle.pathway, rep); });
  out.stream("linepack.csv", [&](std::ostream& os) {
    report::write_linepack_table(os, sys.zones(), after_start(sol.gas_day.linepack), sys.properties().standard_density);
  });
  out.stream("pressures.csv", [&](std::ostream& os) {
    gas::Simulator sim(sys, opt.coupled.gas);
    gas::write_pressure_csv(os, sim, sol.gas_day.trajectory, stride_steps(cfg));
  });
  out.stream("violations.csv", [&](std::ostream& os) { report::write_violations_csv(os, rep.violations); });
  out.stream("curtailment.csv", [&](std::ostream& os) { report::write_curtailment_csv(os, sys.electric(), sol.dispatch); });
  out.stream("shed.csv", [&](std::ostream& os) { report::write_shed_csv(os, sys.electric(), sol.dispatch); });
  out.stream("fuel_constraints.csv", [&](std::ostream& os) {
    os << "zone,t0_s,window_s,G_C_kg,plants\n";
    for (const auto& fc : sol.constraints) {
      std::string plants;
      for (const auto& m : fc.members) plants += (plants.empty() ? "" : ";") + sys.electric().generators[m.generator].id;
      os << fc.zone << ',' << report::fixed(fc.t0, 0) << ',' << report::fixed(fc.t_star, 0) << ','
         << report::fixed(fc.g_c, 3) << ',' << plants << '\n';
    }
  });
  out.write("iterations.jsonl", log.str());
  auto summary = report::adequacy_summary(rep);
  summary["linepack_initial_mcm"] = sol.gas_day.linepack.empty() ? 0.0 : sol.gas_day.linepack.front().total_mcm;
  if (!cfg.omit_timing) summary["wall_s"] = seconds_since(start);
  out.write("summary.json", summary.dump(2) + "\n");
  out.manifest(cfg, "adequacy", loaded.bundle);

  std::cout << "adequacy: shed " << report::fixed(rep.shed_mwh, 3) << " MWh, gas curtailed "
            << report::fixed(rep.gas_curtailed_m3, 1) << " m3, " << sol.iterations << " iteration(s), "
            << sol.termination << '\n';
  return sol.converged ? kExitClean : kExitStudyFailed;
}

studies::ContingencyConfig contingency_config(const RunConfig& cfg) {
  studies::ContingencyConfig cc;
  cc.generator_cap_mw = cfg.generator_cap_mw;
  cc.wind_cap_mw = cfg.wind_cap_mw;
  if (cfg.contingency_file.empty()) return cc;
  json doc;
  std::ifstream in(cfg.contingency_file);
  if (!in) throw IoError("cannot read " + cfg.contingency_file);
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(cfg.contingency_file + ": " + e.what());
  }
  auto list = [&](const char* key, std::vector<std::string>& ids, bool& include) {
    if (!doc.contains(key)) return;
    const auto& v = doc[key];
    if (v.is_boolean()) {
      include = v.get<bool>();
    } else {
      ids = v.get<std::vector<std::string>>();
      include = !ids.empty();
    }
  };
  list("lines", cc.lines, cc.include_lines);
  list("plants", cc.plants, cc.include_plants);
  list("solar", cc.solar, cc.include_solar);
  list("wind", cc.wind, cc.include_wind);
  list("compressors", cc.compressors, cc.include_compressors);
  if (doc.contains("generator_cap_MW")) cc.generator_cap_mw = doc["generator_cap_MW"].get<double>();
  if (doc.contains("wind_cap_MW")) cc.wind_cap_mw = doc["wind_cap_MW"].get<double>();
  return cc;
}

int cmd_security(const RunConfig& cfg) {
  int code = kExitClean;
  if (!precheck(cfg, code)) return code;
  const auto start = std::chrono::steady_clock::now();
  const auto loaded = ingest::load_scenario(cfg.scenario);
  const auto list = studies::enumerate_contingencies(*loaded.system, contingency_config(cfg));

  studies::SecurityOptions opt;
  opt.jobs = cfg.jobs;
  opt.coupled = cfg.solver_options("security");
  if (verbose()) std::cerr << "security: " << list.size() << " contingencies on " << cfg.jobs << " worker(s)\n";

  const auto base = studies::run_base_case(loaded.system, loaded.scenario, opt);
  const auto records = studies::run_security(loaded.system, loaded.scenario, list, opt);
  const auto summary = studies::summarize(base, records);

  Outputs out(cfg.out);
  out.stream("contingency_report.csv",
             [&](std::ostream& os) { report::write_contingency_csv(os, records, cfg.omit_timing); });
  auto doc = report::security_summary(summary, base, records);
  if (!cfg.omit_timing) doc["wall_s"] = seconds_since(start);
  out.write("summary.json", doc.dump(2) + "\n");
  out.manifest(cfg, "security", loaded.bundle);

  std::cout << "security: " << records.size() << " contingencies, " << summary.with_shed << " with shed, worst "
            << summary.worst_id << " (" << report::fixed(summary.worst_ens_mwh, 3) << " MWh)\n";
  return summary.failed == 0 ? kExitClean : kExitStudyFailed;
}

int cmd_gas_sim(const RunConfig& cfg) {
  int code = kExitClean;
  if (!precheck(cfg, code)) return code;
  const auto start = std::chrono::steady_clock::now();
  const auto loaded = ingest::load_scenario(cfg.scenario);
  const auto& sys = *loaded.system;
  gas::SolverOptions gopt;
  gopt.dt = cfg.dt;
  gopt.dx = cfg.dx;
  gas::Simulator sim(sys, gopt);
  auto schedules = loaded.scenario.gas;
  if (cfg.with_dispatch) {
    auto problem = build_uc(sys, loaded.scenario.uc, loaded.scenario.uc_options);
    const auto so = cfg.solver_options("gas-sim");
    const auto d = solve_mip(problem, so.gap_target, so.time_limit_s, so.node_limit);
    for (auto& off : coupling::gfpp_offtakes(d, sys)) schedules.demands.push_back(std::move(off));
  }
  const auto day = gas::simulate_day(sim, schedules, units::kSecondsPerHour * loaded.bundle.horizon);

  Outputs out(cfg.out);
  out.stream("linepack.csv", [&](std::ostream& os) {
    report::write_linepack_table(os, sys.zones(), after_start(day.linepack), sys.properties().standard_density);
  });
  out.stream("pressures.csv", [&](std::ostream& os) { gas::write_pressure_csv(os, sim, day.trajectory, stride_steps(cfg)); });
  out.stream("violations.csv", [&](std::ostream& os) { report::write_violations_csv(os, day.violations); });
  double lo = day.linepack.front().total_mcm, hi = lo;
  for (const auto& r : day.linepack) {
    lo = std::min(lo, r.total_mcm);
    hi = std::max(hi, r.total_mcm);
  }
  json summary = {{"linepack_initial_mcm", day.linepack.front().total_mcm},
                  {"linepack_final_mcm", day.linepack.back().total_mcm},
                  {"linepack_min_mcm", lo},
                  {"linepack_max_mcm", hi},
                  {"closure_fraction", day.closure},
                  {"injected_kg", day.injected_kg},
                  {"offtaken_kg", day.offtaken_kg},
                  {"mass_balance_error_kg", day.mass_balance_error()},
                  {"violations", day.violations.size()},
                  {"max_newton_iterations", day.max_newton_iterations}};
  if (!cfg.omit_timing) summary["wall_s"] = seconds_since(start);
  out.write("summary.json", summary.dump(2) + "\n");
  out.manifest(cfg, "gas-sim", loaded.bundle);
  std::cout << "gas-sim: " << day.violations.size() << " violation(s), linepack swing "
            << report::fixed(hi - lo, 4) << " mcm\n";
  return kExitClean;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Coupled electricity and gas reliability studies", "nexus"};
  app.require_subcommand(1);
  app.set_version_flag("--version", NEXUS_VERSION);
  RunConfig cfg;

  auto common = [&](CLI::App* sub, bool needs_out) {
    sub->add_option("--scenario", cfg.scenario, "Scenario bundle directory")->required()->check(CLI::ExistingDirectory);
    if (needs_out) {
      sub->add_option("--out", cfg.out, "Output directory")->required();
      sub->add_flag("--omit-timing", cfg.omit_timing, "Leave wall-clock times out of the reports");
      sub->add_option("--seed", cfg.seed, "Recorded in the manifest; the studies are deterministic");
      sub->add_option("--dt", cfg.dt, "Gas time step in s")->check(CLI::Range(1.0, 3600.0));
      sub->add_option("--dx", cfg.dx, "Target pipe segment length in m")->check(CLI::Range(10.0, 1e6));
      sub->add_option("--pressure-stride", cfg.pressure_stride_s, "Seconds between rows of pressures.csv")
          ->check(CLI::PositiveNumber);
    }
  };
  auto solver = [&](CLI::App* sub) {
    sub->add_option("--gap", cfg.gap, "Relative MIP gap target")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--time-limit", cfg.time_limit_s, "Seconds per unit-commitment solve")
        ->check(CLI::PositiveNumber);
    sub->add_option("--node-limit", cfg.node_limit, "Branch-and-bound nodes per unit-commitment solve")
        ->check(CLI::PositiveNumber);
  };
  auto coupled = [&](CLI::App* sub) {
    sub->add_option("--iteration-cap", cfg.iteration_cap, "Coupling iterations")->check(CLI::Range(1, 100));
    sub->add_option("--safety-factor", cfg.safety_factor, "Multiplier on the sized gas curtailment")
        ->check(CLI::Range(1.0, 10.0));
  };

  auto* validate = app.add_subcommand("validate", "Check a scenario bundle and its networks");
  common(validate, false);
  auto* adequacy = app.add_subcommand("adequacy", "Coupled adequacy study with the reserve requirement");
  common(adequacy, true);
  solver(adequacy);
  coupled(adequacy);
  adequacy->add_option("--reserve-mw", cfg.reserve_mw, "Reserve requirement in MW")->check(CLI::NonNegativeNumber);
  auto* security = app.add_subcommand("security", "N-1 sweep in security mode");
  common(security, true);
  solver(security);
  coupled(security);
  security->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::Range(1, 256));
  security->add_option("--contingencies", cfg.contingency_file, "JSON selection of elements and caps")
      ->check(CLI::ExistingFile);
  security->add_option("--generator-cap-mw", cfg.generator_cap_mw, "Largest plant or solar loss in MW");
  security->add_option("--wind-cap-mw", cfg.wind_cap_mw, "Largest wind loss in MW");
  auto* gas_sim = app.add_subcommand("gas-sim", "One transient gas day from the bundle's schedules");
  common(gas_sim, true);
  solver(gas_sim);
  gas_sim->add_flag("--with-dispatch", cfg.with_dispatch, "Add GFPP off-takes from one unit-commitment solve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitClean : kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(cfg);
    if (*adequacy) return cmd_adequacy(cfg);
    if (*security) return cmd_security(cfg);
    if (*gas_sim) return cmd_gas_sim(cfg);
  } catch (const std::exception& e) {
    std::cerr << "nexus: " << e.what() << '\n';
    return kExitStudyFailed;
  }
  return kExitUsage;
}

}  // namespace nexus::cli
