#include "nexus/studies.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "nexus/error.hpp"

namespace nexus::studies {

namespace {

ShareColumn column_of(Tech tech) {
  switch (tech) {
    case Tech::Hydro: return ShareColumn::Hydro;
    case Tech::PumpedStorage: return ShareColumn::PS;
    case Tech::Nuclear: return ShareColumn::Nuclear;
    case Tech::Ocgt: return ShareColumn::Ocgt;
    case Tech::Ccgt: return ShareColumn::Ccgt;
    case Tech::Coal: return ShareColumn::Coal;
    case Tech::BioLignite: return ShareColumn::BioLignite;
    case Tech::Oil: return ShareColumn::Oil;
    case Tech::Wind: return ShareColumn::Wind;
    case Tech::Solar: return ShareColumn::Solar;
    case Tech::RoR: return ShareColumn::Hydro;  // the table has no run-of-river column
  }
  return ShareColumn::Hydro;
}

std::size_t idx(ShareColumn c) { return static_cast<std::size_t>(c); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool shed_under_compressor(const DispatchResult& d, const CoupledSystem& sys) {
  const auto& net = sys.electric();
  for (const auto& k : sys.gas().compressors) {
    if (k.drive != CompressorDrive::Electric || !k.electric_bus) continue;
    const auto b = net.bus_index(*k.electric_bus);
    if (!b || *b >= d.shed.size()) continue;
    for (double v : d.shed[*b])
      if (v > 1e-6) return true;
  }
  return false;
}

ContingencyRecord solve_case(const std::shared_ptr<const CoupledSystem>& sys, const coupling::CoupledScenario& scenario,
                             const coupling::CoupledOptions& options, bool islanded) {
  ContingencyRecord r;
  r.islanded = islanded;
  auto sc = scenario;
  sc.uc_options.reserve = false;
  auto opt = options;
  opt.log = nullptr;
  const auto sol = coupling::coupled_solve(*sys, sc, opt);
  r.energy_not_served = sol.dispatch.energy_not_served();
  r.gas_curtailed_kg = sol.gas_curtailed_kg;
  r.residual_violations = sol.residual_violations.size();
  r.iterations = sol.iterations;
  r.termination = sol.termination;
  r.shed_at_compressor_bus = shed_under_compressor(sol.dispatch, *sys);
  return r;
}

}  // namespace

const char* to_string(ShareColumn column) {
  static constexpr const char* names[] = {"Hydro", "PS",   "Nuclear", "OCGT",  "CCGT",   "Coal",
                                          "Bio/Lignite", "Oil", "Wind", "Solar", "Import", "LS"};
  return names[idx(column)];
}

double adequacy_without_res(double conventional_capacity_mw, double peak_demand_mw) {
  if (!(peak_demand_mw > 0.0)) throw ZeroPeak("peak demand must be positive");
  return 100.0 * conventional_capacity_mw / peak_demand_mw;
}

double conventional_capacity(const ElectricNetwork& net) {
  double total = 0.0;
  for (const auto& g : net.generators)
    if (!is_renewable(g.tech)) total += g.p_max;
  return total;
}

double peak_demand(const UcInputs& inputs) {
  double peak = 0.0;
  for (int t = 0; t < inputs.horizon; ++t) {
    double load = 0.0;
    for (const auto& bus : inputs.bus_load) load += bus[t];
    peak = std::max(peak, load);
  }
  return peak;
}

AdequacyReport run_adequacy(const CoupledSystem& sys, const coupling::CoupledScenario& scenario,
                            const AdequacyOptions& options) {
  auto sc = scenario;
  if (options.reserve_mw) {
    sc.uc_options.reserve = *options.reserve_mw > 0.0;
    sc.uc_options.reserve_mw = *options.reserve_mw;
  }

  AdequacyReport rep;
  rep.solution = coupling::coupled_solve(sys, sc, options.coupled);
  const auto& d = rep.solution.dispatch;
  const auto& net = sys.electric();
  const auto& in = sc.uc;
  const double dt = d.dt_hours;

  for (std::size_t g = 0; g < net.generators.size(); ++g) {
    for (int t = 0; t < d.horizon; ++t) rep.energy_mwh[idx(column_of(net.generators[g].tech))] += d.output[g][t] * dt;
  }
  for (std::size_t c = 0; c < net.clusters.size(); ++c) {
    double used = 0.0, curtailed = 0.0;
    for (int t = 0; t < d.horizon; ++t) {
      used += (std::max(0.0, in.cluster_available[c][t]) - d.curtailed[c][t]) * dt;
      curtailed += d.curtailed[c][t] * dt;
    }
    rep.energy_mwh[idx(column_of(net.clusters[c].kind))] += used;
    if (net.clusters[c].kind == Tech::Wind) rep.wind_curtailed_gwh += curtailed / 1000.0;
    if (net.clusters[c].kind == Tech::Solar) rep.solar_curtailed_gwh += curtailed / 1000.0;
  }
  for (int t = 0; t < d.horizon; ++t) {
    double net_import = 0.0;
    for (const auto& ic : in.interconnector_import) net_import += ic[t];
    rep.energy_mwh[idx(ShareColumn::Import)] += std::max(0.0, net_import) * dt;
  }
  rep.shed_mwh = d.energy_not_served();
  rep.energy_mwh[idx(ShareColumn::LS)] = rep.shed_mwh;

  double total = 0.0;
  for (double e : rep.energy_mwh) total += e;
  if (total > 0.0)
    for (std::size_t i = 0; i < kShareColumns; ++i) rep.shares[i] = 100.0 * rep.energy_mwh[i] / total;

  const auto& lp = rep.solution.gas_day.linepack;
  if (!lp.empty()) {
    rep.linepack_min_mcm = rep.linepack_max_mcm = lp.front().total_mcm;
    for (const auto& r : lp) {
      rep.linepack_min_mcm = std::min(rep.linepack_min_mcm, r.total_mcm);
      rep.linepack_max_mcm = std::max(rep.linepack_max_mcm, r.total_mcm);
    }
  }
  rep.gas_curtailed_kg = rep.solution.gas_curtailed_kg;
  rep.gas_curtailed_m3 = rep.solution.gas_curtailed_m3;
  rep.violations = rep.solution.gas_day.violations;
  const double peak = peak_demand(in);
  rep.adequacy_without_res = peak > 0.0 ? adequacy_without_res(conventional_capacity(net), peak) : 0.0;
  return rep;
}

// ---------------------------------------------------------------------------

const char* to_string(ContingencyClass cls) {
  switch (cls) {
    case ContingencyClass::Line: return "line";
    case ContingencyClass::ConventionalPlant: return "conventional-plant";
    case ContingencyClass::SolarCluster: return "solar-cluster";
    case ContingencyClass::WindCluster: return "wind-cluster";
    case ContingencyClass::Compressor: return "compressor";
  }
  return "?";
}

double ContingencyConfig::cap(ContingencyClass cls) const {
  switch (cls) {
    case ContingencyClass::ConventionalPlant:
    case ContingencyClass::SolarCluster: return generator_cap_mw;
    case ContingencyClass::WindCluster: return wind_cap_mw;
    default: return std::numeric_limits<double>::infinity();
  }
}

std::vector<Contingency> enumerate_contingencies(const CoupledSystem& sys, const ContingencyConfig& config) {
  const auto& el = sys.electric();
  const auto& gas = sys.gas();
  std::vector<Contingency> out;

  auto selected = [](const std::vector<std::string>& list, const std::string& id) {
    return list.empty() || std::find(list.begin(), list.end(), id) != list.end();
  };
  auto check = [](const std::vector<std::string>& list, auto&& exists, const char* what) {
    for (const auto& id : list)
      if (!exists(id)) throw Error(std::string("contingency selection names unknown ") + what + " '" + id + "'");
  };
  check(config.lines, [&](const std::string& id) { return el.line_index(id).has_value(); }, "line");
  check(config.plants, [&](const std::string& id) { return el.generator_index(id).has_value(); }, "plant");
  check(config.solar, [&](const std::string& id) { return el.cluster_index(id).has_value(); }, "solar cluster");
  check(config.wind, [&](const std::string& id) { return el.cluster_index(id).has_value(); }, "wind cluster");
  check(config.compressors, [&](const std::string& id) { return gas.compressor_index(id).has_value(); },
        "compressor");

  auto add = [&](ContingencyClass cls, const char* prefix, const std::string& element, double mw) {
    out.push_back({std::string(prefix) + ":" + element, cls, element, std::min(mw, config.cap(cls))});
  };
  if (config.include_lines)
    for (const auto& l : el.lines)
      if (selected(config.lines, l.id)) add(ContingencyClass::Line, "line", l.id, l.rating);
  if (config.include_plants)
    for (const auto& g : el.generators)
      if (!is_renewable(g.tech) && selected(config.plants, g.id))
        add(ContingencyClass::ConventionalPlant, "plant", g.id, g.p_max);
  for (const auto& c : el.clusters) {
    if (c.kind == Tech::Solar && config.include_solar && selected(config.solar, c.id))
      add(ContingencyClass::SolarCluster, "solar", c.id, c.capacity);
    if (c.kind == Tech::Wind && config.include_wind && selected(config.wind, c.id))
      add(ContingencyClass::WindCluster, "wind", c.id, c.capacity);
  }
  if (config.include_compressors)
    for (const auto& k : gas.compressors)
      if (selected(config.compressors, k.id)) add(ContingencyClass::Compressor, "compressor", k.id, k.rated_power);

  std::stable_sort(out.begin(), out.end(), [](const Contingency& a, const Contingency& b) {
    if (a.cls != b.cls) return a.cls < b.cls;
    return natural_less(a.element, b.element);
  });
  return out;
}

ContingencyCase apply_contingency(const std::shared_ptr<const CoupledSystem>& sys,
                                  const coupling::CoupledScenario& scenario, const Contingency& c,
                                  bool allow_islanding) {
  ContingencyCase out;
  out.scenario = scenario;
  auto el = sys->electric_ptr();
  auto gas = sys->gas_ptr();

  switch (c.cls) {
    case ContingencyClass::Line: {
      auto copy = std::make_shared<ElectricNetwork>(*el);
      const auto l = copy->line_index(c.element);
      if (!l) throw Error("contingency names unknown line " + c.element);
      copy->lines.erase(copy->lines.begin() + static_cast<std::ptrdiff_t>(*l));
      out.islanded = electric_islands(*copy).size() > electric_islands(*el).size();
      if (out.islanded && !allow_islanding) throw IslandingDetected("losing line " + c.element + " splits the grid");
      el = copy;
      break;
    }
    case ContingencyClass::ConventionalPlant: {
      auto copy = std::make_shared<ElectricNetwork>(*el);
      const auto g = copy->generator_index(c.element);
      if (!g) throw Error("contingency names unknown plant " + c.element);
      auto& gen = copy->generators[*g];
      gen.p_max = std::max(0.0, gen.p_max - c.capacity_lost);
      gen.p_min_stable = std::min(gen.p_min_stable, gen.p_max);
      gen.pump_capacity = std::min(gen.pump_capacity, gen.p_max);
      el = copy;
      break;
    }
    case ContingencyClass::SolarCluster:
    case ContingencyClass::WindCluster: {
      auto copy = std::make_shared<ElectricNetwork>(*el);
      const auto k = copy->cluster_index(c.element);
      if (!k) throw Error("contingency names unknown cluster " + c.element);
      auto& cl = copy->clusters[*k];
      const double left = std::max(0.0, cl.capacity - c.capacity_lost);
      const double keep = cl.capacity > 0.0 ? left / cl.capacity : 0.0;
      cl.capacity = left;
      // The lost share of the farm takes its share of the output with it.
      if (*k < out.scenario.uc.cluster_available.size())
        for (double& v : out.scenario.uc.cluster_available[*k]) v *= keep;
      el = copy;
      break;
    }
    case ContingencyClass::Compressor: {
      auto copy = std::make_shared<GasNetwork>(*gas);
      const auto k = copy->compressor_index(c.element);
      if (!k) throw Error("contingency names unknown compressor " + c.element);
      copy->compressors[*k].ratio = 1.0;
      gas = copy;
      break;
    }
  }
  out.system = std::make_shared<const CoupledSystem>(bind_coupling(el, gas, sys->coupling(), sys->properties()));
  return out;
}

coupling::CoupledOptions SecurityOptions::deterministic() {
  coupling::CoupledOptions opt;
  opt.time_limit_s = 1e9;
  opt.node_limit = 20000;
  opt.gap_target = 1e-6;
  return opt;
}

ContingencyRecord run_base_case(const std::shared_ptr<const CoupledSystem>& sys,
                                const coupling::CoupledScenario& scenario, const SecurityOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  auto r = solve_case(sys, scenario, options.coupled, false);
  r.id = "base";
  r.wall_s = seconds_since(start);
  return r;
}

std::vector<ContingencyRecord> run_security(const std::shared_ptr<const CoupledSystem>& sys,
                                            const coupling::CoupledScenario& scenario,
                                            const std::vector<Contingency>& contingencies,
                                            const SecurityOptions& options) {
  std::vector<ContingencyRecord> records(contingencies.size());
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < contingencies.size(); i = next++) {
      const auto& c = contingencies[i];
      const auto start = std::chrono::steady_clock::now();
      ContingencyRecord r;
      try {
        const auto cc = apply_contingency(sys, scenario, c, true);
        r = solve_case(cc.system, cc.scenario, options.coupled, cc.islanded);
      } catch (const std::exception& e) {
        r = ContingencyRecord{};
        r.termination = "error";
        r.error = e.what();
      }
      r.id = c.id;
      r.cls = c.cls;
      r.element = c.element;
      r.capacity_lost = c.capacity_lost;
      r.wall_s = seconds_since(start);
      records[i] = std::move(r);
    }
  };

  const auto jobs = static_cast<std::size_t>(std::max(1, options.jobs));
  if (jobs == 1 || contingencies.size() <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < std::min(jobs, contingencies.size()); ++j) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return records;
}

SecuritySummary summarize(const ContingencyRecord& base, const std::vector<ContingencyRecord>& records) {
  SecuritySummary s;
  s.contingencies = records.size();
  s.base_ens_mwh = base.energy_not_served;
  for (const auto& r : records) {
    if (r.termination == "error") ++s.failed;
    if (r.energy_not_served > 1e-6) ++s.with_shed;
    s.total_ens_mwh += r.energy_not_served;
    if (s.worst_id.empty() || r.energy_not_served > s.worst_ens_mwh) {
      s.worst_id = r.id;
      s.worst_ens_mwh = r.energy_not_served;
    }
    if (s.worst_gas_id.empty() || r.gas_curtailed_kg > s.worst_gas_kg) {
      s.worst_gas_id = r.id;
      s.worst_gas_kg = r.gas_curtailed_kg;
    }
  }
  return s;
}

}  // namespace nexus::studies
