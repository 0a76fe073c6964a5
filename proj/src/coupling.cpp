#include "nexus/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>

#include <nlohmann/json.hpp>

#include "nexus/error.hpp"
#include "nexus/units.hpp"

namespace nexus::coupling {

namespace {

double pipe_area(const Pipe& p) {
  return p.area > 0.0 ? p.area : std::numbers::pi * p.diameter * p.diameter / 4.0;
}

// Gas mass per MWh of electric output, kg.
double kg_per_mwh(double efficiency, double hhv) {
  return units::mw_to_w(1.0) * units::kSecondsPerHour / (efficiency * hhv);
}

// Share of period t (length dt hours) inside [t0, t0 + t_star] seconds.
double overlap(int t, double dt_hours, double t0, double t_star) {
  const double a = t * dt_hours * units::kSecondsPerHour;
  const double b = a + dt_hours * units::kSecondsPerHour;
  const double lo = std::max(a, t0), hi = std::min(b, t0 + t_star);
  return hi > lo ? (hi - lo) / (b - a) : 0.0;
}

}  // namespace

std::vector<GasDemand> gfpp_offtakes(const DispatchResult& dispatch, const CoupledSystem& sys) {
  std::map<std::size_t, std::vector<double>> by_node;
  for (const auto& b : sys.bindings()) {
    auto& series = by_node[b.gas_node];
    series.resize(dispatch.horizon, 0.0);
    for (int t = 0; t < dispatch.horizon; ++t) {
      series[t] += units::mw_to_w(dispatch.output[b.generator][t]) / (b.efficiency * b.hhv);
    }
  }
  std::vector<GasDemand> out;
  for (auto& [node, series] : by_node) out.push_back({sys.gas().nodes[node].id, std::move(series), false});
  return out;
}

std::vector<ViolatedZone> violated_zones(const std::vector<gas::PressureViolation>& violations,
                                         const CoupledSystem& sys) {
  const auto& zones = sys.zones();
  std::map<std::size_t, ViolatedZone> found;
  for (const auto& v : violations) {
    if (v.kind != gas::ViolationKind::Min) continue;
    const std::size_t z = zones.zone_of_node[v.node];
    auto [it, fresh] = found.try_emplace(z);
    auto& vz = it->second;
    if (fresh) {
      vz.zone = z;
      vz.zone_id = zones.ids[z];
      vz.onset = v.onset;
      vz.end = v.onset + v.duration;
    }
    vz.onset = std::min(vz.onset, v.onset);
    vz.end = std::max(vz.end, v.onset + v.duration);
    vz.violations.push_back(v);
  }
  std::vector<ViolatedZone> out;
  for (auto& [z, vz] : found) {
    for (const auto& b : sys.bindings()) {
      if (zones.zone_of_node[b.gas_node] == z) vz.gfpps.push_back(b.generator);
    }
    std::sort(vz.gfpps.begin(), vz.gfpps.end());
    out.push_back(std::move(vz));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ViolatedZone& a, const ViolatedZone& b) { return a.onset < b.onset; });
  return out;
}

ViolatedZone violated_zone(const std::vector<gas::PressureViolation>& violations, const CoupledSystem& sys) {
  auto zones = violated_zones(violations, sys);
  if (zones.empty()) throw NoGfppInZone("no minimum-pressure violation to attribute");
  if (zones.front().gfpps.empty()) {
    throw NoGfppInZone("zone " + zones.front().zone_id + " has a minimum-pressure violation but no GFPP");
  }
  return std::move(zones.front());
}

CurtailmentSize size_curtailment(const ViolatedZone& zone, const gas::Simulator& sim,
                                 const std::vector<gas::GasState>& trajectory, double safety_factor,
                                 double day_end) {
  const auto& net = sim.network();
  const double c2 = sim.properties().sound_speed * sim.properties().sound_speed;
  CurtailmentSize out;
  out.t0 = zone.onset;
  out.t_star = std::max(0.0, day_end - zone.onset);
  if (zone.violations.empty() || trajectory.empty()) return out;

  const gas::PressureViolation* worst = &zone.violations.front();
  for (const auto& v : zone.violations) {
    const double depth = net.nodes[v.node].p_min - v.worst_pressure;
    if (depth > net.nodes[worst->node].p_min - worst->worst_pressure) worst = &v;
  }
  out.worst_time = worst->worst_time;
  const gas::GasState* state = &trajectory.front();
  for (const auto& s : trajectory) {
    if (std::abs(s.time - worst->worst_time) < std::abs(state->time - worst->worst_time)) state = &s;
  }

  double deficit = 0.0;
  const auto& grids = sim.grids();
  for (std::size_t k = 0; k < grids.size(); ++k) {
    const auto& g = grids[k];
    if (sim.zones().zone_of_node[g.from_node] != zone.zone) continue;
    const double floor = std::max(net.nodes[g.from_node].p_min, net.nodes[g.to_node].p_min);
    const double a = pipe_area(net.pipes[k]);
    for (int i = 0; i < g.segments; ++i) {
      const double p = 0.5 * (state->pressure[k][i] + state->pressure[k][i + 1]);
      if (p < floor) deficit += a / c2 * (floor - p) * g.dx;
    }
  }
  if (deficit <= 0.0) {
    // Only the node itself dipped: charge the segment next to it.
    const double dip = net.nodes[worst->node].p_min - state->node_pressure[worst->node];
    double best = 0.0;
    for (std::size_t k = 0; k < grids.size(); ++k) {
      const auto& g = grids[k];
      if (g.from_node != worst->node && g.to_node != worst->node) continue;
      best = std::max(best, pipe_area(net.pipes[k]) / c2 * std::max(0.0, dip) * g.dx);
    }
    deficit = best;
  }
  out.g_c = safety_factor * deficit;
  return out;
}

EmittedRow emit_fuel_constraint(const FuelConstraint& fc, double dt_hours, int horizon) {
  EmittedRow out;
  out.row.label = fc.zone;
  for (const auto& m : fc.members) {
    const double per_mw = kg_per_mwh(m.efficiency, m.hhv) * dt_hours;
    for (int t = 0; t < horizon; ++t) {
      const double w = overlap(t, dt_hours, fc.t0, fc.t_star);
      if (w <= 0.0) continue;
      const double coef = w * per_mw;
      out.row.terms.push_back({m.generator, t, coef});
      if (t < static_cast<int>(m.reference.size())) out.reference_kg += coef * m.reference[t];
    }
  }
  out.row.rhs = out.reference_kg - fc.g_c;
  if (out.row.rhs < 0.0) {
    out.row.rhs = 0.0;
    out.clipped = true;
  }
  return out;
}

double window_gas_draw(const DispatchResult& dispatch, const CoupledSystem& sys,
                       const std::vector<std::size_t>& generators, double t0, double t_star) {
  double total = 0.0;
  for (std::size_t g : generators) {
    const auto* b = sys.binding_for(g);
    if (!b) continue;
    const double per_mw = kg_per_mwh(b->efficiency, b->hhv) * dispatch.dt_hours;
    for (int t = 0; t < dispatch.horizon; ++t) {
      total += overlap(t, dispatch.dt_hours, t0, t_star) * per_mw * dispatch.output[g][t];
    }
  }
  return total;
}

namespace {

double daily_gfpp_gas(const DispatchResult& d, const CoupledSystem& sys) {
  std::vector<std::size_t> all;
  for (const auto& b : sys.bindings()) all.push_back(b.generator);
  return window_gas_draw(d, sys, all, 0.0, d.horizon * d.dt_hours * units::kSecondsPerHour);
}

void log_iteration(std::ostream& out, const IterationRecord& rec) {
  nlohmann::json j;
  j["iteration"] = rec.iteration;
  j["objective"] = rec.objective;
  j["gap"] = rec.gap;
  j["min_violations"] = rec.min_violations;
  j["max_violations"] = rec.max_violations;
  j["reallocations"] = rec.reallocations;
  j["gfpp_gas_kg"] = rec.gfpp_gas_kg;
  j["zones"] = rec.zones;
  auto rows = nlohmann::json::array();
  for (const auto& e : rec.emitted) {
    rows.push_back({{"zone", e.row.label}, {"rhs_kg", e.row.rhs}, {"reference_kg", e.reference_kg},
                    {"clipped", e.clipped}});
  }
  j["constraints"] = rows;
  out << j.dump() << '\n';
}

}  // namespace

CoupledSolution coupled_solve(const CoupledSystem& sys, const CoupledScenario& scenario,
                              const CoupledOptions& options) {
  gas::Simulator sim(sys, options.gas);
  CoupledSolution sol;
  sol.problem = build_uc(sys, scenario.uc, scenario.uc_options);
  const double day_end = scenario.uc.horizon * scenario.uc.dt_hours * units::kSecondsPerHour;
  double first_draw = 0.0;

  for (int it = 1;; ++it) {
    IterationRecord rec;
    rec.iteration = it;
    sol.dispatch = solve_mip(sol.problem, options.gap_target, options.time_limit_s, options.node_limit);
    sol.iterations = it;
    rec.objective = sol.dispatch.objective;
    rec.gap = sol.dispatch.gap;
    rec.gfpp_gas_kg = daily_gfpp_gas(sol.dispatch, sys);
    if (it == 1) first_draw = rec.gfpp_gas_kg;

    // Gas day with this dispatch; max-pressure trouble is handled by moving injections.
    gas::Schedules sched = it == 1 ? scenario.gas : sol.gas_schedules;
    if (sched.injector_rate.size() < sys.gas().injectors.size()) {
      for (std::size_t i = sched.injector_rate.size(); i < sys.gas().injectors.size(); ++i) {
        sched.injector_rate.push_back(sys.gas().injectors[i].scheduled_rate);
      }
    }
    sched.demands = scenario.gas.demands;
    for (auto& d : gfpp_offtakes(sol.dispatch, sys)) sched.demands.push_back(std::move(d));
    sol.gas_day = gas::simulate_day(sim, sched, day_end);
    for (int round = 0; round < options.reallocation_rounds; ++round) {
      const bool any_max = std::any_of(sol.gas_day.violations.begin(), sol.gas_day.violations.end(),
                                       [](const auto& v) { return v.kind == gas::ViolationKind::Max; });
      if (!any_max) break;
      try {
        sched = gas::reallocate_injections(sim, sched, sol.gas_day.violations, sol.gas_day.linepack);
      } catch (const ReallocationImpossible&) {
        break;  // the max violations stay on record
      }
      sol.gas_day = gas::simulate_day(sim, sched, day_end);
      ++rec.reallocations;
    }
    sol.gas_schedules = sched;
    for (const auto& v : sol.gas_day.violations) {
      (v.kind == gas::ViolationKind::Min ? rec.min_violations : rec.max_violations) += 1;
    }
    sol.residual_violations.clear();
    for (const auto& v : sol.gas_day.violations) {
      if (v.kind == gas::ViolationKind::Min) sol.residual_violations.push_back(v);
    }

    auto finish = [&](bool converged, const char* why) {
      sol.converged = converged;
      sol.termination = why;
      sol.history.push_back(rec);
      if (options.log) log_iteration(*options.log, rec);
    };

    if (sol.residual_violations.empty()) {
      finish(true, "clean");
      break;
    }
    bool gfpp_free_zone = false, any_draw = false;
    for (const auto& vz : violated_zones(sol.gas_day.violations, sys)) {
      rec.zones.push_back(vz.zone_id);
      if (vz.gfpps.empty()) {
        gfpp_free_zone = true;  // firm-demand risk, nothing to curtail
        continue;
      }
      const auto size = size_curtailment(vz, sim, sol.gas_day.trajectory, options.safety_factor, day_end);
      if (!(size.g_c > 0.0) || !(size.t_star > 0.0)) continue;
      FuelConstraint fc;
      fc.zone = vz.zone_id;
      fc.t0 = size.t0;
      fc.t_star = size.t_star;
      fc.g_c = size.g_c;
      for (std::size_t g : vz.gfpps) {
        const auto* b = sys.binding_for(g);
        fc.members.push_back({g, b->efficiency, b->hhv, sol.dispatch.output[g]});
      }
      auto row = emit_fuel_constraint(fc, scenario.uc.dt_hours, scenario.uc.horizon);
      if (row.reference_kg <= 0.0) continue;  // this zone's GFPPs already burn nothing there
      any_draw = true;
      sol.problem.add_fuel_row(row.row);
      sol.constraints.push_back(fc);
      rec.emitted.push_back(std::move(row));
    }
    if (!any_draw) {
      finish(false, gfpp_free_zone ? "no-gfpp-in-zone" : "shed-exhausted");
      break;
    }
    if (it >= options.iteration_cap) {
      finish(false, "iteration-cap");
      break;
    }
    sol.history.push_back(rec);
    if (options.log) log_iteration(*options.log, rec);
  }

  sol.gas_curtailed_kg = std::max(0.0, first_draw - sol.history.back().gfpp_gas_kg);
  sol.gas_curtailed_m3 = units::kg_to_m3(sol.gas_curtailed_kg, sys.properties().standard_density);
  return sol;
}

}  // namespace nexus::coupling
