#include "nexus/gas.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <numbers>
#include <ostream>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "nexus/error.hpp"
#include "nexus/units.hpp"

namespace nexus::gas {

const char* to_string(ViolationKind kind) { return kind == ViolationKind::Min ? "min" : "max"; }

std::vector<PipeGrid> discretize(const GasNetwork& net, double target_dx) {
  std::vector<PipeGrid> grids;
  grids.reserve(net.pipes.size());
  for (std::size_t k = 0; k < net.pipes.size(); ++k) {
    const auto& pipe = net.pipes[k];
    PipeGrid g;
    g.pipe_id = pipe.id;
    g.pipe = k;
    g.segments = std::max(2, static_cast<int>(std::lround(pipe.length / target_dx)));
    g.dx = pipe.length / g.segments;
    auto from = net.node_index(pipe.from_node);
    auto to = net.node_index(pipe.to_node);
    if (!from || !to) throw DanglingNode("pipe " + pipe.id + " references an unknown node");
    g.from_node = *from;
    g.to_node = *to;
    grids.push_back(g);
  }
  return grids;
}

namespace {

double pipe_area(const Pipe& p) {
  return p.area > 0.0 ? p.area : std::numbers::pi * p.diameter * p.diameter / 4.0;
}

}  // namespace

// Unknown vector: node pressures, then per pipe its interior pressures and all
// point flows, then compressor flows. Equations follow the same count: two per
// segment, one balance per node, one ratio per compressor.
struct Simulator::Layout {
  std::size_t nodes = 0;
  std::vector<std::size_t> interior;  // first interior pressure of each pipe
  std::vector<std::size_t> flows;     // first point flow of each pipe
  std::size_t compressors = 0;        // first compressor flow
  std::size_t size = 0;

  Layout(const std::vector<PipeGrid>& grids, std::size_t node_count, std::size_t compressor_count) {
    nodes = node_count;
    std::size_t at = node_count;
    for (const auto& g : grids) {
      interior.push_back(at);
      at += static_cast<std::size_t>(g.segments - 1);
      flows.push_back(at);
      at += static_cast<std::size_t>(g.segments + 1);
    }
    compressors = at;
    size = at + compressor_count;
  }

  std::size_t p(const PipeGrid& g, std::size_t k, int point) const {
    if (point == 0) return g.from_node;
    if (point == g.segments) return g.to_node;
    return interior[k] + static_cast<std::size_t>(point - 1);
  }
  std::size_t m(std::size_t k, int point) const { return flows[k] + static_cast<std::size_t>(point); }
};

Simulator::Simulator(std::shared_ptr<const GasNetwork> network, GasProperties properties,
                     SolverOptions options)
    : network_(std::move(network)), properties_(properties), options_(options) {
  grids_ = discretize(*network_, options_.dx);
  zones_ = gas_zones(*network_);
  for (const auto& g : grids_) pipe_zone_.push_back(zones_.zone_of_node[g.from_node]);
}

Simulator::Simulator(const CoupledSystem& sys, SolverOptions options)
    : Simulator(sys.gas_ptr(), sys.properties(), options) {}

GasBoundary Simulator::empty_boundary() const {
  GasBoundary b;
  b.injection.assign(network_->nodes.size(), 0.0);
  b.offtake.assign(network_->nodes.size(), 0.0);
  return b;
}

GasState Simulator::solve(const GasState* previous, const GasBoundary& boundary, double dt, bool steady,
                          const GasState& guess) const {
  const auto& net = *network_;
  const Layout lay(grids_, net.nodes.size(), net.compressors.size());
  const double c2 = properties_.sound_speed * properties_.sound_speed;
  const double g_acc = properties_.gravity;

  std::vector<std::size_t> comp_from, comp_to;
  for (const auto& c : net.compressors) {
    auto a = net.node_index(c.from_node);
    auto b = net.node_index(c.to_node);
    if (!a || !b) throw DanglingNode("compressor " + c.id + " references an unknown node");
    comp_from.push_back(*a);
    comp_to.push_back(*b);
  }

  const bool anchored = steady || options_.hold_reference;
  std::size_t anchor = 0;
  double anchor_pressure = 0.0;
  if (anchored) {
    if (!net.reference) throw InitInfeasible("gas network has no pressure reference");
    auto idx = net.node_index(net.reference->node);
    if (!idx) throw DanglingNode("pressure reference at unknown node " + net.reference->node);
    anchor = *idx;
    anchor_pressure = net.reference->pressure;
  }

  Eigen::VectorXd x(static_cast<Eigen::Index>(lay.size));
  auto pack = [&](const GasState& s, Eigen::VectorXd& v) {
    for (std::size_t n = 0; n < lay.nodes; ++n) v[n] = s.node_pressure[n];
    for (std::size_t k = 0; k < grids_.size(); ++k) {
      const auto& g = grids_[k];
      for (int i = 1; i < g.segments; ++i) v[lay.p(g, k, i)] = s.pressure[k][i];
      for (int i = 0; i <= g.segments; ++i) v[lay.m(k, i)] = s.flow[k][i];
    }
    for (std::size_t c = 0; c < comp_from.size(); ++c) v[lay.compressors + c] = s.compressor_flow[c];
  };
  pack(guess, x);
  Eigen::VectorXd x_old(static_cast<Eigen::Index>(lay.size));
  if (previous) pack(*previous, x_old);

  double flux_scale = 1.0;
  for (std::size_t n = 0; n < lay.nodes; ++n) flux_scale += boundary.injection[n] + boundary.offtake[n];
  const double m_floor = 1e-2 * flux_scale;  // keeps the steady Jacobian regular at zero flow

  Eigen::VectorXd r(static_cast<Eigen::Index>(lay.size));
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<bool> is_pressure(lay.size, false);
  for (std::size_t n = 0; n < lay.nodes; ++n) is_pressure[n] = true;
  for (std::size_t k = 0; k < grids_.size(); ++k) {
    for (int i = 1; i < grids_[k].segments; ++i) is_pressure[lay.p(grids_[k], k, i)] = true;
  }
  std::vector<bool> momentum_row(lay.size, false);

  auto assemble = [&](const Eigen::VectorXd& v) {
    trip.clear();
    std::size_t row = 0;
    for (std::size_t k = 0; k < grids_.size(); ++k) {
      const auto& g = grids_[k];
      const auto& pipe = net.pipes[k];
      const double a = pipe_area(pipe);
      const double kf = pipe.friction * c2 / (2.0 * pipe.diameter * a * a);
      const double gs = pipe.length > 0.0 ? g_acc * (pipe.height_change / pipe.length) / c2 : 0.0;
      const double cc = steady ? 0.0 : a * g.dx / (c2 * dt);
      const double ci = steady ? 0.0 : g.dx / (a * dt);
      for (int i = 0; i < g.segments; ++i) {
        const std::size_t pl = lay.p(g, k, i), pr = lay.p(g, k, i + 1);
        const std::size_t ml = lay.m(k, i), mr = lay.m(k, i + 1);
        const double pbar = 0.5 * (v[pl] + v[pr]);
        const double mbar = 0.5 * (v[ml] + v[mr]);
        double storage_p = 0.0, storage_m = 0.0;
        if (!steady) {
          storage_p = pbar - 0.5 * (x_old[pl] + x_old[pr]);
          storage_m = mbar - 0.5 * (x_old[ml] + x_old[mr]);
        }
        // continuity
        r[row] = cc * storage_p + (v[mr] - v[ml]);
        trip.emplace_back(row, pl, 0.5 * cc);
        trip.emplace_back(row, pr, 0.5 * cc);
        trip.emplace_back(row, mr, 1.0);
        trip.emplace_back(row, ml, -1.0);
        ++row;
        // momentum
        const double fr = kf * mbar * std::abs(mbar) / pbar;
        r[row] = ci * storage_m + (v[pr] - v[pl]) + g.dx * (fr + gs * pbar);
        momentum_row[row] = true;
        const double dfdp = g.dx * 0.5 * (-fr / pbar + gs);
        const double mabs = steady ? std::max(std::abs(mbar), m_floor) : std::abs(mbar);
        const double dfdm = g.dx * kf * mabs / pbar;
        trip.emplace_back(row, pl, -1.0 + dfdp);
        trip.emplace_back(row, pr, 1.0 + dfdp);
        trip.emplace_back(row, ml, 0.5 * ci + dfdm);
        trip.emplace_back(row, mr, 0.5 * ci + dfdm);
        ++row;
      }
    }
    // node balances: inflow - outflow + injection - offtake
    const std::size_t first_node_row = row;
    for (std::size_t n = 0; n < lay.nodes; ++n) r[row + n] = boundary.injection[n] - boundary.offtake[n];
    for (std::size_t k = 0; k < grids_.size(); ++k) {
      const auto& g = grids_[k];
      const std::size_t m0 = lay.m(k, 0), mn = lay.m(k, g.segments);
      r[row + g.from_node] -= v[m0];
      trip.emplace_back(row + g.from_node, m0, -1.0);
      r[row + g.to_node] += v[mn];
      trip.emplace_back(row + g.to_node, mn, 1.0);
    }
    for (std::size_t c = 0; c < comp_from.size(); ++c) {
      const std::size_t mc = lay.compressors + c;
      r[row + comp_from[c]] -= v[mc];
      trip.emplace_back(row + comp_from[c], mc, -1.0);
      r[row + comp_to[c]] += v[mc];
      trip.emplace_back(row + comp_to[c], mc, 1.0);
    }
    if (anchored) {
      // The anchor row becomes p = p_ref; drop its balance entries.
      const std::size_t ar = first_node_row + anchor;
      trip.erase(std::remove_if(trip.begin(), trip.end(),
                                [&](const Eigen::Triplet<double>& t) {
                                  return static_cast<std::size_t>(t.row()) == ar;
                                }),
                 trip.end());
      r[ar] = v[anchor] - anchor_pressure;
      momentum_row[ar] = true;
      trip.emplace_back(ar, anchor, 1.0);
    }
    row += lay.nodes;
    for (std::size_t c = 0; c < comp_from.size(); ++c) {
      const double ratio = net.compressors[c].ratio;
      r[row] = v[comp_to[c]] - ratio * v[comp_from[c]];
      momentum_row[row] = true;
      trip.emplace_back(row, comp_to[c], 1.0);
      trip.emplace_back(row, comp_from[c], -ratio);
      ++row;
    }
  };

  auto scaled_error = [&](const Eigen::VectorXd& v) {
    double m_scale = flux_scale, p_scale = 1e5;
    for (std::size_t i = 0; i < lay.size; ++i) {
      if (is_pressure[i]) {
        p_scale = std::max(p_scale, std::abs(v[i]));
      } else {
        m_scale = std::max(m_scale, std::abs(v[i]));
      }
    }
    double err = 0.0;
    for (std::size_t i = 0; i < lay.size; ++i) {
      err = std::max(err, std::abs(r[i]) / (momentum_row[i] ? p_scale : m_scale));
    }
    return err;
  };

  const int cap = steady ? 4 * options_.max_iterations : options_.max_iterations;
  Eigen::SparseMatrix<double> jac(static_cast<Eigen::Index>(lay.size), static_cast<Eigen::Index>(lay.size));
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool pattern_ready = false;
  bool polishing = false;
  for (int it = 0;; ++it) {
    assemble(x);
    const double err = scaled_error(x);
    if (!std::isfinite(err)) throw NonConvergence("gas solver produced a non-finite residual");
    if (polishing) break;
    if (err < options_.tolerance) {
      polishing = true;  // one more step so mass residuals do not accumulate
    } else if (it >= cap) {
      char msg[128];
      std::snprintf(msg, sizeof msg, "gas solver did not converge in %d iterations (residual %.3g)", cap, err);
      throw NonConvergence(msg);
    }
    jac.setFromTriplets(trip.begin(), trip.end());
    if (!pattern_ready) {
      lu.analyzePattern(jac);
      pattern_ready = true;
    }
    lu.factorize(jac);
    if (lu.info() != Eigen::Success) {
      if (steady) throw InitInfeasible("steady gas system is singular (is every node tied to the reference?)");
      throw NonConvergence("singular gas Jacobian");
    }
    const Eigen::VectorXd step = lu.solve(-r);
    double alpha = 1.0;
    for (int halving = 0;; ++halving) {
      bool positive = true;
      for (std::size_t i = 0; i < lay.size && positive; ++i) {
        if (is_pressure[i] && x[i] + alpha * step[i] <= 0.0) positive = false;
      }
      if (positive) break;
      if (halving >= 20) {
        if (steady) throw InitInfeasible("no positive pressure profile balances the flows");
        throw NegativePressure("gas pressure left the physical domain");
      }
      alpha *= 0.5;
    }
    x += alpha * step;
    if (polishing) {
      assemble(x);
      break;
    }
  }

  GasState out;
  out.time = previous ? previous->time + dt : guess.time;
  out.node_pressure.resize(lay.nodes);
  for (std::size_t n = 0; n < lay.nodes; ++n) out.node_pressure[n] = x[n];
  out.pressure.resize(grids_.size());
  out.flow.resize(grids_.size());
  for (std::size_t k = 0; k < grids_.size(); ++k) {
    const auto& g = grids_[k];
    out.pressure[k].resize(g.segments + 1);
    out.flow[k].resize(g.segments + 1);
    for (int i = 0; i <= g.segments; ++i) {
      out.pressure[k][i] = x[lay.p(g, k, i)];
      out.flow[k][i] = x[lay.m(k, i)];
    }
  }
  out.compressor_flow.resize(comp_from.size());
  for (std::size_t c = 0; c < comp_from.size(); ++c) out.compressor_flow[c] = x[lay.compressors + c];
  for (std::size_t n = 0; n < lay.nodes; ++n) {
    if (!(out.node_pressure[n] > 0.0)) {
      if (steady) throw InitInfeasible("non-positive pressure at node " + net.nodes[n].id);
      throw NegativePressure("non-positive pressure at node " + net.nodes[n].id);
    }
  }
  if (anchored) {
    // Whatever the anchor row no longer balances is supplied through it.
    double net_in = boundary.injection[anchor] - boundary.offtake[anchor];
    for (std::size_t k = 0; k < grids_.size(); ++k) {
      if (grids_[k].from_node == anchor) net_in -= out.flow[k].front();
      if (grids_[k].to_node == anchor) net_in += out.flow[k].back();
    }
    for (std::size_t c = 0; c < comp_from.size(); ++c) {
      if (comp_from[c] == anchor) net_in -= out.compressor_flow[c];
      if (comp_to[c] == anchor) net_in += out.compressor_flow[c];
    }
    out.anchor_injection = -net_in;
  }
  return out;
}

GasState Simulator::steady_state_init(const GasBoundary& boundary) const {
  const auto& net = *network_;
  if (!net.reference) throw InitInfeasible("gas network has no pressure reference");
  auto ref = net.node_index(net.reference->node);
  if (!ref) throw DanglingNode("pressure reference at unknown node " + net.reference->node);

  // Flat start: propagate the reference pressure through pipes and compressor ratios.
  std::vector<double> p(net.nodes.size(), 0.0);
  std::vector<bool> seen(net.nodes.size(), false);
  std::deque<std::size_t> queue{*ref};
  p[*ref] = net.reference->pressure;
  seen[*ref] = true;
  while (!queue.empty()) {
    const std::size_t n = queue.front();
    queue.pop_front();
    auto visit = [&](std::size_t other, double value) {
      if (seen[other]) return;
      seen[other] = true;
      p[other] = value;
      queue.push_back(other);
    };
    for (const auto& g : grids_) {
      if (g.from_node == n) visit(g.to_node, p[n]);
      if (g.to_node == n) visit(g.from_node, p[n]);
    }
    for (const auto& c : net.compressors) {
      const std::size_t a = *net.node_index(c.from_node), b = *net.node_index(c.to_node);
      if (a == n) visit(b, p[n] * c.ratio);
      if (b == n) visit(a, p[n] / c.ratio);
    }
  }
  for (std::size_t n = 0; n < net.nodes.size(); ++n) {
    if (!seen[n]) throw InitInfeasible("gas node " + net.nodes[n].id + " is not connected to the pressure reference");
  }

  GasState guess;
  guess.node_pressure = p;
  for (const auto& g : grids_) {
    std::vector<double> pp(g.segments + 1);
    for (int i = 0; i <= g.segments; ++i) {
      const double w = static_cast<double>(i) / g.segments;
      pp[i] = (1.0 - w) * p[g.from_node] + w * p[g.to_node];
    }
    guess.pressure.push_back(pp);
    guess.flow.emplace_back(g.segments + 1, 0.0);
  }
  guess.compressor_flow.assign(net.compressors.size(), 0.0);

  GasState s = solve(nullptr, boundary, 0.0, true, guess);
  for (std::size_t n = 0; n < net.nodes.size(); ++n) {
    const auto& node = net.nodes[n];
    const double v = s.node_pressure[n];
    if (v < node.p_min * (1.0 - 1e-9) || v > node.p_max * (1.0 + 1e-9)) {
      char msg[160];
      std::snprintf(msg, sizeof msg, "steady pressure %.3f bar at node %s is outside [%.1f, %.1f] bar",
                    units::pa_to_bar(v), node.id.c_str(), units::pa_to_bar(node.p_min),
                    units::pa_to_bar(node.p_max));
      throw InitInfeasible(msg);
    }
  }
  return s;
}

GasState Simulator::step_transient(const GasState& state, const GasBoundary& boundary, double dt) const {
  if (!(dt > 0.0)) throw NonConvergence("time step must be positive");
  for (double o : boundary.offtake) {
    if (o < 0.0) throw NonConvergence("negative gas off-take");
  }
  return solve(&state, boundary, dt, false, state);
}

LinepackRecord Simulator::compute_linepack(const GasState& state) const {
  const double c2 = properties_.sound_speed * properties_.sound_speed;
  LinepackRecord rec;
  rec.time = state.time;
  rec.zone_kg.assign(zones_.ids.size(), 0.0);
  for (std::size_t k = 0; k < grids_.size(); ++k) {
    const auto& g = grids_[k];
    const double a = pipe_area(network_->pipes[k]);
    double sum = 0.0;
    for (int i = 0; i < g.segments; ++i) sum += 0.5 * (state.pressure[k][i] + state.pressure[k][i + 1]);
    rec.zone_kg[pipe_zone_[k]] += sum * a * g.dx / c2;
  }
  for (double z : rec.zone_kg) rec.total_kg += z;
  rec.total_mcm = units::kg_to_mcm(rec.total_kg, properties_.standard_density);
  return rec;
}

double Simulator::zone_linepack_at(std::size_t zone, ViolationKind bound) const {
  const double c2 = properties_.sound_speed * properties_.sound_speed;
  double total = 0.0;
  for (std::size_t k = 0; k < grids_.size(); ++k) {
    if (pipe_zone_[k] != zone) continue;
    const auto& a = network_->nodes[grids_[k].from_node];
    const auto& b = network_->nodes[grids_[k].to_node];
    const double p = bound == ViolationKind::Min ? std::max(a.p_min, b.p_min) : std::min(a.p_max, b.p_max);
    total += p * pipe_area(network_->pipes[k]) * network_->pipes[k].length / c2;
  }
  return total;
}

// ---------------------------------------------------------------------------

Schedules default_schedules(const GasNetwork& net) {
  Schedules s;
  for (const auto& inj : net.injectors) s.injector_rate.push_back(inj.scheduled_rate);
  return s;
}

GasBoundary boundary_at(const Simulator& sim, const Schedules& schedules, double t) {
  const auto& net = sim.network();
  GasBoundary b = sim.empty_boundary();
  for (std::size_t i = 0; i < net.injectors.size(); ++i) {
    auto n = net.node_index(net.injectors[i].node);
    if (!n) throw DanglingNode("injector " + net.injectors[i].id + " at unknown node");
    // Injectors without a schedule entry run at their scheduled rate.
    b.injection[*n] += i < schedules.injector_rate.size() ? schedules.injector_rate[i]
                                                          : net.injectors[i].scheduled_rate;
  }
  const auto hour = static_cast<std::size_t>(std::max(0.0, std::floor(t / units::kSecondsPerHour + 1e-9)));
  for (const auto& d : schedules.demands) {
    if (d.profile.empty()) continue;
    auto n = net.node_index(d.node);
    if (!n) throw DanglingNode("gas demand at unknown node " + d.node);
    b.offtake[*n] += d.profile[std::min(hour, d.profile.size() - 1)];
  }
  return b;
}

std::vector<PressureViolation> detect_violations(const Simulator& sim, const std::vector<GasState>& trajectory) {
  std::vector<PressureViolation> out;
  if (trajectory.empty()) return out;
  const auto& net = sim.network();
  const double sample = trajectory.size() > 1 ? trajectory[1].time - trajectory[0].time : sim.options().dt;
  const int debounce = std::max(1, sim.options().debounce_steps);
  for (std::size_t n = 0; n < net.nodes.size(); ++n) {
    const auto& node = net.nodes[n];
    for (ViolationKind kind : {ViolationKind::Min, ViolationKind::Max}) {
      int run = 0;
      PressureViolation cur;
      auto close = [&] {
        if (run >= debounce) {
          cur.duration = run * sample;
          out.push_back(cur);
        }
        run = 0;
      };
      for (const auto& s : trajectory) {
        const double p = s.node_pressure[n];
        const bool bad = kind == ViolationKind::Min ? p < node.p_min : p > node.p_max;
        if (!bad) {
          close();
          continue;
        }
        if (run == 0) {
          cur = PressureViolation{n, node.id, kind, s.time, 0.0, p, s.time};
        } else if (kind == ViolationKind::Min ? p < cur.worst_pressure : p > cur.worst_pressure) {
          cur.worst_pressure = p;
          cur.worst_time = s.time;
        }
        ++run;
      }
      close();
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const PressureViolation& a, const PressureViolation& b) {
    if (a.onset != b.onset) return a.onset < b.onset;
    if (a.node_id != b.node_id) return natural_less(a.node_id, b.node_id);
    return a.kind < b.kind;
  });
  return out;
}

double DayResult::mass_balance_error() const {
  if (linepack.empty()) return 0.0;
  return std::abs((linepack.back().total_kg - linepack.front().total_kg) - (injected_kg - offtaken_kg));
}

DayResult simulate_day(const Simulator& sim, const Schedules& schedules, double horizon_s) {
  const double dt = sim.options().dt;
  const auto& net = sim.network();

  // Day-mean boundary for the initial steady state.
  GasBoundary mean = boundary_at(sim, schedules, 0.0);
  std::fill(mean.offtake.begin(), mean.offtake.end(), 0.0);
  const int hours = std::max(1, static_cast<int>(std::ceil(horizon_s / units::kSecondsPerHour - 1e-9)));
  for (int h = 0; h < hours; ++h) {
    const auto b = boundary_at(sim, schedules, h * units::kSecondsPerHour);
    for (std::size_t n = 0; n < net.nodes.size(); ++n) mean.offtake[n] += b.offtake[n] / hours;
  }
  double in = 0.0, out = 0.0;
  for (std::size_t n = 0; n < net.nodes.size(); ++n) {
    in += mean.injection[n];
    out += mean.offtake[n];
  }
  if (in > 0.0 && out > 0.0 && std::abs(in - out) > 1e-12 * in) {
    for (double& o : mean.offtake) o *= in / out;
  }

  DayResult day;
  day.trajectory.push_back(sim.steady_state_init(mean));
  day.trajectory.back().anchor_injection = 0.0;
  day.linepack.push_back(sim.compute_linepack(day.trajectory.back()));
  double t = 0.0;
  while (t < horizon_s - 1e-9) {
    const double h = std::min(dt, horizon_s - t);
    const GasBoundary b = boundary_at(sim, schedules, t);
    GasState next = sim.step_transient(day.trajectory.back(), b, h);
    next.time = t + h;
    for (std::size_t n = 0; n < net.nodes.size(); ++n) {
      day.injected_kg += h * b.injection[n];
      day.offtaken_kg += h * b.offtake[n];
    }
    if (sim.options().hold_reference) day.injected_kg += h * next.anchor_injection;
    day.linepack.push_back(sim.compute_linepack(next));
    day.trajectory.push_back(std::move(next));
    t += h;
  }
  day.violations = detect_violations(sim, day.trajectory);
  const double lp0 = day.linepack.front().total_kg;
  day.closure = lp0 > 0.0 ? std::abs(day.linepack.back().total_kg - lp0) / lp0 : 0.0;
  return day;
}

// ---------------------------------------------------------------------------

Schedules reallocate_injections(const Simulator& sim, const Schedules& schedules,
                                const std::vector<PressureViolation>& violations,
                                const std::vector<LinepackRecord>& linepack) {
  const auto& net = sim.network();
  const auto& zones = sim.zones();
  const std::size_t nz = zones.ids.size();

  std::vector<bool> violated(nz, false);
  std::vector<double> onset(nz, 0.0), worst(nz, 0.0);
  for (const auto& v : violations) {
    if (v.kind != ViolationKind::Max) continue;
    const std::size_t z = zones.zone_of_node[v.node];
    const double excess = (v.worst_pressure - net.nodes[v.node].p_max) / net.nodes[v.node].p_max;
    if (!violated[z] || v.onset < onset[z]) onset[z] = v.onset;
    worst[z] = std::max(worst[z], excess);
    violated[z] = true;
  }
  if (std::none_of(violated.begin(), violated.end(), [](bool b) { return b; })) return schedules;

  Schedules out = schedules;
  out.injector_rate.resize(net.injectors.size(), 0.0);
  std::vector<std::size_t> zone_of_injector(net.injectors.size());
  std::vector<double> zone_injection(nz, 0.0), zone_headroom(nz, 0.0);
  for (std::size_t i = 0; i < net.injectors.size(); ++i) {
    const std::size_t z = zones.zone_of_node[*net.node_index(net.injectors[i].node)];
    zone_of_injector[i] = z;
    zone_injection[z] += out.injector_rate[i];
    zone_headroom[z] += std::max(0.0, net.injectors[i].nominal_capacity - out.injector_rate[i]);
  }

  auto record_at = [&](double t) -> const LinepackRecord* {
    const LinepackRecord* best = nullptr;
    for (const auto& r : linepack) {
      if (r.time <= t + 1e-9) best = &r;
    }
    return best;
  };

  // Overflow of a violated zone: its average linepack gain up to the onset,
  // but at least the relative pressure excess applied to its injection.
  double overflow_total = 0.0;
  for (std::size_t z = 0; z < nz; ++z) {
    if (!violated[z]) continue;
    if (zone_injection[z] <= 0.0) {
      throw ReallocationImpossible("zone " + zones.ids[z] + " has a max-pressure violation but no injection to move");
    }
    double rate = worst[z] * zone_injection[z];
    const auto* r0 = linepack.empty() ? nullptr : &linepack.front();
    const auto* r1 = record_at(onset[z]);
    if (r0 && r1 && r1->time > r0->time) rate = std::max(rate, (r1->zone_kg[z] - r0->zone_kg[z]) / (r1->time - r0->time));
    rate = std::min(rate, zone_injection[z]);
    for (std::size_t i = 0; i < net.injectors.size(); ++i) {
      if (zone_of_injector[i] == z) out.injector_rate[i] -= rate * schedules.injector_rate[i] / zone_injection[z];
    }
    overflow_total += rate;
  }

  // Water-fill the overflow into the other zones by spare linepack.
  double earliest = 0.0;
  bool first = true;
  for (std::size_t z = 0; z < nz; ++z) {
    if (violated[z] && (first || onset[z] < earliest)) {
      earliest = onset[z];
      first = false;
    }
  }
  const auto* now = record_at(earliest);
  std::vector<double> weight(nz, 0.0), grant(nz, 0.0);
  std::vector<bool> active(nz, false);
  for (std::size_t z = 0; z < nz; ++z) {
    if (violated[z] || zone_headroom[z] <= 0.0) continue;
    active[z] = true;
    const double lp = now ? now->zone_kg[z] : 0.0;
    weight[z] = std::max(0.0, sim.zone_linepack_at(z, ViolationKind::Max) - lp);
  }
  double remaining = overflow_total;
  while (remaining > 1e-12 * std::max(1.0, overflow_total)) {
    double wsum = 0.0, hsum = 0.0;
    for (std::size_t z = 0; z < nz; ++z) {
      if (!active[z]) continue;
      wsum += weight[z];
      hsum += zone_headroom[z] - grant[z];
    }
    if (hsum <= 0.0) throw ReallocationImpossible("every candidate injector is at nominal capacity");
    // Zones without spare linepack by the weight rule share by headroom instead.
    auto share = [&](std::size_t z) {
      return wsum > 0.0 ? remaining * weight[z] / wsum : remaining * (zone_headroom[z] - grant[z]) / hsum;
    };
    bool capped = false;
    for (std::size_t z = 0; z < nz; ++z) {
      if (active[z] && grant[z] + share(z) >= zone_headroom[z]) capped = true;
    }
    if (!capped) {
      for (std::size_t z = 0; z < nz; ++z) {
        if (active[z]) grant[z] += share(z);
      }
      break;
    }
    double taken = 0.0;
    for (std::size_t z = 0; z < nz; ++z) {
      if (active[z] && grant[z] + share(z) >= zone_headroom[z]) {
        taken += zone_headroom[z] - grant[z];
        grant[z] = zone_headroom[z];
        active[z] = false;
      }
    }
    remaining -= taken;
  }
  for (std::size_t i = 0; i < net.injectors.size(); ++i) {
    const std::size_t z = zone_of_injector[i];
    if (grant[z] <= 0.0 || zone_headroom[z] <= 0.0) continue;
    const double head = std::max(0.0, net.injectors[i].nominal_capacity - schedules.injector_rate[i]);
    out.injector_rate[i] += grant[z] * head / zone_headroom[z];
  }
  return out;
}

// ---------------------------------------------------------------------------

void write_pressure_csv(std::ostream& out, const Simulator& sim, const std::vector<GasState>& trajectory,
                        int stride) {
  const auto& net = sim.network();
  out << "time_s,node_id,pressure_bar\n";
  char buf[64];
  for (std::size_t s = 0; s < trajectory.size(); s += static_cast<std::size_t>(std::max(1, stride))) {
    for (std::size_t n = 0; n < net.nodes.size(); ++n) {
      std::snprintf(buf, sizeof buf, "%.0f", trajectory[s].time);
      out << buf << ',' << net.nodes[n].id << ',';
      std::snprintf(buf, sizeof buf, "%.6f", units::pa_to_bar(trajectory[s].node_pressure[n]));
      out << buf << '\n';
    }
  }
}

void write_linepack_csv(std::ostream& out, const Simulator& sim, const std::vector<LinepackRecord>& series,
                        int stride) {
  const auto& zones = sim.zones();
  out << "time_s,zone_id,linepack_mcm\n";
  char buf[64];
  const double rho = sim.properties().standard_density;
  for (std::size_t s = 0; s < series.size(); s += static_cast<std::size_t>(std::max(1, stride))) {
    for (std::size_t z = 0; z < zones.ids.size(); ++z) {
      std::snprintf(buf, sizeof buf, "%.0f", series[s].time);
      out << buf << ',' << zones.ids[z] << ',';
      std::snprintf(buf, sizeof buf, "%.9f", units::kg_to_mcm(series[s].zone_kg[z], rho));
      out << buf << '\n';
    }
  }
}

}  // namespace nexus::gas
