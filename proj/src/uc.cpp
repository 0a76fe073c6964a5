#include "nexus/uc.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/SparseLU>

#include "nexus/error.hpp"

namespace nexus {

namespace {

using Coefs = std::vector<std::pair<int, double>>;

double shortfall_cost(const UcOptions& o) {
  return o.reserve_shortfall_cost >= 0.0 ? o.reserve_shortfall_cost : 0.5 * o.voll;
}
double spill_cost(const UcOptions& o) { return o.spill_cost >= 0.0 ? o.spill_cost : o.voll; }

void check_series(const std::vector<std::vector<double>>& series, std::size_t count, int horizon,
                  const char* what) {
  if (series.size() != count) {
    std::ostringstream msg;
    msg << what << ": expected " << count << " series, got " << series.size();
    throw DimensionMismatch(msg.str());
  }
  for (const auto& s : series) {
    if (static_cast<int>(s.size()) != horizon) {
      std::ostringstream msg;
      msg << what << ": series length " << s.size() << " differs from horizon " << horizon;
      throw DimensionMismatch(msg.str());
    }
  }
}

bool provides_reserve(const Generator& g) { return !is_renewable(g.tech); }

std::vector<std::size_t> choose_slacks(const ElectricNetwork& net, bool& auto_assigned) {
  std::vector<std::size_t> slacks;
  auto_assigned = false;
  for (const auto& island : electric_islands(net)) {
    std::optional<std::size_t> ref;
    for (std::size_t b : island) {
      if (net.buses[b].reference) {
        ref = b;
        break;
      }
    }
    if (!ref) {
      auto_assigned = true;
      ref = *std::min_element(island.begin(), island.end(), [&](std::size_t a, std::size_t b) {
        return natural_less(net.buses[a].id, net.buses[b].id);
      });
    }
    slacks.push_back(*ref);
  }
  return slacks;
}

struct LineEnds {
  std::size_t from, to;
  double susceptance;  // MW per radian
};

std::vector<LineEnds> line_ends(const ElectricNetwork& net) {
  std::vector<LineEnds> ends;
  for (const auto& l : net.lines) {
    const auto f = net.bus_index(l.from_bus);
    const auto t = net.bus_index(l.to_bus);
    if (!f || !t) throw SingularTopology("line " + l.id + " has an unknown endpoint");
    ends.push_back({*f, *t, net.base_mva / l.reactance});
  }
  return ends;
}

}  // namespace

int UcProblem::binaries_per_class() const {
  return static_cast<int>(network->generators.size()) * inputs.horizon;
}

void UcProblem::add_fuel_row(const FuelRow& row) {
  Coefs coefs;
  for (const auto& term : row.terms) {
    if (term.generator >= p.size() || term.period < 0 || term.period >= inputs.horizon) {
      throw DimensionMismatch("fuel row " + row.label + " references an unknown generator or period");
    }
    coefs.emplace_back(p[term.generator][term.period], term.coef);
  }
  model.add_row(-lp::kInf, row.rhs, coefs);
  fuel_rows.push_back(row);
}

UcProblem build_uc(const CoupledSystem& sys, UcInputs inputs, UcOptions options) {
  return build_uc(sys.electric_ptr(), std::move(inputs), options);
}

UcProblem build_uc(std::shared_ptr<const ElectricNetwork> network, UcInputs inputs, UcOptions options) {
  const ElectricNetwork& net = *network;
  const int H = inputs.horizon;
  if (H < 1) throw DimensionMismatch("horizon must be at least one period");
  if (!(inputs.dt_hours > 0.0)) throw DimensionMismatch("period length must be positive");
  check_series(inputs.bus_load, net.buses.size(), H, "bus load");
  check_series(inputs.cluster_available, net.clusters.size(), H, "cluster availability");
  check_series(inputs.interconnector_import, net.interconnectors.size(), H, "interconnector exchange");
  if (!inputs.initial.empty() && inputs.initial.size() != net.generators.size()) {
    throw DimensionMismatch("initial state must list every generator");
  }

  UcProblem pb;
  pb.network = network;
  pb.inputs = std::move(inputs);
  pb.options = options;
  const auto& in = pb.inputs;
  const double dt = in.dt_hours;
  auto& m = pb.model;

  const std::size_t G = net.generators.size(), B = net.buses.size(), C = net.clusters.size();
  const auto ends = line_ends(net);
  pb.slack_buses = choose_slacks(net, pb.reference_auto_assigned);

  // Lexicographic tie-break: lower generator id gets the smaller epsilon.
  std::vector<std::size_t> order(G);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return natural_less(net.generators[a].id, net.generators[b].id);
  });
  std::vector<double> rank(G);
  for (std::size_t k = 0; k < G; ++k) rank[order[k]] = static_cast<double>(k);

  auto add = [&](double exact, double perturbed, double lo, double up) {
    pb.exact_cost.push_back(exact);
    return m.add_col(perturbed, lo, up);
  };
  auto grid = [&](std::size_t n) { return std::vector<std::vector<int>>(n, std::vector<int>(H, -1)); };
  pb.p = grid(G);
  pb.u = grid(G);
  pb.startup = grid(G);
  pb.shutdown = grid(G);
  pb.pump = grid(G);
  pb.shed = grid(B);
  pb.spill = grid(B);
  pb.theta = grid(B);
  pb.curtail = grid(C);

  // Initial conditions: forced on/off periods from the pre-horizon state.
  std::vector<int> forced_on(G, 0), forced_off(G, 0);
  for (std::size_t g = 0; g < G; ++g) {
    if (in.initial.empty()) continue;
    const auto& s = in.initial[g];
    const auto& gen = net.generators[g];
    if (s.on) {
      forced_on[g] = std::max(0, gen.min_up - s.hours_in_state);
    } else {
      forced_off[g] = std::max(0, gen.min_down - s.hours_in_state);
    }
  }

  double theta_box = 0.0;
  for (std::size_t l = 0; l < ends.size(); ++l) theta_box += net.lines[l].rating / ends[l].susceptance;
  theta_box = std::max(theta_box, 1.0);
  std::vector<char> is_slack(B, 0);
  for (std::size_t b : pb.slack_buses) is_slack[b] = 1;

  for (int t = 0; t < H; ++t) {
    for (std::size_t g = 0; g < G; ++g) {
      const auto& gen = net.generators[g];
      const double c = gen.cost_energy * dt;
      pb.p[g][t] = add(c, c + options.tie_break * rank[g] * dt, 0.0, gen.p_max);
      double ulo = 0.0, uup = 1.0;
      if (t < forced_on[g]) ulo = 1.0;
      if (t < forced_off[g]) uup = 0.0;
      pb.u[g][t] = add(0.0, 0.0, ulo, uup);
      pb.commitment_columns.push_back(pb.u[g][t]);
      pb.startup[g][t] = add(gen.cost_startup, gen.cost_startup, 0.0, 1.0);
      pb.shutdown[g][t] = add(gen.cost_shutdown, gen.cost_shutdown, 0.0, 1.0);
      if (gen.tech == Tech::PumpedStorage && gen.pump_capacity > 0.0) {
        pb.pump[g][t] = add(0.0, 0.0, 0.0, gen.pump_capacity);
      }
    }
    for (std::size_t b = 0; b < B; ++b) {
      const double load = std::max(0.0, in.bus_load[b][t]);
      pb.shed[b][t] = add(options.voll * dt, options.voll * dt, 0.0, load);
      pb.spill[b][t] = add(spill_cost(options) * dt, spill_cost(options) * dt, 0.0, lp::kInf);
      const double box = is_slack[b] ? 0.0 : theta_box;
      pb.theta[b][t] = add(0.0, 0.0, -box, box);
    }
    for (std::size_t c = 0; c < C; ++c) {
      const double avail = std::max(0.0, in.cluster_available[c][t]);
      const double cost = net.clusters[c].curtailment_cost * dt;
      pb.curtail[c][t] = add(cost, cost, 0.0, avail);
    }
  }
  if (options.reserve) {
    pb.reserve_shortfall.assign(H, -1);
    for (int t = 0; t < H; ++t) {
      const double c = shortfall_cost(options) * dt;
      pb.reserve_shortfall[t] = add(c, c, 0.0, options.reserve_mw);
    }
  }

  // Nodal balance.
  std::vector<std::vector<std::size_t>> gens_at(B), clusters_at(B), ics_at(B);
  for (std::size_t g = 0; g < G; ++g) gens_at[*net.bus_index(net.generators[g].bus)].push_back(g);
  for (std::size_t c = 0; c < C; ++c) clusters_at[*net.bus_index(net.clusters[c].bus)].push_back(c);
  for (std::size_t i = 0; i < net.interconnectors.size(); ++i) {
    ics_at[*net.bus_index(net.interconnectors[i].bus)].push_back(i);
  }
  pb.balance_row = grid(B);
  for (int t = 0; t < H; ++t) {
    std::vector<Coefs> rows(B);
    for (std::size_t l = 0; l < ends.size(); ++l) {
      const auto& e = ends[l];
      // flow = s (theta_f - theta_t) leaves `from` and enters `to`.
      rows[e.from].emplace_back(pb.theta[e.from][t], -e.susceptance);
      rows[e.from].emplace_back(pb.theta[e.to][t], e.susceptance);
      rows[e.to].emplace_back(pb.theta[e.from][t], e.susceptance);
      rows[e.to].emplace_back(pb.theta[e.to][t], -e.susceptance);
    }
    for (std::size_t b = 0; b < B; ++b) {
      auto& row = rows[b];
      double rhs = in.bus_load[b][t];
      for (std::size_t g : gens_at[b]) {
        row.emplace_back(pb.p[g][t], 1.0);
        if (pb.pump[g][t] >= 0) row.emplace_back(pb.pump[g][t], -1.0);
      }
      for (std::size_t c : clusters_at[b]) {
        row.emplace_back(pb.curtail[c][t], -1.0);
        rhs -= std::max(0.0, in.cluster_available[c][t]);
      }
      for (std::size_t i : ics_at[b]) rhs -= in.interconnector_import[i][t];
      row.emplace_back(pb.shed[b][t], 1.0);
      row.emplace_back(pb.spill[b][t], -1.0);
      pb.balance_row[b][t] = m.add_row(rhs, rhs, row);
    }
  }

  // Line ratings.
  pb.line_row = grid(ends.size());
  for (int t = 0; t < H; ++t) {
    for (std::size_t l = 0; l < ends.size(); ++l) {
      const auto& e = ends[l];
      const Coefs row = {{pb.theta[e.from][t], e.susceptance}, {pb.theta[e.to][t], -e.susceptance}};
      pb.line_row[l][t] = m.add_row(-net.lines[l].rating, net.lines[l].rating, row);
    }
  }

  // Unit constraints.
  for (std::size_t g = 0; g < G; ++g) {
    const auto& gen = net.generators[g];
    const bool init_on = !in.initial.empty() && in.initial[g].on;
    const double p0 = init_on ? (in.initial[g].output > 0.0 ? in.initial[g].output : gen.p_min_stable) : 0.0;
    const double ru = gen.ramp_up * dt, rd = gen.ramp_down * dt;
    const double su = std::max(gen.p_min_stable, ru), sd = std::max(gen.p_min_stable, rd);
    for (int t = 0; t < H; ++t) {
      const int P = pb.p[g][t], U = pb.u[g][t], A = pb.startup[g][t], Bt = pb.shutdown[g][t];
      m.add_row(-lp::kInf, 0.0, Coefs{{P, 1.0}, {U, -gen.p_max}});
      if (gen.p_min_stable > 0.0) m.add_row(-lp::kInf, 0.0, Coefs{{P, -1.0}, {U, gen.p_min_stable}});

      // u_t - u_{t-1} - a_t + b_t = 0
      if (t == 0) {
        const double u0 = init_on ? 1.0 : 0.0;
        m.add_row(u0, u0, Coefs{{U, 1.0}, {A, -1.0}, {Bt, 1.0}});
      } else {
        m.add_row(0.0, 0.0, Coefs{{U, 1.0}, {pb.u[g][t - 1], -1.0}, {A, -1.0}, {Bt, 1.0}});
      }

      // Minimum up and down times.
      Coefs up_row{{U, -1.0}}, down_row{{U, 1.0}};
      for (int k = std::max(0, t - gen.min_up + 1); k <= t; ++k) up_row.emplace_back(pb.startup[g][k], 1.0);
      for (int k = std::max(0, t - gen.min_down + 1); k <= t; ++k) down_row.emplace_back(pb.shutdown[g][k], 1.0);
      m.add_row(-lp::kInf, 0.0, up_row);
      m.add_row(-lp::kInf, 1.0, down_row);

      // Ramps; rows that can never bind are left out.
      if (ru < gen.p_max) {
        if (t == 0) {
          m.add_row(-lp::kInf, p0 + (init_on ? ru : 0.0), Coefs{{P, 1.0}, {A, -su}});
        } else {
          m.add_row(-lp::kInf, 0.0, Coefs{{P, 1.0}, {pb.p[g][t - 1], -1.0}, {pb.u[g][t - 1], -ru}, {A, -su}});
        }
      }
      if (rd < gen.p_max) {
        if (t == 0) {
          m.add_row(-lp::kInf, -p0, Coefs{{P, -1.0}, {U, -rd}, {Bt, -sd}});
        } else {
          m.add_row(-lp::kInf, 0.0, Coefs{{pb.p[g][t - 1], 1.0}, {P, -1.0}, {U, -rd}, {Bt, -sd}});
        }
      }
    }
    if (gen.tech == Tech::PumpedStorage) {
      Coefs row;
      for (int t = 0; t < H; ++t) {
        row.emplace_back(pb.p[g][t], dt);
        if (pb.pump[g][t] >= 0) row.emplace_back(pb.pump[g][t], -options.pumped_storage_efficiency * dt);
      }
      m.add_row(-lp::kInf, gen.reservoir, row);
    }
  }

  // System spinning reserve.
  if (options.reserve) {
    for (int t = 0; t < H; ++t) {
      Coefs row;
      for (std::size_t g = 0; g < G; ++g) {
        const auto& gen = net.generators[g];
        if (!provides_reserve(gen)) continue;
        row.emplace_back(pb.u[g][t], gen.p_max);
        row.emplace_back(pb.p[g][t], -1.0);
      }
      row.emplace_back(pb.reserve_shortfall[t], 1.0);
      pb.reserve_row.push_back(m.add_row(options.reserve_mw, lp::kInf, row));
    }
  }
  return pb;
}

double DispatchResult::energy_not_served() const {
  double total = 0.0;
  for (const auto& bus : shed) {
    for (double v : bus) total += v * dt_hours;
  }
  return total;
}

DispatchResult solve_mip(const UcProblem& problem, double gap_target, double time_limit_s, long node_limit) {
  const auto start = std::chrono::steady_clock::now();
  mip::Options opt;
  opt.gap_target = gap_target;
  opt.time_limit_s = time_limit_s;
  opt.node_limit = node_limit;
  opt.log = std::getenv("NEXUS_MIP_LOG") != nullptr;
  const auto res = mip::solve(problem.model, problem.commitment_columns, opt);
  if (!res.has_solution()) {
    if (res.status == mip::Status::Infeasible) {
      throw SolverTimeout("unit commitment relaxation reported infeasible");
    }
    throw SolverTimeout("no feasible commitment found within the time limit");
  }

  const auto& net = *problem.network;
  const int H = problem.horizon();
  DispatchResult r;
  r.horizon = H;
  r.dt_hours = problem.dt();
  r.status = res.status;
  r.nodes = res.nodes;
  const auto& x = res.x;
  auto value = [&](int col) { return col >= 0 ? x[col] : 0.0; };
  auto clean = [](double v) { return std::abs(v) < 1e-9 ? 0.0 : v; };

  const std::size_t G = net.generators.size();
  r.output.assign(G, std::vector<double>(H));
  r.committed.assign(G, std::vector<int>(H));
  r.started.assign(G, std::vector<int>(H));
  r.stopped.assign(G, std::vector<int>(H));
  r.pumping.assign(G, std::vector<double>(H));
  for (std::size_t g = 0; g < G; ++g) {
    int prev = !problem.inputs.initial.empty() && problem.inputs.initial[g].on ? 1 : 0;
    for (int t = 0; t < H; ++t) {
      const int u = static_cast<int>(std::lround(value(problem.u[g][t])));
      r.committed[g][t] = u;
      // Integral commitments determine start-up and shut-down uniquely.
      r.started[g][t] = u > prev ? 1 : 0;
      r.stopped[g][t] = u < prev ? 1 : 0;
      prev = u;
      r.output[g][t] = u ? clean(value(problem.p[g][t])) : 0.0;
      r.pumping[g][t] = clean(value(problem.pump[g][t]));
    }
  }
  auto collect = [&](const std::vector<std::vector<int>>& cols) {
    std::vector<std::vector<double>> out(cols.size(), std::vector<double>(H));
    for (std::size_t i = 0; i < cols.size(); ++i) {
      for (int t = 0; t < H; ++t) out[i][t] = clean(value(cols[i][t]));
    }
    return out;
  };
  r.shed = collect(problem.shed);
  r.spilled = collect(problem.spill);
  r.curtailed = collect(problem.curtail);
  r.reserve_shortfall.assign(H, 0.0);
  for (int t = 0; t < H && !problem.reserve_shortfall.empty(); ++t) {
    r.reserve_shortfall[t] = clean(value(problem.reserve_shortfall[t]));
  }
  r.flows.assign(net.lines.size(), std::vector<double>(H));
  const auto ends = line_ends(net);
  for (std::size_t l = 0; l < ends.size(); ++l) {
    for (int t = 0; t < H; ++t) {
      r.flows[l][t] = clean(ends[l].susceptance *
                            (value(problem.theta[ends[l].from][t]) - value(problem.theta[ends[l].to][t])));
    }
  }

  r.objective = evaluate_objective(r, problem);
  // Bound and gap are reported against the exact objective; the tie-break
  // perturbation is far below the gap tolerance.
  r.bound = std::min(res.bound - (res.objective - r.objective), r.objective);
  r.gap = std::max(0.0, (r.objective - r.bound) / std::max(1.0, std::abs(r.objective)));
  r.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

double evaluate_objective(const DispatchResult& r, const UcProblem& problem) {
  const auto& net = *problem.network;
  const auto& o = problem.options;
  const double dt = problem.dt();
  double obj = 0.0;
  for (std::size_t g = 0; g < net.generators.size(); ++g) {
    const auto& gen = net.generators[g];
    for (int t = 0; t < problem.horizon(); ++t) {
      obj += r.output[g][t] * gen.cost_energy * dt + r.started[g][t] * gen.cost_startup +
             r.stopped[g][t] * gen.cost_shutdown;
    }
  }
  for (int t = 0; t < problem.horizon(); ++t) {
    double step = 0.0;
    for (std::size_t b = 0; b < net.buses.size(); ++b) {
      step += r.shed[b][t] * o.voll + r.spilled[b][t] * spill_cost(o);
    }
    for (std::size_t c = 0; c < net.clusters.size(); ++c) {
      step += r.curtailed[c][t] * net.clusters[c].curtailment_cost;
    }
    if (o.reserve) step += r.reserve_shortfall[t] * shortfall_cost(o);
    obj += dt * step;
  }
  return obj;
}

std::vector<double> compute_dc_flows(const ElectricNetwork& net, const std::vector<double>& injections,
                                     const std::vector<std::size_t>& slack_buses) {
  const std::size_t B = net.buses.size();
  if (injections.size() != B) throw DimensionMismatch("one injection per bus expected");
  const auto ends = line_ends(net);
  std::vector<double> theta(B, 0.0);
  for (const auto& island : electric_islands(net)) {
    std::optional<std::size_t> slack;
    for (std::size_t b : island) {
      const bool listed = std::find(slack_buses.begin(), slack_buses.end(), b) != slack_buses.end();
      if (slack_buses.empty() ? net.buses[b].reference : listed) {
        slack = b;
        break;
      }
    }
    if (!slack) {
      throw SingularTopology("island containing bus " + net.buses[island.front()].id +
                             " has no reference bus");
    }
    if (island.size() == 1) continue;
    // Reduced susceptance matrix over the non-slack buses of the island.
    std::vector<int> pos(B, -1);
    int n = 0;
    for (std::size_t b : island) {
      if (b != *slack) pos[b] = n++;
    }
    std::vector<Eigen::Triplet<double>> trip;
    for (const auto& e : ends) {
      const int f = pos[e.from], t = pos[e.to];
      if (f >= 0) trip.emplace_back(f, f, e.susceptance);
      if (t >= 0) trip.emplace_back(t, t, e.susceptance);
      if (f >= 0 && t >= 0) {
        trip.emplace_back(f, t, -e.susceptance);
        trip.emplace_back(t, f, -e.susceptance);
      }
    }
    Eigen::SparseMatrix<double> bmat(n, n);
    bmat.setFromTriplets(trip.begin(), trip.end());
    Eigen::VectorXd rhs(n);
    for (std::size_t b : island) {
      if (pos[b] >= 0) rhs[pos[b]] = injections[b];
    }
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(bmat);
    if (lu.info() != Eigen::Success) throw SingularTopology("susceptance matrix is singular");
    const Eigen::VectorXd sol = lu.solve(rhs);
    for (std::size_t b : island) {
      if (pos[b] >= 0) theta[b] = sol[pos[b]];
    }
  }
  std::vector<double> flows(ends.size());
  for (std::size_t l = 0; l < ends.size(); ++l) {
    flows[l] = ends[l].susceptance * (theta[ends[l].from] - theta[ends[l].to]);
  }
  return flows;
}

std::vector<std::vector<double>> nodal_injections(const DispatchResult& r, const UcProblem& problem) {
  const auto& net = *problem.network;
  const auto& in = problem.inputs;
  const int H = problem.horizon();
  std::vector<std::vector<double>> inj(net.buses.size(), std::vector<double>(H, 0.0));
  for (std::size_t b = 0; b < net.buses.size(); ++b) {
    for (int t = 0; t < H; ++t) inj[b][t] = -in.bus_load[b][t] + r.shed[b][t] - r.spilled[b][t];
  }
  for (std::size_t g = 0; g < net.generators.size(); ++g) {
    const std::size_t b = *net.bus_index(net.generators[g].bus);
    for (int t = 0; t < H; ++t) inj[b][t] += r.output[g][t] - r.pumping[g][t];
  }
  for (std::size_t c = 0; c < net.clusters.size(); ++c) {
    const std::size_t b = *net.bus_index(net.clusters[c].bus);
    for (int t = 0; t < H; ++t) inj[b][t] += std::max(0.0, in.cluster_available[c][t]) - r.curtailed[c][t];
  }
  for (std::size_t i = 0; i < net.interconnectors.size(); ++i) {
    const std::size_t b = *net.bus_index(net.interconnectors[i].bus);
    for (int t = 0; t < H; ++t) inj[b][t] += in.interconnector_import[i][t];
  }
  return inj;
}

std::vector<std::vector<double>> compute_dc_flows(const DispatchResult& r, const UcProblem& problem) {
  const auto inj = nodal_injections(r, problem);
  const auto& net = *problem.network;
  std::vector<std::vector<double>> flows(net.lines.size(), std::vector<double>(problem.horizon()));
  for (int t = 0; t < problem.horizon(); ++t) {
    std::vector<double> snap(net.buses.size());
    for (std::size_t b = 0; b < snap.size(); ++b) snap[b] = inj[b][t];
    const auto f = compute_dc_flows(net, snap, problem.slack_buses);
    for (std::size_t l = 0; l < f.size(); ++l) flows[l][t] = f[l];
  }
  return flows;
}

ValidationReport verify_dispatch(const DispatchResult& r, const UcProblem& problem) {
  const auto& net = *problem.network;
  const auto& in = problem.inputs;
  const int H = problem.horizon();
  const double dt = problem.dt();
  ValidationReport report;
  auto tol = [](double scale) { return 1e-6 * std::max(1.0, std::abs(scale)); };
  auto add = [&](std::string cat, const std::string& id, int t, const std::string& what) {
    report.findings.push_back({std::move(cat), id, what + " at t=" + std::to_string(t + 1)});
  };

  for (std::size_t g = 0; g < net.generators.size(); ++g) {
    const auto& gen = net.generators[g];
    int prev = !in.initial.empty() && in.initial[g].on ? 1 : 0;
    const int init_hours = in.initial.empty() ? 1000 : in.initial[g].hours_in_state;
    double p_prev = prev ? (in.initial[g].output > 0.0 ? in.initial[g].output : gen.p_min_stable) : 0.0;
    // Length of the current on/off run including pre-horizon hours.
    int run = init_hours;
    for (int t = 0; t < H; ++t) {
      const int u = r.committed[g][t];
      const double p = r.output[g][t];
      if (u != 0 && u != 1) add("generator", gen.id, t, "non-binary commitment");
      if (p > gen.p_max * u + tol(gen.p_max) || p < gen.p_min_stable * u - tol(gen.p_min_stable)) {
        add("generator", gen.id, t, "output outside committed limits");
      }
      if (r.started[g][t] - r.stopped[g][t] != u - prev || r.started[g][t] * r.stopped[g][t] != 0) {
        add("generator", gen.id, t, "start/stop inconsistent with commitment");
      }
      if (u != prev) {
        // A switch ends the previous run; check it against the minimum.
        if (prev == 1 && run < gen.min_up) add("generator", gen.id, t, "minimum up time violated");
        if (prev == 0 && run < gen.min_down) add("generator", gen.id, t, "minimum down time violated");
        run = 1;
      } else {
        ++run;
      }
      const double ru = gen.ramp_up * dt, rd = gen.ramp_down * dt;
      const double su = std::max(gen.p_min_stable, ru), sd = std::max(gen.p_min_stable, rd);
      if (p - p_prev > ru * prev + su * r.started[g][t] + tol(gen.p_max) && ru < gen.p_max) {
        add("generator", gen.id, t, "ramp-up limit exceeded");
      }
      if (p_prev - p > rd * u + sd * r.stopped[g][t] + tol(gen.p_max) && rd < gen.p_max) {
        add("generator", gen.id, t, "ramp-down limit exceeded");
      }
      if (r.pumping[g][t] < -tol(0) || r.pumping[g][t] > gen.pump_capacity + tol(gen.pump_capacity)) {
        add("generator", gen.id, t, "pumping outside limits");
      }
      prev = u;
      p_prev = p;
    }
    if (gen.tech == Tech::PumpedStorage) {
      double net_energy = 0.0;
      for (int t = 0; t < H; ++t) {
        net_energy += (r.output[g][t] - problem.options.pumped_storage_efficiency * r.pumping[g][t]) * dt;
      }
      if (net_energy > gen.reservoir + tol(gen.reservoir)) {
        report.findings.push_back({"generator", gen.id, "reservoir energy exceeded"});
      }
    }
  }

  for (std::size_t b = 0; b < net.buses.size(); ++b) {
    for (int t = 0; t < H; ++t) {
      if (r.shed[b][t] < -tol(0) || r.shed[b][t] > std::max(0.0, in.bus_load[b][t]) + tol(in.bus_load[b][t])) {
        add("bus", net.buses[b].id, t, "shed outside [0, load]");
      }
      if (r.spilled[b][t] < -tol(0)) add("bus", net.buses[b].id, t, "negative spill");
    }
  }
  for (std::size_t c = 0; c < net.clusters.size(); ++c) {
    for (int t = 0; t < H; ++t) {
      const double avail = std::max(0.0, in.cluster_available[c][t]);
      if (r.curtailed[c][t] < -tol(0) || r.curtailed[c][t] > avail + tol(avail)) {
        add("cluster", net.clusters[c].id, t, "curtailment outside availability");
      }
    }
  }

  // Network: reported flows must satisfy KCL against the dispatch, follow
  // the DC law, and respect ratings.
  const auto inj = nodal_injections(r, problem);
  const auto ends = line_ends(net);
  const auto dc = compute_dc_flows(r, problem);
  for (int t = 0; t < H; ++t) {
    std::vector<double> kcl(net.buses.size(), 0.0);
    for (std::size_t l = 0; l < ends.size(); ++l) {
      kcl[ends[l].from] += r.flows[l][t];
      kcl[ends[l].to] -= r.flows[l][t];
    }
    for (std::size_t b = 0; b < net.buses.size(); ++b) {
      if (std::abs(kcl[b] - inj[b][t]) > tol(std::max(std::abs(inj[b][t]), in.bus_load[b][t]))) {
        add("bus", net.buses[b].id, t, "power balance mismatch");
      }
    }
    for (std::size_t l = 0; l < ends.size(); ++l) {
      const double rating = net.lines[l].rating;
      if (std::abs(r.flows[l][t]) > rating + tol(rating)) add("line", net.lines[l].id, t, "overload");
      if (std::abs(r.flows[l][t] - dc[l][t]) > tol(rating)) {
        add("line", net.lines[l].id, t, "flow inconsistent with DC power flow");
      }
    }
  }

  if (problem.options.reserve) {
    for (int t = 0; t < H; ++t) {
      double headroom = r.reserve_shortfall[t];
      for (std::size_t g = 0; g < net.generators.size(); ++g) {
        if (!provides_reserve(net.generators[g])) continue;
        headroom += net.generators[g].p_max * r.committed[g][t] - r.output[g][t];
      }
      if (headroom < problem.options.reserve_mw - tol(problem.options.reserve_mw)) {
        add("reserve", "system", t, "spinning reserve below requirement");
      }
    }
  }

  for (const auto& row : problem.fuel_rows) {
    double lhs = 0.0;
    for (const auto& term : row.terms) lhs += term.coef * r.output[term.generator][term.period];
    if (lhs > row.rhs + tol(row.rhs)) report.findings.push_back({"fuel", row.label, "fuel constraint violated"});
  }

  const double exact = evaluate_objective(r, problem);
  if (std::abs(exact - r.objective) > 1e-6 * std::max(1.0, std::abs(exact))) {
    report.findings.push_back({"objective", "total", "mismatch"});
  }
  return report;
}

}  // namespace nexus
