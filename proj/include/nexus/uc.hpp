#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nexus/lp.hpp"
#include "nexus/mip.hpp"
#include "nexus/network.hpp"

namespace nexus {

/// Unit status before the first period.
struct InitialUnitState {
  bool on = false;
  int hours_in_state = 1000;  // long enough to satisfy any min up/down time
  double output = 0.0;        // MW at t = 0
};

/// Hourly series for one unit-commitment horizon, already mapped to buses.
struct UcInputs {
  int horizon = 24;
  double dt_hours = 1.0;
  std::vector<std::vector<double>> bus_load;               // [bus][t] MW
  std::vector<std::vector<double>> cluster_available;      // [cluster][t] MW
  std::vector<std::vector<double>> interconnector_import;  // [ic][t] MW, export < 0
  std::vector<InitialUnitState> initial;                   // empty: all units off
};

struct UcOptions {
  double voll = 3000.0;  // currency/MWh
  bool reserve = true;   // false in security mode
  double reserve_mw = 8000.0;
  // Penalties for the two slack families that keep every instance feasible.
  // Negative values select the defaults (0.5 * VOLL and VOLL).
  double reserve_shortfall_cost = -1.0;
  double spill_cost = -1.0;
  double pumped_storage_efficiency = 0.75;
  double tie_break = 1e-9;  // per MWh, scaled by generator id rank
};

/// Extra linear row  sum(coef * P[g][t]) <= rhs  (fuel availability limits).
struct FuelRow {
  std::string label;
  struct Term {
    std::size_t generator;
    int period;
    double coef;
  };
  std::vector<Term> terms;
  double rhs = 0.0;
};

/// Assembled MILP plus the index maps needed to read a solution back.
struct UcProblem {
  std::shared_ptr<const ElectricNetwork> network;
  UcInputs inputs;
  UcOptions options;

  lp::Model model;
  std::vector<double> exact_cost;  // objective without the tie-break term

  // Column indices, -1 where absent.
  std::vector<std::vector<int>> p, u, startup, shutdown, pump;  // [g][t]
  std::vector<std::vector<int>> shed, spill, theta;             // [bus][t]
  std::vector<std::vector<int>> curtail;                        // [cluster][t]
  std::vector<int> reserve_shortfall;                           // [t]
  std::vector<int> commitment_columns;                          // branching candidates

  // Row indices.
  std::vector<std::vector<int>> balance_row;  // [bus][t]
  std::vector<std::vector<int>> line_row;     // [line][t]
  std::vector<int> reserve_row;               // [t], empty in security mode

  std::vector<FuelRow> fuel_rows;
  std::vector<std::size_t> slack_buses;  // one reference bus per island
  bool reference_auto_assigned = false;  // an island had no flagged slack

  int horizon() const { return inputs.horizon; }
  double dt() const { return inputs.dt_hours; }
  int binaries_per_class() const;
  void add_fuel_row(const FuelRow& row);
};

/// Throws DimensionMismatch when a series does not match the network or H.
UcProblem build_uc(std::shared_ptr<const ElectricNetwork> network, UcInputs inputs,
                   UcOptions options = {});
UcProblem build_uc(const CoupledSystem& sys, UcInputs inputs, UcOptions options = {});

struct DispatchResult {
  int horizon = 0;
  double dt_hours = 1.0;
  double objective = 0.0;  // total cost with exact costs, slack penalties included
  double bound = 0.0;
  double gap = 0.0;
  mip::Status status = mip::Status::NoIncumbent;
  long nodes = 0;
  double wall_s = 0.0;

  std::vector<std::vector<double>> output;    // [g][t] MW
  std::vector<std::vector<int>> committed;    // [g][t]
  std::vector<std::vector<int>> started;      // [g][t]
  std::vector<std::vector<int>> stopped;      // [g][t]
  std::vector<std::vector<double>> pumping;   // [g][t] MW
  std::vector<std::vector<double>> shed;      // [bus][t] MW
  std::vector<std::vector<double>> spilled;   // [bus][t] MW
  std::vector<std::vector<double>> curtailed; // [cluster][t] MW
  std::vector<std::vector<double>> flows;     // [line][t] MW
  std::vector<double> reserve_shortfall;      // [t] MW

  double energy_not_served() const;  // MWh
};

/// Throws SolverTimeout if the time limit passes before any incumbent.
/// The node limit is the deterministic budget; the time limit is a guard.
DispatchResult solve_mip(const UcProblem& problem, double gap_target = 1e-3,
                         double time_limit_s = 300.0, long node_limit = 200000);

/// DC flows for one snapshot of nodal net injections (MW, per bus).
/// `slack_buses` overrides the flagged references; an island without one
/// raises SingularTopology.
std::vector<double> compute_dc_flows(const ElectricNetwork& net, const std::vector<double>& injections,
                                     const std::vector<std::size_t>& slack_buses = {});
/// Net injection per bus and period implied by a dispatch.
std::vector<std::vector<double>> nodal_injections(const DispatchResult& result, const UcProblem& problem);
/// Flows per line and period recomputed from the dispatch.
std::vector<std::vector<double>> compute_dc_flows(const DispatchResult& result, const UcProblem& problem);

/// Independent re-check of a dispatch against the raw data.
ValidationReport verify_dispatch(const DispatchResult& result, const UcProblem& problem);

/// Objective evaluated from the raw data (plus the slack penalties).
double evaluate_objective(const DispatchResult& result, const UcProblem& problem);

}  // namespace nexus
