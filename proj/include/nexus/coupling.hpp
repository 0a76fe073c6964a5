#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nexus/gas.hpp"
#include "nexus/uc.hpp"

namespace nexus::coupling {

/// Hourly GFPP gas draw per coupled gas node, M = P / (eta * HHV), kg/s.
/// Every entry is non-firm.
std::vector<GasDemand> gfpp_offtakes(const DispatchResult& dispatch, const CoupledSystem& sys);

/// Compressor-delimited zone that saw minimum-pressure violations.
struct ViolatedZone {
  std::size_t zone = 0;
  std::string zone_id;
  std::vector<std::size_t> gfpps;  // generator indices whose gas node lies in the zone
  double onset = 0.0;              // earliest onset, s
  double end = 0.0;                // latest onset + duration, s
  std::vector<gas::PressureViolation> violations;
};

/// Zone of the earliest minimum violation, merged over every violation in it.
/// Throws NoGfppInZone when no GFPP draws gas there.
ViolatedZone violated_zone(const std::vector<gas::PressureViolation>& violations, const CoupledSystem& sys);
/// Every zone with minimum violations, ordered by onset; GFPP-free zones included.
std::vector<ViolatedZone> violated_zones(const std::vector<gas::PressureViolation>& violations,
                                         const CoupledSystem& sys);

struct CurtailmentSize {
  double g_c = 0.0;     // kg
  double t0 = 0.0;      // s
  double t_star = 0.0;  // s
  double worst_time = 0.0;
};

/// Linepack deficit below the p_min floor at the zone's worst instant, times
/// the safety factor. The window runs from the onset to `day_end`.
CurtailmentSize size_curtailment(const ViolatedZone& zone, const gas::Simulator& sim,
                                 const std::vector<gas::GasState>& trajectory, double safety_factor = 1.1,
                                 double day_end = 86400.0);

struct FuelConstraint {
  std::string zone;
  double t0 = 0.0;
  double t_star = 0.0;
  double g_c = 0.0;  // kg
  struct Member {
    std::size_t generator = 0;
    double efficiency = 0.5;
    double hhv = 50.0e6;
    std::vector<double> reference;  // dispatch of the previous iteration, MW per period
  };
  std::vector<Member> members;
};

struct EmittedRow {
  FuelRow row;
  double reference_kg = 0.0;  // zone draw over the window under the reference dispatch
  bool clipped = false;       // G_C exceeded the reference draw
};

/// sum over members and periods of  w_t * (P - P_ref) * dt * 3600 / (eta * HHV) <= -G_C,
/// with w_t the overlap of period t with [t0, t0 + t_star]. Written in the
/// absolute form  sum(coef * P) <= reference_kg - G_C, clipped at zero.
EmittedRow emit_fuel_constraint(const FuelConstraint& fc, double dt_hours, int horizon);

/// Gas drawn by `generators` over [t0, t0 + t_star] under a dispatch, kg.
double window_gas_draw(const DispatchResult& dispatch, const CoupledSystem& sys,
                       const std::vector<std::size_t>& generators, double t0, double t_star);

struct CoupledScenario {
  UcInputs uc;
  UcOptions uc_options;
  gas::Schedules gas;  // injector rates and firm off-takes
};

struct CoupledOptions {
  int iteration_cap = 10;
  double safety_factor = 1.1;
  double gap_target = 1e-3;
  double time_limit_s = 300.0;  // per UC solve
  long node_limit = 200000;     // per UC solve
  gas::SolverOptions gas;
  int reallocation_rounds = 3;
  std::ostream* log = nullptr;  // one JSON object per line and iteration
};

struct IterationRecord {
  int iteration = 0;
  double objective = 0.0;
  double gap = 0.0;
  std::size_t min_violations = 0;
  std::size_t max_violations = 0;
  int reallocations = 0;
  std::vector<EmittedRow> emitted;
  std::vector<std::string> zones;
  double gfpp_gas_kg = 0.0;  // daily GFPP draw of this iteration's dispatch
};

struct CoupledSolution {
  DispatchResult dispatch;
  gas::DayResult gas_day;
  gas::Schedules gas_schedules;  // after any reallocation
  UcProblem problem;             // final model, fuel rows included
  int iterations = 0;
  bool converged = false;
  std::string termination;  // clean | shed-exhausted | no-gfpp-in-zone | iteration-cap
  std::vector<gas::PressureViolation> residual_violations;
  std::vector<FuelConstraint> constraints;
  std::vector<IterationRecord> history;
  double gas_curtailed_kg = 0.0;  // GFPP draw removed relative to the first dispatch
  double gas_curtailed_m3 = 0.0;  // at standard conditions
};

/// Fixed-point loop: UC, GFPP off-takes, gas day, fuel rows, repeat until the
/// gas day is clean, nothing is left to curtail, or the cap is reached. The
/// last iterate is returned either way; `converged` tells them apart.
CoupledSolution coupled_solve(const CoupledSystem& sys, const CoupledScenario& scenario,
                              const CoupledOptions& options = {});

}  // namespace nexus::coupling
