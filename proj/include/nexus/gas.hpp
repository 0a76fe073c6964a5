#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "nexus/network.hpp"

namespace nexus::gas {

/// Uniform split of one pipe. Grid points run 0..segments, point 0 sits on
/// the pipe's from-node and point `segments` on its to-node.
struct PipeGrid {
  std::string pipe_id;
  std::size_t pipe = 0;
  double dx = 0.0;  // m
  int segments = 2;
  std::size_t from_node = 0;
  std::size_t to_node = 0;
};

/// Each pipe gets max(2, round(length / target_dx)) equal segments.
std::vector<PipeGrid> discretize(const GasNetwork& net, double target_dx);

struct GasState {
  double time = 0.0;                            // s
  std::vector<std::vector<double>> pressure;    // [pipe][point] Pa
  std::vector<std::vector<double>> flow;        // [pipe][point] kg/s, from -> to
  std::vector<double> node_pressure;            // [node] Pa
  std::vector<double> compressor_flow;          // [compressor] kg/s
  double anchor_injection = 0.0;                // kg/s drawn through a held reference node
};

/// Nodal boundary flows for one time step, kg/s.
struct GasBoundary {
  std::vector<double> injection;  // [node]
  std::vector<double> offtake;    // [node]
};

struct LinepackRecord {
  double time = 0.0;
  double total_kg = 0.0;
  double total_mcm = 0.0;
  std::vector<double> zone_kg;  // indexed like GasZones::ids
};

enum class ViolationKind { Min, Max };
const char* to_string(ViolationKind kind);

struct PressureViolation {
  std::size_t node = 0;
  std::string node_id;
  ViolationKind kind = ViolationKind::Min;
  double onset = 0.0;     // s
  double duration = 0.0;  // s
  double worst_pressure = 0.0;  // Pa
  double worst_time = 0.0;      // s
};

struct SolverOptions {
  double dt = 60.0;          // s
  double dx = 10000.0;       // m
  double tolerance = 1e-6;   // scaled residual
  int max_iterations = 50;   // Newton iterations per step
  bool hold_reference = false;  // keep the reference node at its pressure during transients
  int debounce_steps = 2;    // consecutive samples before a violation counts
};

/// Implicit box-scheme solver for isothermal pipe flow on a gas network.
/// Instances are immutable after construction and may be shared by threads.
class Simulator {
 public:
  Simulator(std::shared_ptr<const GasNetwork> network, GasProperties properties,
            SolverOptions options = {});
  explicit Simulator(const CoupledSystem& sys, SolverOptions options = {});

  const GasNetwork& network() const { return *network_; }
  const GasProperties& properties() const { return properties_; }
  const SolverOptions& options() const { return options_; }
  const std::vector<PipeGrid>& grids() const { return grids_; }
  const GasZones& zones() const { return zones_; }

  /// Time-invariant solution for the given boundary flows with the network
  /// reference node held at its pressure. Throws InitInfeasible.
  GasState steady_state_init(const GasBoundary& boundary) const;

  /// One implicit step of length dt. Throws NonConvergence, NegativePressure.
  GasState step_transient(const GasState& state, const GasBoundary& boundary, double dt) const;

  LinepackRecord compute_linepack(const GasState& state) const;

  /// Linepack of a zone with every segment at its minimum (or maximum) node
  /// pressure.
  double zone_linepack_at(std::size_t zone, ViolationKind bound) const;

  GasBoundary empty_boundary() const;

 private:
  struct Layout;
  GasState solve(const GasState* previous, const GasBoundary& boundary, double dt, bool steady,
                 const GasState& guess) const;

  std::shared_ptr<const GasNetwork> network_;
  GasProperties properties_;
  SolverOptions options_;
  std::vector<PipeGrid> grids_;
  GasZones zones_;
  std::vector<std::size_t> pipe_zone_;
};

/// Hourly schedules driving one simulated day.
struct Schedules {
  std::vector<double> injector_rate;  // [injector] kg/s, constant over the day; missing -> scheduled_rate
  std::vector<GasDemand> demands;     // hourly off-takes, firm and non-firm
};

/// Scheduled rates taken from the network's injector records.
Schedules default_schedules(const GasNetwork& net);

/// Nodal boundary at time t (s); off-takes are held constant within each hour.
GasBoundary boundary_at(const Simulator& sim, const Schedules& schedules, double t);

/// Violations in a series of states; runs shorter than debounce_steps are ignored.
std::vector<PressureViolation> detect_violations(const Simulator& sim, const std::vector<GasState>& trajectory);

struct DayResult {
  std::vector<GasState> trajectory;      // t = 0, dt, ..., horizon
  std::vector<LinepackRecord> linepack;  // aligned with trajectory
  std::vector<PressureViolation> violations;
  double injected_kg = 0.0;
  double offtaken_kg = 0.0;
  double closure = 0.0;   // |LP(end) - LP(0)| / LP(0)
  int max_newton_iterations = 0;

  double mass_balance_error() const;  // |dLP - (in - out)| in kg
  double gross_throughput() const { return injected_kg > offtaken_kg ? injected_kg : offtaken_kg; }
};

/// Starts from the steady state of the day-mean flows (off-takes scaled to
/// the injection total if the two differ) and steps through the horizon.
DayResult simulate_day(const Simulator& sim, const Schedules& schedules, double horizon_s = 86400.0);

/// Moves injection out of zones with max-pressure violations into zones with
/// spare linepack. Throws ReallocationImpossible.
Schedules reallocate_injections(const Simulator& sim, const Schedules& schedules,
                                const std::vector<PressureViolation>& violations,
                                const std::vector<LinepackRecord>& linepack);

/// CSV exports: (time_s, node_id, pressure_bar) and (time_s, zone_id, linepack_mcm).
void write_pressure_csv(std::ostream& out, const Simulator& sim, const std::vector<GasState>& trajectory,
                        int stride = 1);
void write_linepack_csv(std::ostream& out, const Simulator& sim, const std::vector<LinepackRecord>& series,
                        int stride = 1);

}  // namespace nexus::gas
