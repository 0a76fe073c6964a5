#pragma once

#include <array>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nexus/coupling.hpp"

namespace nexus::studies {

// ---------------------------------------------------------------------------
// Adequacy

/// Column order of the generation-share table.
enum class ShareColumn { Hydro, PS, Nuclear, Ocgt, Ccgt, Coal, BioLignite, Oil, Wind, Solar, Import, LS };
inline constexpr std::size_t kShareColumns = 12;
const char* to_string(ShareColumn column);

struct AdequacyOptions {
  // MW. Unset keeps the scenario's own requirement.
  std::optional<double> reserve_mw;
  coupling::CoupledOptions coupled;
};

struct AdequacyReport {
  std::array<double, kShareColumns> shares{};  // % of supplied plus shed energy
  std::array<double, kShareColumns> energy_mwh{};
  double shed_mwh = 0.0;
  double wind_curtailed_gwh = 0.0;
  double solar_curtailed_gwh = 0.0;
  double linepack_min_mcm = 0.0;
  double linepack_max_mcm = 0.0;
  double linepack_swing_mcm() const { return linepack_max_mcm - linepack_min_mcm; }
  double gas_curtailed_kg = 0.0;
  double gas_curtailed_m3 = 0.0;
  double adequacy_without_res = 0.0;  // %
  std::vector<gas::PressureViolation> violations;  // left in the final gas day
  coupling::CoupledSolution solution;
};

/// One coupled solve with the reserve requirement switched on, aggregated
/// into shares, curtailments and the linepack swing.
AdequacyReport run_adequacy(const CoupledSystem& sys, const coupling::CoupledScenario& scenario,
                            const AdequacyOptions& options = {});

/// 100 * conventional / peak. Throws ZeroPeak.
double adequacy_without_res(double conventional_capacity_mw, double peak_demand_mw);

/// Total rating of the dispatchable fleet and the largest hourly system load.
double conventional_capacity(const ElectricNetwork& net);
double peak_demand(const UcInputs& inputs);

// ---------------------------------------------------------------------------
// N-1 security

enum class ContingencyClass { Line, ConventionalPlant, SolarCluster, WindCluster, Compressor };
const char* to_string(ContingencyClass cls);

struct Contingency {
  std::string id;  // "<class>:<element>"
  ContingencyClass cls = ContingencyClass::Line;
  std::string element;
  double capacity_lost = 0.0;  // MW; line rating or compressor power for the non-generating classes
};

struct ContingencyConfig {
  double generator_cap_mw = 3960.0;  // conventional plants and solar clusters
  double wind_cap_mw = 2000.0;
  // Element ids to consider per class; empty takes every element of the class.
  std::vector<std::string> lines, plants, solar, wind, compressors;
  bool include_lines = true, include_plants = true, include_solar = true, include_wind = true,
       include_compressors = true;

  double cap(ContingencyClass cls) const;
};

/// Sorted by class, then natural element id.
std::vector<Contingency> enumerate_contingencies(const CoupledSystem& sys, const ContingencyConfig& config = {});

/// System and scenario with one element lost; the inputs are not touched.
struct ContingencyCase {
  std::shared_ptr<const CoupledSystem> system;
  coupling::CoupledScenario scenario;
  bool islanded = false;
};

/// Throws IslandingDetected for a line outage that splits the grid unless
/// `allow_islanding` is set, in which case every island gets its own slack.
ContingencyCase apply_contingency(const std::shared_ptr<const CoupledSystem>& sys,
                                  const coupling::CoupledScenario& scenario, const Contingency& c,
                                  bool allow_islanding = false);

struct ContingencyRecord {
  std::string id;
  ContingencyClass cls = ContingencyClass::Line;
  std::string element;
  double capacity_lost = 0.0;
  double energy_not_served = 0.0;  // MWh
  double gas_curtailed_kg = 0.0;
  std::size_t residual_violations = 0;
  int iterations = 0;
  std::string termination;  // coupled-loop termination, or "error"
  std::string error;        // message when the solve failed
  bool islanded = false;
  bool shed_at_compressor_bus = false;  // load shed where an electric compressor is connected
  double wall_s = 0.0;
};

struct SecurityOptions {
  int jobs = 1;
  coupling::CoupledOptions coupled = deterministic();

  /// Node-limited solves without a wall-clock cut, so the records do not
  /// depend on machine load or the number of workers.
  static coupling::CoupledOptions deterministic();
};

/// The uncontingent system solved in security mode.
ContingencyRecord run_base_case(const std::shared_ptr<const CoupledSystem>& sys,
                                const coupling::CoupledScenario& scenario, const SecurityOptions& options = {});

/// One record per contingency in enumeration order. Failures are recorded,
/// never thrown.
std::vector<ContingencyRecord> run_security(const std::shared_ptr<const CoupledSystem>& sys,
                                            const coupling::CoupledScenario& scenario,
                                            const std::vector<Contingency>& contingencies,
                                            const SecurityOptions& options = {});

struct SecuritySummary {
  std::size_t contingencies = 0;
  std::size_t failed = 0;
  std::size_t with_shed = 0;
  double total_ens_mwh = 0.0;
  double base_ens_mwh = 0.0;
  std::string worst_id;  // largest ENS, first in order on ties
  double worst_ens_mwh = 0.0;
  std::string worst_gas_id;
  double worst_gas_kg = 0.0;
};
SecuritySummary summarize(const ContingencyRecord& base, const std::vector<ContingencyRecord>& records);

}  // namespace nexus::studies
