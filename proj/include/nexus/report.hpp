#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nexus/studies.hpp"

namespace nexus::report {

// All writers print fixed-point numbers so reruns are byte-identical. Every
// numeric header carries its unit.

/// One row per case: case,Hydro_pct,...,LS_pct.
void write_shares_csv(std::ostream& out, const std::string& label, const studies::AdequacyReport& rep);

/// time_s,<zone>_mcm...,total_mcm, one row per stored state.
void write_linepack_table(std::ostream& out, const GasZones& zones, const std::vector<gas::LinepackRecord>& series,
                          double standard_density, int stride = 1);

/// node_id,kind,onset_s,duration_s,worst_pressure_bar,worst_time_s
void write_violations_csv(std::ostream& out, const std::vector<gas::PressureViolation>& violations);

/// hour,cluster_id,kind,curtailed_MW for every non-zero curtailment.
void write_curtailment_csv(std::ostream& out, const ElectricNetwork& net, const DispatchResult& d);
/// hour,bus_id,shed_MW for every non-zero shed.
void write_shed_csv(std::ostream& out, const ElectricNetwork& net, const DispatchResult& d);

/// id,class,element,capacity_lost_MW,ENS_MWh,gas_curtailed_kg,iterations,residual_violations,termination[,wall_s]
void write_contingency_csv(std::ostream& out, const std::vector<studies::ContingencyRecord>& records,
                           bool omit_timing);

nlohmann::json adequacy_summary(const studies::AdequacyReport& rep);
nlohmann::json security_summary(const studies::SecuritySummary& summary, const studies::ContingencyRecord& base,
                                const std::vector<studies::ContingencyRecord>& records);

/// Writes `text` to `path`, creating parent directories. Throws IoError.
void write_file(const std::filesystem::path& path, const std::string& text);

/// Fixed-point rendering with trailing zeros kept; -0 prints as 0.
std::string fixed(double value, int decimals = 6);

}  // namespace nexus::report
