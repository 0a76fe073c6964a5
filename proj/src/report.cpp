#include "nexus/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "nexus/error.hpp"
#include "nexus/units.hpp"

namespace nexus::report {

using nlohmann::json;

std::string fixed(double value, int decimals) {
  if (value == 0.0 || std::abs(value) < 0.5 * std::pow(10.0, -decimals)) value = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

void write_shares_csv(std::ostream& out, const std::string& label, const studies::AdequacyReport& rep) {
  out << "case";
  for (std::size_t i = 0; i < studies::kShareColumns; ++i)
    out << ',' << studies::to_string(static_cast<studies::ShareColumn>(i)) << "_pct";
  out << '\n' << label;
  for (double s : rep.shares) out << ',' << fixed(s, 4);
  out << '\n';
}

void write_linepack_table(std::ostream& out, const GasZones& zones, const std::vector<gas::LinepackRecord>& series,
                          double standard_density, int stride) {
  out << "time_s";
  for (const auto& z : zones.ids) out << ',' << z << "_mcm";
  out << ",total_mcm\n";
  stride = std::max(1, stride);
  for (std::size_t i = 0; i < series.size(); i += static_cast<std::size_t>(stride)) {
    const auto& r = series[i];
    out << fixed(r.time, 0);
    for (std::size_t z = 0; z < zones.ids.size(); ++z) {
      const double kg = z < r.zone_kg.size() ? r.zone_kg[z] : 0.0;
      out << ',' << fixed(units::kg_to_mcm(kg, standard_density), 9);
    }
    out << ',' << fixed(r.total_mcm, 9) << '\n';
  }
}

void write_violations_csv(std::ostream& out, const std::vector<gas::PressureViolation>& violations) {
  out << "node_id,kind,onset_s,duration_s,worst_pressure_bar,worst_time_s\n";
  for (const auto& v : violations) {
    out << v.node_id << ',' << gas::to_string(v.kind) << ',' << fixed(v.onset, 0) << ',' << fixed(v.duration, 0)
        << ',' << fixed(units::pa_to_bar(v.worst_pressure), 6) << ',' << fixed(v.worst_time, 0) << '\n';
  }
}

void write_curtailment_csv(std::ostream& out, const ElectricNetwork& net, const DispatchResult& d) {
  out << "hour,cluster_id,kind,curtailed_MW\n";
  for (int t = 0; t < d.horizon; ++t) {
    for (std::size_t c = 0; c < net.clusters.size() && c < d.curtailed.size(); ++c) {
      if (d.curtailed[c][t] <= 1e-6) continue;
      out << t + 1 << ',' << net.clusters[c].id << ',' << to_string(net.clusters[c].kind) << ','
          << fixed(d.curtailed[c][t], 6) << '\n';
    }
  }
}

void write_shed_csv(std::ostream& out, const ElectricNetwork& net, const DispatchResult& d) {
  out << "hour,bus_id,shed_MW\n";
  for (int t = 0; t < d.horizon; ++t) {
    for (std::size_t b = 0; b < net.buses.size() && b < d.shed.size(); ++b) {
      if (d.shed[b][t] <= 1e-6) continue;
      out << t + 1 << ',' << net.buses[b].id << ',' << fixed(d.shed[b][t], 6) << '\n';
    }
  }
}

void write_contingency_csv(std::ostream& out, const std::vector<studies::ContingencyRecord>& records,
                           bool omit_timing) {
  out << "id,class,element,capacity_lost_MW,ENS_MWh,gas_curtailed_kg,iterations,residual_violations,termination";
  if (!omit_timing) out << ",wall_s";
  out << '\n';
  for (const auto& r : records) {
    out << r.id << ',' << studies::to_string(r.cls) << ',' << r.element << ',' << fixed(r.capacity_lost, 3) << ','
        << fixed(r.energy_not_served, 6) << ',' << fixed(r.gas_curtailed_kg, 3) << ',' << r.iterations << ','
        << r.residual_violations << ',' << r.termination;
    if (!omit_timing) out << ',' << fixed(r.wall_s, 3);
    out << '\n';
  }
}

json adequacy_summary(const studies::AdequacyReport& rep) {
  const auto& sol = rep.solution;
  json shares = json::object();
  json energy = json::object();
  for (std::size_t i = 0; i < studies::kShareColumns; ++i) {
    const std::string name = studies::to_string(static_cast<studies::ShareColumn>(i));
    shares[name] = rep.shares[i];
    energy[name] = rep.energy_mwh[i];
  }
  return {{"generation_share_pct", shares},
          {"generation_MWh", energy},
          {"shed_MWh", rep.shed_mwh},
          {"wind_curtailed_GWh", rep.wind_curtailed_gwh},
          {"solar_curtailed_GWh", rep.solar_curtailed_gwh},
          {"linepack_min_mcm", rep.linepack_min_mcm},
          {"linepack_max_mcm", rep.linepack_max_mcm},
          {"linepack_swing_mcm", rep.linepack_swing_mcm()},
          {"gas_curtailed_kg", rep.gas_curtailed_kg},
          {"gas_curtailed_m3", rep.gas_curtailed_m3},
          {"adequacy_without_res_pct", rep.adequacy_without_res},
          {"residual_violations", rep.violations.size()},
          {"fuel_constraints", sol.constraints.size()},
          {"iterations", sol.iterations},
          {"converged", sol.converged},
          {"termination", sol.termination},
          {"objective", sol.dispatch.objective},
          {"mip_gap", sol.dispatch.gap}};
}

json security_summary(const studies::SecuritySummary& s, const studies::ContingencyRecord& base,
                      const std::vector<studies::ContingencyRecord>& records) {
  json failed = json::array();
  for (const auto& r : records)
    if (r.termination == "error") failed.push_back({{"id", r.id}, {"error", r.error}});
  json worst = json::array();
  std::vector<const studies::ContingencyRecord*> order;
  for (const auto& r : records) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(),
                   [](auto* a, auto* b) { return a->energy_not_served > b->energy_not_served; });
  for (std::size_t i = 0; i < order.size() && i < 5; ++i) {
    if (order[i]->energy_not_served <= 1e-6) break;
    worst.push_back({{"id", order[i]->id}, {"ENS_MWh", order[i]->energy_not_served}});
  }
  return {{"contingencies", s.contingencies},
          {"failed", failed},
          {"with_shed", s.with_shed},
          {"total_ENS_MWh", s.total_ens_mwh},
          {"base_ENS_MWh", base.energy_not_served},
          {"base_termination", base.termination},
          {"worst_ENS", {{"id", s.worst_id}, {"ENS_MWh", s.worst_ens_mwh}}},
          {"worst_gas_curtailment", {{"id", s.worst_gas_id}, {"gas_curtailed_kg", s.worst_gas_kg}}},
          {"largest_shed_cases", worst}};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write to " + path.string() + " failed");
}

}  // namespace nexus::report
