#pragma once

// Unit conversions used at I/O boundaries. Everything inside the solvers is SI
// (Pa, kg/s, m, s) except electric quantities, which stay in MW / MWh.

namespace nexus::units {

inline constexpr double kPaPerBar = 1.0e5;
inline constexpr double kSecondsPerHour = 3600.0;
inline constexpr double kSecondsPerDay = 86400.0;
inline constexpr double kCubicMetresPerMcm = 1.0e6;

constexpr double bar_to_pa(double bar) { return bar * kPaPerBar; }
constexpr double pa_to_bar(double pa) { return pa / kPaPerBar; }

/// Million standard cubic metres per day -> kg/s.
constexpr double mcmd_to_kgs(double mcmd, double standard_density) {
  return mcmd * kCubicMetresPerMcm * standard_density / kSecondsPerDay;
}
constexpr double kgs_to_mcmd(double kgs, double standard_density) {
  return kgs * kSecondsPerDay / (kCubicMetresPerMcm * standard_density);
}

/// Mass (kg) <-> standard volume (mcm).
constexpr double kg_to_mcm(double kg, double standard_density) {
  return kg / (standard_density * kCubicMetresPerMcm);
}
constexpr double kg_to_m3(double kg, double standard_density) { return kg / standard_density; }

constexpr double mw_to_w(double mw) { return mw * 1.0e6; }

}  // namespace nexus::units
