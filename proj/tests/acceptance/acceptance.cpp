// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes. Usage: acceptance [data/scenarios dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>
#include <unistd.h>

#include "cli.hpp"
#include "nexus/coupling.hpp"
#include "nexus/gas.hpp"
#include "nexus/ingest.hpp"
#include "nexus/studies.hpp"
#include "nexus/uc.hpp"
#include "tiny_uc_bridge.hpp"
#include "uc_oracle.hpp"

namespace fs = std::filesystem;
using namespace nexus;

namespace {

constexpr double kBar = 1e5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& tag) {
  auto d = fs::temp_directory_path() / ("nexus_acceptance_" + std::to_string(::getpid()) + "_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

Pipe make_pipe(std::string id, std::string from, std::string to, double length, double d) {
  Pipe p;
  p.id = std::move(id);
  p.from_node = std::move(from);
  p.to_node = std::move(to);
  p.length = length;
  p.diameter = d;
  p.friction = 0.01;
  p.area = std::numbers::pi * d * d / 4.0;
  return p;
}

// ---------------------------------------------------------------------------

Outcome steady_pipe() {
  const auto t0 = std::chrono::steady_clock::now();
  auto net = std::make_shared<GasNetwork>();
  net->nodes = {{"A"}, {"B"}};
  net->pipes = {make_pipe("P1", "A", "B", 50000.0, 0.9)};
  net->reference = PressureReference{"A", 60 * kBar};
  gas::SolverOptions opt;
  opt.dt = 60.0;
  opt.dx = 5000.0;
  opt.hold_reference = true;
  gas::Simulator sim(net, GasProperties{}, opt);

  // Start at rest and let the 100 kg/s draw pull the pipe into its new state.
  auto b = sim.empty_boundary();
  auto s = sim.steady_state_init(b);
  b.offtake[1] = 100.0;
  for (int k = 0; k < 6 * 60; ++k) s = sim.step_transient(s, b, opt.dt);
  const double secs = since(t0);

  const double a = std::numbers::pi * 0.9 * 0.9 / 4.0;
  const double p1 = 60 * kBar;
  const double analytic = std::sqrt(p1 * p1 - 0.01 * 350.0 * 350.0 * 50000.0 * 100.0 * 100.0 / (0.9 * a * a));
  const double err = std::abs(s.node_pressure[1] - analytic) / analytic;
  return {err <= 0.005 && secs < 10.0,
          fmt("outlet %.3f bar vs analytic %.3f bar (error %.4f%%), inlet supply %.2f kg/s, %.2f s",
              s.node_pressure[1] / kBar, analytic / kBar, 100 * err, s.anchor_injection, secs)};
}

Outcome mass_conservation(const fs::path& data) {
  const auto loaded = ingest::load_scenario(data / "gas10");
  const auto& sys = *loaded.system;
  gas::Simulator sim(sys);
  const auto base = gas::default_schedules(sys.gas());
  double supply = 0.0;
  for (double r : base.injector_rate) supply += r;

  double worst_balance = 0.0, worst_closure = 0.0;
  int days = 0;
  auto check = [&](const gas::Schedules& sched, bool balanced) {
    const auto day = gas::simulate_day(sim, sched);
    worst_balance = std::max(worst_balance, day.mass_balance_error() / day.gross_throughput());
    if (balanced) worst_closure = std::max(worst_closure, day.closure);
    ++days;
  };

  // Sinusoidal off-takes whose daily means add up to the injection.
  const auto& split = loaded.bundle.gas_split;
  for (double amp : {0.2, 0.35, 0.5}) {
    auto sched = base;
    sched.demands.clear();
    int k = 0;
    for (const auto& [node, share] : split) {
      std::vector<double> profile;
      for (int h = 0; h < 24; ++h)
        profile.push_back(share * supply * (1.0 + amp * std::sin(2 * std::numbers::pi * (h + 3 * k) / 24.0)));
      sched.demands.push_back({node, profile, true});
      ++k;
    }
    check(sched, true);
  }
  // The bundle's own day with the gas-fired plants dispatched; not balanced.
  auto sched = loaded.scenario.gas;
  const auto problem = build_uc(sys, loaded.scenario.uc, loaded.scenario.uc_options);
  for (auto& off : coupling::gfpp_offtakes(solve_mip(problem), sys)) sched.demands.push_back(std::move(off));
  check(sched, false);

  return {worst_balance <= 1e-4 && worst_closure <= 1e-3,
          fmt("%d days on %zu nodes: worst |dLP - net inflow| %.2e of throughput, worst closure %.2e of LP(0)", days,
              sys.gas().nodes.size(), worst_balance, worst_closure)};
}

Outcome uc_brute_force() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(31);
  int n = 0, mismatches = 0;
  double worst = 0.0;
  for (; n < 240; ++n) {
    const auto tiny = oracle::random_tiny_uc(rng);
    const auto ref = oracle::brute_force(tiny);
    const auto pb = oracle::to_problem(tiny);
    const auto got = solve_mip(pb, 0.0);
    const double rel = std::abs(got.objective - ref.objective) / std::max(1.0, std::abs(ref.objective));
    worst = std::max(worst, rel);
    if (rel > 1e-6 || !verify_dispatch(got, pb).empty()) ++mismatches;
  }
  const double secs = since(t0);
  return {mismatches == 0 && n >= 200 && secs < 60.0,
          fmt("%d instances, %d mismatches, worst relative difference %.2e, %.1f s", n, mismatches, worst, secs)};
}

Outcome coupling_stress(const fs::path& data) {
  const auto loaded = ingest::load_scenario(data / "tight_gas");
  coupling::CoupledOptions opt;
  const auto sol = coupling::coupled_solve(*loaded.system, loaded.scenario, opt);
  std::size_t residual_min = 0;
  for (const auto& v : sol.residual_violations) residual_min += v.kind == gas::ViolationKind::Min;

  bool effective = !sol.constraints.empty();
  double worst_ratio = std::numeric_limits<double>::infinity();
  const auto& d = sol.dispatch;
  for (const auto& fc : sol.constraints) {
    std::vector<std::size_t> members;
    for (const auto& m : fc.members) members.push_back(m.generator);
    const double reference = coupling::emit_fuel_constraint(fc, d.dt_hours, d.horizon).reference_kg;
    const double now = coupling::window_gas_draw(d, *loaded.system, members, fc.t0, fc.t_star);
    const double ratio = (reference - now) / (fc.g_c / opt.safety_factor);
    worst_ratio = std::min(worst_ratio, ratio);
    if (reference - now < fc.g_c / opt.safety_factor - 1e-6) effective = false;
  }
  const bool pass = sol.converged && sol.iterations <= 10 && !sol.constraints.empty() && residual_min == 0 &&
                    effective;
  return {pass, fmt("%d iterations (%s), %zu fuel row(s), %zu residual min violations, "
                    "window draw cut %.2fx G_C/%.1f, shed %.1f MWh",
                    sol.iterations, sol.termination.c_str(), sol.constraints.size(), residual_min,
                    sol.constraints.empty() ? 0.0 : worst_ratio, opt.safety_factor,
                    [&] {
                      double shed = 0.0;
                      for (const auto& bus : d.shed)
                        for (double v : bus) shed += v * d.dt_hours;
                      return shed;
                    }())};
}

Outcome contingency_count(const fs::path& data) {
  const auto uk = ingest::load_scenario(data / "uk_skeleton");
  const auto list = studies::enumerate_contingencies(*uk.system);
  std::map<studies::ContingencyClass, int> per;
  for (const auto& c : list) ++per[c.cls];
  using C = studies::ContingencyClass;
  const bool count_ok = list.size() == 203 && per[C::Line] == 99 && per[C::ConventionalPlant] == 60 &&
                        per[C::SolarCluster] == 9 && per[C::WindCluster] == 14 && per[C::Compressor] == 21;

  const auto dir = scratch_dir("jobs");
  const auto scen = (data / "security_small").string();
  int codes = 0;
  for (const char* jobs : {"1", "8"}) {
    codes |= cli::run_cli({"nexus", "security", "--scenario", scen, "--out", (dir / jobs).string(), "--jobs", jobs,
                           "--omit-timing"});
  }
  bool same = codes == 0;
  std::size_t compared = 0;
  for (const char* f : {"contingency_report.csv", "summary.json"}) {
    same = same && slurp(dir / "1" / f) == slurp(dir / "8" / f) && !slurp(dir / "1" / f).empty();
    ++compared;
  }
  fs::remove_all(dir);
  return {count_ok && same,
          fmt("uk_skeleton: %zu contingencies (%d lines, %d plants, %d solar, %d wind, %d compressors); "
              "security_small reports for jobs 1 and 8 %s",
              list.size(), per[C::Line], per[C::ConventionalPlant], per[C::SolarCluster], per[C::WindCluster],
              per[C::Compressor], same ? "byte-identical" : "DIFFER")};
}

Outcome base_dominance(const fs::path& data) {
  const auto loaded = ingest::load_scenario(data / "security_small");
  studies::SecurityOptions opt;
  const auto base = studies::run_base_case(loaded.system, loaded.scenario, opt);
  const auto list = studies::enumerate_contingencies(*loaded.system);
  const auto records = studies::run_security(loaded.system, loaded.scenario, list, opt);
  int below = 0, failed = 0;
  double min_ens = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    if (r.termination == "error") ++failed;
    if (r.energy_not_served < base.energy_not_served - 1e-6) ++below;
    min_ens = std::min(min_ens, r.energy_not_served);
  }
  return {below == 0 && failed == 0 && base.termination != "error" && !records.empty(),
          fmt("base ENS %.3f MWh, %zu contingencies, smallest contingency ENS %.3f MWh, %d below base, %d failed",
              base.energy_not_served, records.size(), min_ens, below, failed)};
}

Outcome disaggregation() {
  using ingest::ScenarioBundle;
  auto cap = [](ScenarioBundle& b, Tech t) -> std::optional<double>& { return b.capacity[static_cast<std::size_t>(t)]; };
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  const int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    ElectricNetwork net;
    const int nb = 3 + trial % 9;
    ingest::LoadSnapshot snap;
    std::vector<double> w(nb);
    double wsum = 0.0;
    for (int i = 0; i < nb; ++i) wsum += (w[i] = u(rng) + 0.01);
    for (int i = 0; i < nb; ++i) {
      const auto id = "B" + std::to_string(i + 1);
      net.buses.push_back({id, i == 0});
      snap.shares[id] = w[i] / wsum;
      net.clusters.push_back({"W" + std::to_string(i), id, Tech::Wind, 50.0 + 900.0 * u(rng)});
      net.clusters.push_back({"S" + std::to_string(i), id, Tech::Solar, 10.0 + 400.0 * u(rng)});
      Generator g;
      g.id = "G" + std::to_string(i);
      g.bus = id;
      g.tech = i % 3 == 0 ? Tech::Nuclear : (i % 3 == 1 ? Tech::Ccgt : Tech::Coal);
      g.p_max = 50.0 + 800.0 * u(rng);
      net.generators.push_back(g);
    }
    ScenarioBundle b;
    b.horizon = 24;
    cap(b, Tech::Nuclear) = 9000.0 * u(rng);
    cap(b, Tech::Ccgt) = 30000.0 * u(rng);
    cap(b, Tech::Coal) = 8000.0 * u(rng);
    cap(b, Tech::Wind) = 1000.0 + 25000.0 * u(rng);
    cap(b, Tech::Solar) = 500.0 + 15000.0 * u(rng);
    const auto scaled = ingest::apply_capacity(net, ingest::disaggregate_capacity(b, net));
    auto rel = [](double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); };
    for (Tech t : {Tech::Nuclear, Tech::Ccgt, Tech::Coal}) {
      double sum = 0.0;
      for (const auto& g : scaled.generators) sum += g.tech == t ? g.p_max : 0.0;
      worst = std::max(worst, rel(sum, *cap(b, t)));
    }
    for (Tech t : {Tech::Wind, Tech::Solar}) {
      double sum = 0.0;
      for (const auto& c : scaled.clusters) sum += c.kind == t ? c.capacity : 0.0;
      worst = std::max(worst, rel(sum, *cap(b, t)));
    }
    for (int t = 0; t < 24; ++t) {
      b.load.push_back(60000.0 * u(rng));
      b.wind.push_back(*cap(b, Tech::Wind) * u(rng));
      b.solar.push_back(*cap(b, Tech::Solar) * u(rng));
    }
    const auto load = ingest::disaggregate_load(b, snap, net);
    const auto avail = ingest::scale_res_profiles(b, scaled.clusters);
    for (int t = 0; t < 24; ++t) {
      double l = 0.0, wsum_t = 0.0, ssum_t = 0.0;
      for (int i = 0; i < nb; ++i) l += load[i][t];
      for (std::size_t c = 0; c < scaled.clusters.size(); ++c)
        (scaled.clusters[c].kind == Tech::Wind ? wsum_t : ssum_t) += avail[c][t];
      worst = std::max({worst, rel(l, b.load[t]), rel(wsum_t, b.wind[t]), rel(ssum_t, b.solar[t])});
    }
  }

  // Three-bus hand cases: solar spreads evenly whatever the existing sizes,
  // wind follows the existing sites, load follows the snapshot.
  ElectricNetwork net;
  net.buses = {{"B1", true}, {"B2"}, {"B3"}};
  net.clusters = {{"S1", "B1", Tech::Solar, 10.0}, {"S2", "B2", Tech::Solar, 50.0},
                  {"S3", "B3", Tech::Solar, 200.0}, {"W1", "B1", Tech::Wind, 100.0},
                  {"W2", "B2", Tech::Wind, 200.0}, {"W3", "B3", Tech::Wind, 700.0}};
  ScenarioBundle b;
  b.horizon = 1;
  cap(b, Tech::Solar) = 900.0;
  cap(b, Tech::Wind) = 5000.0;
  b.load = {1000.0};
  b.wind = {2500.0};
  b.solar = {450.0};
  const auto alloc = ingest::disaggregate_capacity(b, net);
  const std::vector<double> want_cap = {300, 300, 300, 500, 1000, 3500};
  const auto scaled = ingest::apply_capacity(net, alloc);
  const auto avail = ingest::scale_res_profiles(b, scaled.clusters);
  const std::vector<double> want_avail = {150, 150, 150, 250, 500, 1750};
  const auto load = ingest::disaggregate_load(b, {{{"B1", 0.2}, {"B2", 0.3}, {"B3", 0.5}}}, net);
  const std::vector<double> want_load = {200, 300, 500};
  bool hand = true;
  for (std::size_t c = 0; c < 6; ++c) {
    hand = hand && std::abs(alloc.cluster[c] - want_cap[c]) < 1e-9 && std::abs(avail[c][0] - want_avail[c]) < 1e-9;
  }
  for (std::size_t i = 0; i < 3; ++i) hand = hand && std::abs(load[i][0] - want_load[i]) < 1e-9;

  return {worst <= 1e-9 && hand,
          fmt("%d random bundles, worst relative mismatch %.2e; 3-bus solar 300/300/300, wind 500/1000/3500, "
              "load 200/300/500 %s",
              trials, worst, hand ? "reproduced" : "NOT reproduced")};
}

Outcome grid_refinement() {
  auto net = std::make_shared<GasNetwork>();
  net->nodes = {{"A"}, {"B"}, {"C"}};
  net->pipes = {make_pipe("P1", "A", "B", 50000.0, 0.9), make_pipe("P2", "B", "C", 30000.0, 0.6)};
  net->reference = PressureReference{"A", 60 * kBar};

  // Nodal pressures sampled every 20 min over two hours after a draw step.
  auto run = [&](double dx, double dt) {
    gas::SolverOptions o;
    o.dx = dx;
    o.dt = dt;
    o.hold_reference = true;
    gas::Simulator sim(net, GasProperties{}, o);
    auto b = sim.empty_boundary();
    b.offtake[1] = 20.0;
    b.offtake[2] = 40.0;
    auto s = sim.steady_state_init(b);
    b.offtake[2] = 90.0;
    std::vector<std::vector<double>> samples;
    const int per_sample = static_cast<int>(std::lround(1200.0 / dt));
    for (int k = 1; k <= 6 * per_sample; ++k) {
      s = sim.step_transient(s, b, dt);
      if (k % per_sample == 0) samples.push_back(s.node_pressure);
    }
    return samples;
  };
  std::vector<std::vector<std::vector<double>>> levels;
  double dx = 10000.0, dt = 240.0;
  for (int level = 0; level < 5; ++level, dx /= 2, dt /= 2) levels.push_back(run(dx, dt));

  // change[k][node]: largest difference between levels k and k+1.
  std::vector<std::vector<double>> change;
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    std::vector<double> c(net->nodes.size(), 0.0);
    for (std::size_t s = 0; s < levels[k].size(); ++s)
      for (std::size_t n = 0; n < c.size(); ++n)
        c[n] = std::max(c[n], std::abs(levels[k + 1][s][n] - levels[k][s][n]));
    change.push_back(c);
  }
  bool monotone = true;
  std::string text;
  for (std::size_t n = 0; n < net->nodes.size(); ++n) {
    text += net->nodes[n].id + ":";
    for (std::size_t k = 0; k < change.size(); ++k) {
      text += fmt(" %.4f", change[k][n] / kBar);
      // A held node does not move at any level; only a real change must shrink.
      if (k > 0 && change[k - 1][n] > 1e-9 * kBar && !(change[k][n] < change[k - 1][n])) monotone = false;
    }
    text += n + 1 < net->nodes.size() ? "; " : "";
  }
  return {monotone, "max change per halving of (dx, dt) in bar, " + text};
}

Outcome desk_throughput(const fs::path& data) {
  const auto loaded = ingest::load_scenario(data / "desk30");
  const auto dir = scratch_dir("desk");
  const auto t0 = std::chrono::steady_clock::now();
  const int code = cli::run_cli({"nexus", "adequacy", "--scenario", (data / "desk30").string(), "--out",
                                 dir.string(), "--dt", "60"});
  const double secs = since(t0);
  int iterations = -1;
  bool converged = false;
  if (fs::exists(dir / "summary.json")) {
    const auto s = nlohmann::json::parse(slurp(dir / "summary.json"));
    iterations = s["iterations"].get<int>();
    converged = s["converged"].get<bool>();
  }
  fs::remove_all(dir);
  const auto& sys = *loaded.system;
  return {code == 0 && converged && iterations >= 1 && iterations <= 3 && secs < 300.0,
          fmt("%zu units, %zu pipes: %d coupling iteration(s), exit %d, %.1f s", sys.electric().generators.size(),
              sys.gas().pipes.size(), iterations, code, secs)};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path data = argc > 1 ? fs::path(argv[1]) : fs::path(NEXUS_DATA_DIR);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"steady pipe outlet matches the analytic drop", steady_pipe},
      {"gas day conserves mass and closes", [&] { return mass_conservation(data); }},
      {"unit commitment matches exhaustive enumeration", uc_brute_force},
      {"tight gas fixture converges with effective fuel rows", [&] { return coupling_stress(data); }},
      {"contingency count and worker-count invariance", [&] { return contingency_count(data); }},
      {"no contingency beats the base case", [&] { return base_dominance(data); }},
      {"disaggregation conserves national totals", disaggregation},
      {"grid refinement converges monotonically", grid_refinement},
      {"desk-scale adequacy study within five minutes", [&] { return desk_throughput(data); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
