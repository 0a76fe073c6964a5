#include <gtest/gtest.h>

#include "coupled_fixture.hpp"
#include "nexus/error.hpp"
#include "nexus/studies.hpp"

using namespace nexus;
using namespace nexus::studies;

namespace {

// small_coupled plus an oil unit, with load stepping from 600 to 1000 MW at noon.
fixture::SmallCoupled security_fixture() {
  auto f = fixture::small_coupled(25.0);
  auto el = std::make_shared<ElectricNetwork>(f.sys->electric());
  Generator g3 = el->generators[1];
  g3.id = "G3";
  g3.tech = Tech::Oil;
  g3.p_max = g3.ramp_up = g3.ramp_down = 200;
  g3.cost_energy = 80;
  el->generators.push_back(g3);
  f.sys = std::make_shared<CoupledSystem>(bind_coupling(el, f.sys->gas_ptr(), f.sys->coupling()));
  auto& load = f.scenario.uc.bus_load[0];
  for (int t = 12; t < 24; ++t) load[t] = 1000;
  return f;
}

// North bus with a large wind farm behind a 300 MW line; demand sits in the south.
std::shared_ptr<const CoupledSystem> bottleneck_system() {
  auto el = std::make_shared<ElectricNetwork>();
  el->buses = {{"North", true}, {"South"}};
  el->lines = {{"L1", "North", "South", 300, 0.1}};
  Generator coal;
  coal.id = "G1";
  coal.bus = "South";
  coal.tech = Tech::Coal;
  coal.p_max = coal.ramp_up = coal.ramp_down = 1000;
  coal.cost_energy = 50;
  el->generators = {coal};
  el->clusters = {{"WN", "North", Tech::Wind, 1000, 1.0}, {"WS", "South", Tech::Wind, 200, 1.0}};
  auto gas = std::make_shared<GasNetwork>();
  gas->nodes = {{"N1"}, {"N2"}};
  gas->pipes = {fixture::gas_pipe("P1", "N1", "N2", 50000, 0.6)};
  gas->reference = PressureReference{"N1", 70e5};
  return std::make_shared<CoupledSystem>(bind_coupling(el, gas, {}));
}

}  // namespace

TEST(AdequacyWithoutRes, Ratio) {
  EXPECT_NEAR(adequacy_without_res(530e3, 500e3), 106.0, 1e-12);
  EXPECT_DOUBLE_EQ(adequacy_without_res(750, 750), 100.0);
  EXPECT_THROW(adequacy_without_res(100, 0), ZeroPeak);
}

TEST(Adequacy, AmpleSystemHasNoShed) {
  auto f = fixture::small_coupled(25.0);
  AdequacyOptions opt;
  opt.reserve_mw = 100;
  const auto rep = run_adequacy(*f.sys, f.scenario, opt);
  EXPECT_EQ(rep.shed_mwh, 0.0);
  EXPECT_EQ(rep.gas_curtailed_kg, 0.0);
  double sum = 0.0;
  for (double s : rep.shares) sum += s;
  EXPECT_NEAR(sum, 100.0, 0.01);
  EXPECT_NEAR(rep.adequacy_without_res, 100.0 * 1100 / 600, 1e-9);
  EXPECT_GT(rep.linepack_max_mcm, 0.0);
  EXPECT_GE(rep.linepack_swing_mcm(), 0.0);
}

TEST(Adequacy, TightGasCurtailsWithoutShedding) {
  auto f = fixture::small_coupled(5.0);
  AdequacyOptions opt;
  opt.reserve_mw = 0;
  const auto rep = run_adequacy(*f.sys, f.scenario, opt);
  EXPECT_GT(rep.gas_curtailed_kg, 0.0);
  EXPECT_EQ(rep.shed_mwh, 0.0);
  EXPECT_TRUE(rep.solution.converged);
  double sum = 0.0;
  for (double s : rep.shares) sum += s;
  EXPECT_NEAR(sum, 100.0, 0.01);
}

TEST(Adequacy, LineBottleneckCurtailsTheNorth) {
  const auto sys = bottleneck_system();
  coupling::CoupledScenario sc;
  sc.uc.horizon = 24;
  sc.uc.bus_load = {std::vector<double>(24, 100), std::vector<double>(24, 900)};
  sc.uc.cluster_available = {std::vector<double>(24, 800), std::vector<double>(24, 200)};
  AdequacyOptions opt;
  opt.reserve_mw = 0;
  const auto rep = run_adequacy(*sys, sc, opt);
  const auto& d = rep.solution.dispatch;
  // North can use 100 MW locally and export 300; the other 400 MW is spilled.
  EXPECT_NEAR(rep.wind_curtailed_gwh, 24 * 0.4, 1e-6);
  for (int t = 0; t < 24; ++t) {
    EXPECT_NEAR(d.curtailed[0][t], 400, 1e-6);
    EXPECT_NEAR(d.curtailed[1][t], 0, 1e-6);
    EXPECT_NEAR(d.flows[0][t], 300, 1e-6);  // binding
  }
  EXPECT_NEAR(rep.shares[static_cast<std::size_t>(ShareColumn::Wind)], 100.0 * 600 / 1000, 1e-6);
}

TEST(Enumerate, ClassOrderAndCaps) {
  auto el = std::make_shared<ElectricNetwork>();
  el->buses = {{"B1", true}, {"B2"}};
  el->lines = {{"L10", "B1", "B2", 100, 0.1}, {"L2", "B1", "B2", 100, 0.1}};
  Generator big;
  big.id = "G1";
  big.bus = "B1";
  big.tech = Tech::Nuclear;
  big.p_max = 10000;
  el->generators = {big};
  el->clusters = {{"W1", "B2", Tech::Wind, 500}, {"W2", "B2", Tech::Wind, 5000}, {"S1", "B1", Tech::Solar, 9000}};
  auto gas = std::make_shared<GasNetwork>();
  gas->nodes = {{"N1"}, {"N2"}};
  Compressor k;
  k.id = "K1";
  k.from_node = "N1";
  k.to_node = "N2";
  gas->compressors = {k};
  const auto sys = bind_coupling(el, gas, {});
  const auto list = enumerate_contingencies(sys);
  std::vector<std::string> ids;
  for (const auto& c : list) ids.push_back(c.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"line:L2", "line:L10", "plant:G1", "solar:S1", "wind:W1", "wind:W2",
                                           "compressor:K1"}));
  EXPECT_DOUBLE_EQ(list[2].capacity_lost, 3960);
  EXPECT_DOUBLE_EQ(list[3].capacity_lost, 3960);
  EXPECT_DOUBLE_EQ(list[4].capacity_lost, 500);
  EXPECT_DOUBLE_EQ(list[5].capacity_lost, 2000);
  ContingencyConfig cfg;
  for (const auto& c : list) EXPECT_LE(c.capacity_lost, cfg.cap(c.cls));

  cfg.lines = {"L10"};
  cfg.include_compressors = false;
  EXPECT_EQ(enumerate_contingencies(sys, cfg).size(), 5u);
  cfg.lines = {"L99"};
  EXPECT_THROW(enumerate_contingencies(sys, cfg), Error);
}

TEST(ApplyContingency, RingStaysConnectedRadialIslands) {
  auto el = std::make_shared<ElectricNetwork>();
  el->buses = {{"B1", true}, {"B2"}, {"B3"}, {"B4"}};
  el->lines = {{"L1", "B1", "B2", 100, 0.1}, {"L2", "B2", "B3", 100, 0.1}, {"L3", "B3", "B1", 100, 0.1},
               {"L4", "B3", "B4", 100, 0.1}};
  auto gas = std::make_shared<GasNetwork>();
  gas->nodes = {{"N1"}};
  const auto sys = std::make_shared<const CoupledSystem>(bind_coupling(el, gas, {}));
  coupling::CoupledScenario sc;
  const auto ring = apply_contingency(sys, sc, {"line:L1", ContingencyClass::Line, "L1", 100});
  EXPECT_FALSE(ring.islanded);
  EXPECT_EQ(ring.system->electric().lines.size(), 3u);
  EXPECT_EQ(sys->electric().lines.size(), 4u);
  const Contingency radial{"line:L4", ContingencyClass::Line, "L4", 100};
  EXPECT_THROW(apply_contingency(sys, sc, radial), IslandingDetected);
  EXPECT_TRUE(apply_contingency(sys, sc, radial, true).islanded);
}

TEST(ApplyContingency, CompressorBecomesPassThrough) {
  const auto f = fixture::small_coupled(5.0);
  const auto c = apply_contingency(f.sys, f.scenario, {"compressor:K1", ContingencyClass::Compressor, "K1", 50});
  EXPECT_EQ(c.system->gas().compressors[0].ratio, 1.0);
  EXPECT_EQ(f.sys->gas().compressors[0].ratio, 1.1);
  EXPECT_EQ(c.system->electric_ptr(), f.sys->electric_ptr());  // untouched side is shared
}

TEST(ApplyContingency, PartialClusterLoss) {
  const auto sys = bottleneck_system();
  coupling::CoupledScenario sc;
  sc.uc.cluster_available = {std::vector<double>(2, 800), std::vector<double>(2, 200)};
  const auto c = apply_contingency(sys, sc, {"wind:WN", ContingencyClass::WindCluster, "WN", 250});
  EXPECT_DOUBLE_EQ(c.system->electric().clusters[0].capacity, 750);
  EXPECT_DOUBLE_EQ(c.scenario.uc.cluster_available[0][0], 600);
  EXPECT_DOUBLE_EQ(c.scenario.uc.cluster_available[1][0], 200);
}

TEST(Security, ShedFollowsCapacityArithmetic) {
  const auto f = security_fixture();
  const auto list = enumerate_contingencies(*f.sys);
  ASSERT_EQ(list.size(), 4u);  // G1..G3 and K1
  const auto base = run_base_case(f.sys, f.scenario);
  EXPECT_EQ(base.energy_not_served, 0.0);
  const auto records = run_security(f.sys, f.scenario, list);
  ASSERT_EQ(records.size(), list.size());
  // Fleet is 1300 MW against a 1000 MW afternoon.
  EXPECT_EQ(records[0].id, "plant:G1");
  EXPECT_NEAR(records[0].energy_not_served, 12 * 200.0, 1e-6);
  EXPECT_NEAR(records[1].energy_not_served, 12 * 300.0, 1e-6);
  EXPECT_NEAR(records[2].energy_not_served, 0.0, 1e-6);
  EXPECT_EQ(records[3].id, "compressor:K1");
  for (const auto& r : records) {
    EXPECT_NE(r.termination, "error") << r.error;
    EXPECT_GE(r.energy_not_served, base.energy_not_served - 1e-6);
  }
  const auto s = summarize(base, records);
  EXPECT_EQ(s.worst_id, "plant:G2");
  EXPECT_EQ(s.with_shed, 2u);
}

TEST(Security, WorkerCountDoesNotChangeRecords) {
  const auto f = security_fixture();
  const auto list = enumerate_contingencies(*f.sys);
  SecurityOptions one, four;
  four.jobs = 4;
  const auto a = run_security(f.sys, f.scenario, list, one);
  const auto b = run_security(f.sys, f.scenario, list, four);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].id, b[i].id);
    EXPECT_EQ(a[i].energy_not_served, b[i].energy_not_served);
    EXPECT_EQ(a[i].gas_curtailed_kg, b[i].gas_curtailed_kg);
    EXPECT_EQ(a[i].iterations, b[i].iterations);
    EXPECT_EQ(a[i].termination, b[i].termination);
  }
}

TEST(Security, FailuresAreRecorded) {
  const auto f = security_fixture();
  const std::vector<Contingency> bogus = {{"plant:GX", ContingencyClass::ConventionalPlant, "GX", 10}};
  const auto records = run_security(f.sys, f.scenario, bogus);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].termination, "error");
  EXPECT_FALSE(records[0].error.empty());
}
