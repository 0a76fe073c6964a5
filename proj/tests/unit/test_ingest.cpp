#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "coupled_fixture.hpp"
#include "nexus/error.hpp"
#include "nexus/ingest.hpp"
#include "nexus/network_io.hpp"
#include "nexus/units.hpp"

using namespace nexus;
using namespace nexus::ingest;
using nlohmann::json;

namespace {

json flat(double mw, int hours = 24) { return {{"unit", "MW"}, {"values", std::vector<double>(hours, mw)}}; }

json scenario_doc() {
  return {{"pathway", "test"},
          {"year", 2025},
          {"hours", 24},
          {"capacity", {{"unit", "GW"}, {"values", {{"CCGT", 1.0}}}}},
          {"load", flat(600)},
          {"wind", flat(0)},
          {"solar", flat(0)},
          {"gas_demand", {{"unit", "mcm/d"}, {"value", 1.0}}},
          {"reserve", {{"unit", "MW"}, {"value", 0}}}};
}

json shares(std::map<std::string, double> s) { return {{"unit", "fraction"}, {"shares", s}}; }
json split(std::map<std::string, double> s) { return {{"unit", "fraction"}, {"fractions", s}}; }

ElectricNetwork res_network(std::vector<std::pair<Tech, double>> clusters) {
  ElectricNetwork net;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const auto id = std::to_string(i + 1);
    net.buses.push_back({"B" + id, i == 0});
    net.clusters.push_back({"C" + id, "B" + id, clusters[i].first, clusters[i].second});
  }
  return net;
}

}  // namespace

TEST(LoadBundle, ConvertsUnits) {
  auto doc = scenario_doc();
  doc["gas_demand"]["value"] = 341.4;
  const auto b = bundle_from_json(doc, shares({{"B1", 1.0}}), split({{"N1", 1.0}}));
  EXPECT_DOUBLE_EQ(*b.capacity[static_cast<std::size_t>(Tech::Ccgt)], 1000.0);
  EXPECT_NEAR(b.gas_demand, 341.4e6 * 0.7165 / 86400.0, 1e-9);
  EXPECT_FALSE(b.capacity[static_cast<std::size_t>(Tech::Nuclear)].has_value());
}

TEST(LoadBundle, HourKeyedSeries) {
  auto doc = scenario_doc();
  json hours = json::object();
  for (int h = 1; h <= 24; ++h) hours[std::to_string(h)] = 10.0 * h;
  doc["load"] = {{"unit", "MW"}, {"values", hours}};
  const auto b = bundle_from_json(doc, shares({{"B1", 1.0}}), split({{"N1", 1.0}}));
  EXPECT_DOUBLE_EQ(b.load.front(), 10.0);
  EXPECT_DOUBLE_EQ(b.load.back(), 240.0);
}

TEST(LoadBundle, ShortSeriesIsRejected) {
  auto doc = scenario_doc();
  doc["load"] = flat(600, 23);
  EXPECT_THROW(bundle_from_json(doc, shares({{"B1", 1.0}}), split({{"N1", 1.0}})), SchemaError);
}

TEST(LoadBundle, MissingUnitTag) {
  auto doc = scenario_doc();
  doc["gas_demand"].erase("unit");
  EXPECT_THROW(bundle_from_json(doc, shares({{"B1", 1.0}}), split({{"N1", 1.0}})), UnitError);
  auto doc2 = scenario_doc();
  doc2["wind"]["unit"] = "mcm/d";
  EXPECT_THROW(bundle_from_json(doc2, shares({{"B1", 1.0}}), split({{"N1", 1.0}})), UnitError);
}

TEST(LoadBundle, SharesMustSumToOne) {
  EXPECT_THROW(bundle_from_json(scenario_doc(), shares({{"B1", 0.6}, {"B2", 0.3}}), split({{"N1", 1.0}})),
               SchemaError);
  EXPECT_THROW(bundle_from_json(scenario_doc(), shares({{"B1", 1.0}}), split({{"N1", 0.5}})), SchemaError);
}

TEST(LoadBundle, ReadsDirectory) {
  const auto dir = std::filesystem::temp_directory_path() / "nexus_bundle_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "scenario.json") << scenario_doc().dump();
  std::ofstream(dir / "load_snapshot.json") << shares({{"B1", 1.0}}).dump();
  std::ofstream(dir / "gas_demand_split.json") << split({{"N1", 1.0}}).dump();
  const auto b = load_bundle(dir);
  EXPECT_EQ(b.pathway, "test");
  EXPECT_EQ(b.electric_network, dir / "electric.json");
  std::ofstream(dir / "gas_demand_split.json") << "{ not json";
  EXPECT_THROW(load_bundle(dir), SchemaError);
  std::filesystem::remove_all(dir);
}

TEST(GasSchedules, NationalDemandLandsOnTheNodes) {
  auto doc = scenario_doc();
  doc["gas_demand"]["value"] = 341.4;
  const auto b = bundle_from_json(doc, shares({{"B1", 1.0}}), split({{"N1", 0.25}, {"N2", 0.5}, {"N3", 0.25}}));
  const auto f = fixture::small_coupled(5.0);
  const auto s = gas_schedules(b, f.sys->gas());
  double total = 0.0;
  for (const auto& d : s.demands) {
    EXPECT_TRUE(d.firm);
    ASSERT_EQ(d.profile.size(), 24u);
    total += d.profile[12];
  }
  EXPECT_NEAR(units::kgs_to_mcmd(total, 0.7165), 341.4, 1e-9);
}

TEST(GasSchedules, ExportIsAnOfftakeAtItsNode) {
  auto doc = scenario_doc();
  doc["year"] = 2050;
  doc["gas_export"] = {{"unit", "mcm/d"}, {"value", 19.9}, {"node", "N5"}};
  const auto b = bundle_from_json(doc, shares({{"B1", 1.0}}), split({{"N1", 1.0}}));
  const auto f = fixture::small_coupled(5.0);
  const auto s = gas_schedules(b, f.sys->gas());
  ASSERT_EQ(s.demands.size(), 2u);
  EXPECT_EQ(s.demands[1].node, "N5");
  EXPECT_NEAR(units::kgs_to_mcmd(s.demands[1].profile[0], 0.7165), 19.9, 1e-9);

  doc["gas_export"]["node"] = "N9";
  const auto bad = bundle_from_json(doc, shares({{"B1", 1.0}}), split({{"N1", 1.0}}));
  EXPECT_THROW(gas_schedules(bad, f.sys->gas()), SchemaError);
}

TEST(GasSchedules, SupplySplitsByNominalCapacity) {
  auto gas = fixture::small_coupled(5.0).sys->gas();
  gas.injectors.push_back({"S1", "N2", InjectorKind::Storage, 33.0, 0.0});  // T1 has 11
  auto doc = scenario_doc();
  doc["gas_supply"] = {{"unit", "kg/s"}, {"value", 40.0}};
  const auto b = bundle_from_json(doc, shares({{"B1", 1.0}}), split({{"N1", 1.0}}));
  const auto s = gas_schedules(b, gas);
  EXPECT_NEAR(s.injector_rate[0], 10.0, 1e-12);
  EXPECT_NEAR(s.injector_rate[1], 30.0, 1e-12);
}

TEST(DisaggregateCapacity, WindFollowsExistingSites) {
  auto net = res_network({{Tech::Wind, 200}, {Tech::Wind, 300}});
  ScenarioBundle b;
  b.capacity[static_cast<std::size_t>(Tech::Wind)] = 10000;
  const auto a = disaggregate_capacity(b, net);
  EXPECT_NEAR(a.cluster[0], 4000, 1e-9);
  EXPECT_NEAR(a.cluster[1], 6000, 1e-9);
}

TEST(DisaggregateCapacity, SolarIsUniform) {
  std::vector<std::pair<Tech, double>> sites;
  for (int i = 0; i < 9; ++i) sites.push_back({Tech::Solar, 10.0 * (i + 1)});
  const auto net = res_network(sites);
  ScenarioBundle b;
  b.capacity[static_cast<std::size_t>(Tech::Solar)] = 9000;
  const auto a = disaggregate_capacity(b, net);
  for (double mw : a.cluster) EXPECT_NEAR(mw, 1000, 1e-9);
}

TEST(DisaggregateCapacity, NoSiteForTech) {
  const auto f = fixture::small_coupled(5.0);
  ScenarioBundle b;
  b.capacity[static_cast<std::size_t>(Tech::Nuclear)] = 1200;
  EXPECT_THROW(disaggregate_capacity(b, f.sys->electric()), NoHostBus);
  b.capacity[static_cast<std::size_t>(Tech::Nuclear)] = 0;
  EXPECT_NO_THROW(disaggregate_capacity(b, f.sys->electric()));
}

TEST(DisaggregateCapacity, AppliedRatingsScaleLimits) {
  auto net = fixture::small_coupled(5.0).sys->electric();
  net.generators[0].p_min_stable = 100;
  ScenarioBundle b;
  b.capacity[static_cast<std::size_t>(Tech::Ccgt)] = 1000;
  const auto out = apply_capacity(net, disaggregate_capacity(b, net));
  EXPECT_DOUBLE_EQ(out.generators[0].p_max, 1000);
  EXPECT_DOUBLE_EQ(out.generators[0].p_min_stable, 200);
  EXPECT_DOUBLE_EQ(out.generators[0].ramp_up, 1000);
  EXPECT_DOUBLE_EQ(out.generators[1].p_max, 600);  // coal not in the bundle
}

TEST(DisaggregateLoad, ScalesTheSnapshot) {
  ElectricNetwork net;
  net.buses = {{"B1", true}, {"B2"}, {"B3"}, {"B4"}};
  ScenarioBundle b;
  b.load = {10000, 0, 50000};
  const auto out = disaggregate_load(b, {{{"B1", 0.5}, {"B2", 0.3}, {"B3", 0.2}}}, net);
  EXPECT_DOUBLE_EQ(out[0][0], 5000);
  EXPECT_DOUBLE_EQ(out[1][0], 3000);
  EXPECT_DOUBLE_EQ(out[2][0], 2000);
  EXPECT_DOUBLE_EQ(out[3][0], 0);
  for (const auto& bus : out) EXPECT_EQ(bus[1], 0.0);
  const auto tenth = disaggregate_load(b, {{{"B1", 0.1}, {"B2", 0.9}}}, net);
  EXPECT_DOUBLE_EQ(tenth[0][2], 5000);
  EXPECT_THROW(disaggregate_load(b, {{{"B9", 1.0}}}, net), SchemaError);
}

TEST(ScaleResProfiles, ProportionalToCapacity) {
  const auto net = res_network({{Tech::Wind, 4000}, {Tech::Wind, 6000}});
  ScenarioBundle b;
  b.horizon = 1;
  b.wind = {5000};
  b.solar = {0};
  const auto out = scale_res_profiles(b, net.clusters);
  EXPECT_NEAR(out[0][0], 2000, 1e-9);
  EXPECT_NEAR(out[1][0], 3000, 1e-9);
}

TEST(ScaleResProfiles, ClampsAndRedistributes) {
  auto net = res_network({{Tech::Wind, 1000}, {Tech::Wind, 9000}});
  ScenarioBundle b;
  b.horizon = 2;
  b.wind = {9000, 9500};
  b.solar = {0, 0};
  auto out = scale_res_profiles(b, net.clusters);
  EXPECT_NEAR(out[0][0], 900, 1e-9);
  EXPECT_NEAR(out[1][0], 8100, 1e-9);
  // Capacity weights never push a cluster past its rating.
  EXPECT_NEAR(out[0][1], 950, 1e-9);
  EXPECT_NEAR(out[1][1], 8550, 1e-9);

  // Equal resource weights: 4750 each, the small cluster clamps at 1000 and
  // the other takes the remaining 8500.
  for (auto& c : net.clusters) c.resource_weight = 1.0;
  out = scale_res_profiles(b, net.clusters);
  EXPECT_NEAR(out[0][1], 1000, 1e-9);
  EXPECT_NEAR(out[1][1], 8500, 1e-9);
}

TEST(ScaleResProfiles, ClampCascades) {
  auto net = res_network({{Tech::Solar, 100}, {Tech::Solar, 300}, {Tech::Solar, 1000}});
  for (auto& c : net.clusters) c.resource_weight = 1.0;
  ScenarioBundle b;
  b.horizon = 1;
  b.wind = {0};
  b.solar = {1300};
  // 433.3 each clamps the first two (100, 300), the third takes 900.
  const auto out = scale_res_profiles(b, net.clusters);
  EXPECT_NEAR(out[0][0], 100, 1e-9);
  EXPECT_NEAR(out[1][0], 300, 1e-9);
  EXPECT_NEAR(out[2][0], 900, 1e-9);
}

TEST(ScaleResProfiles, AboveInstalledNamesTheHour) {
  const auto net = res_network({{Tech::Wind, 4000}, {Tech::Wind, 6000}});
  ScenarioBundle b;
  b.horizon = 3;
  b.wind = {5000, 10001, 0};
  b.solar = {0, 0, 0};
  try {
    scale_res_profiles(b, net.clusters);
    FAIL() << "expected InfeasibleProfile";
  } catch (const InfeasibleProfile& e) {
    EXPECT_NE(std::string(e.what()).find("hour 2"), std::string::npos);
  }
}

TEST(Disaggregation, ConservesNationalTotals) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    ElectricNetwork net;
    const int nb = 3 + trial % 7;
    LoadSnapshot snap;
    double wsum = 0.0;
    std::vector<double> w(nb);
    for (int i = 0; i < nb; ++i) wsum += (w[i] = u(rng) + 0.01);
    for (int i = 0; i < nb; ++i) {
      const auto id = "B" + std::to_string(i + 1);
      net.buses.push_back({id, i == 0});
      snap.shares[id] = w[i] / wsum;
      net.clusters.push_back({"W" + std::to_string(i), id, Tech::Wind, 100.0 + 900.0 * u(rng), 0.0,
                              trial % 2 ? u(rng) + 0.1 : 0.0});
      Generator g;
      g.id = "G" + std::to_string(i);
      g.bus = id;
      g.tech = i % 2 ? Tech::Ccgt : Tech::Coal;
      g.p_max = 50.0 + 500.0 * u(rng);
      net.generators.push_back(g);
    }
    ScenarioBundle b;
    b.horizon = 24;
    b.capacity[static_cast<std::size_t>(Tech::Ccgt)] = 30000.0 * u(rng);
    b.capacity[static_cast<std::size_t>(Tech::Coal)] = 10000.0 * u(rng);
    b.capacity[static_cast<std::size_t>(Tech::Wind)] = 20000.0 * u(rng) + 1000.0;
    const auto alloc = disaggregate_capacity(b, net);
    const auto scaled = apply_capacity(net, alloc);
    for (Tech tech : {Tech::Ccgt, Tech::Coal}) {
      double sum = 0.0;
      for (std::size_t g = 0; g < scaled.generators.size(); ++g)
        if (scaled.generators[g].tech == tech) sum += scaled.generators[g].p_max;
      const double want = *b.capacity[static_cast<std::size_t>(tech)];
      EXPECT_NEAR(sum, want, 1e-9 * want);
    }
    const double wind_cap = *b.capacity[static_cast<std::size_t>(Tech::Wind)];
    double wind_sum = 0.0;
    for (const auto& c : scaled.clusters) wind_sum += c.capacity;
    EXPECT_NEAR(wind_sum, wind_cap, 1e-9 * wind_cap);

    for (int t = 0; t < 24; ++t) {
      b.load.push_back(60000.0 * u(rng));
      b.wind.push_back(wind_cap * u(rng));
      b.solar.push_back(0.0);
    }
    const auto load = disaggregate_load(b, snap, net);
    const auto avail = scale_res_profiles(b, scaled.clusters);
    for (int t = 0; t < 24; ++t) {
      double l = 0.0, r = 0.0;
      for (int i = 0; i < nb; ++i) {
        l += load[i][t];
        r += avail[i][t];
        EXPECT_LE(avail[i][t], scaled.clusters[i].capacity * (1 + 1e-12));
      }
      EXPECT_NEAR(l, b.load[t], 1e-9 * std::max(1.0, b.load[t]));
      EXPECT_NEAR(r, b.wind[t], 1e-9 * std::max(1.0, b.wind[t]));
    }
  }
}

TEST(Disaggregation, Deterministic) {
  const auto net = res_network({{Tech::Wind, 123.4}, {Tech::Wind, 567.8}, {Tech::Solar, 9}});
  ScenarioBundle b;
  b.horizon = 3;
  b.wind = {100, 600, 691.2};
  b.solar = {0, 4.5, 9};
  EXPECT_EQ(scale_res_profiles(b, net.clusters), scale_res_profiles(b, net.clusters));
}
