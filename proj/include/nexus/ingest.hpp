#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nexus/coupling.hpp"
#include "nexus/network.hpp"

namespace nexus::ingest {

/// Per-bus share of national load.
struct LoadSnapshot {
  std::map<std::string, double> shares;
};

/// One planning-model output window. Everything is converted on load:
/// electric quantities to MW, gas quantities to kg/s.
struct ScenarioBundle {
  std::string pathway;
  int year = 0;
  int horizon = 24;

  std::array<std::optional<double>, kTechCount> capacity;  // national MW; unset = keep the network value
  std::vector<double> load;   // [t] MW
  std::vector<double> wind;   // [t] MW
  std::vector<double> solar;  // [t] MW
  std::vector<double> ror;    // [t] MW, empty when the bundle has none
  std::map<std::string, std::vector<double>> interconnectors;  // id -> [t] MW, import > 0

  double gas_demand = 0.0;                     // non-electric, kg/s
  std::map<std::string, double> gas_split;     // node -> fraction
  double gas_export = 0.0;                     // kg/s
  std::string gas_export_node;
  std::optional<double> gas_supply;            // kg/s over all injectors; unset = network schedule
  double reserve = 8000.0;                     // MW
  double standard_density = 0.7165;            // kg/m^3 used for the conversions

  LoadSnapshot snapshot;
  std::filesystem::path electric_network;  // resolved paths of the network files
  std::filesystem::path gas_network;
};

/// Reads scenario.json, load_snapshot.json and gas_demand_split.json from a
/// bundle directory. Throws SchemaError, UnitError.
ScenarioBundle load_bundle(const std::filesystem::path& dir);
ScenarioBundle bundle_from_json(const nlohmann::json& scenario, const nlohmann::json& snapshot,
                                const nlohmann::json& split);

struct CapacityAllocation {
  std::vector<double> generator;  // [generator] MW
  std::vector<double> cluster;    // [cluster] MW
};

/// Same-tech, same-site scaling for plants and wind/RoR clusters, uniform
/// spread over the solar clusters. Throws NoHostBus.
CapacityAllocation disaggregate_capacity(const ScenarioBundle& bundle, const ElectricNetwork& net);

/// Copy of `net` with the allocation applied. Stable output, ramp limits and
/// pump ratings scale with each plant's rating.
ElectricNetwork apply_capacity(const ElectricNetwork& net, const CapacityAllocation& alloc);

/// [bus][t] MW, share(bus) * national load(t); buses missing from the
/// snapshot get nothing.
std::vector<std::vector<double>> disaggregate_load(const ScenarioBundle& bundle, const LoadSnapshot& snapshot,
                                                   const ElectricNetwork& net);

/// [cluster][t] MW. Each kind's national series is spread in proportion to
/// the cluster weights (capacity unless resource_weight is set), clamped at
/// capacity with the excess handed to the unclamped clusters until nothing
/// moves. Throws InfeasibleProfile.
std::vector<std::vector<double>> scale_res_profiles(const ScenarioBundle& bundle,
                                                    const std::vector<RenewableCluster>& clusters);

/// Firm nodal off-takes (non-electric split plus export) and injector rates.
/// With a supply total the terminals and storages share it in proportion to
/// nominal capacity.
gas::Schedules gas_schedules(const ScenarioBundle& bundle, const GasNetwork& net);

/// Everything a coupled solve needs, with `net` already holding the
/// disaggregated capacities.
coupling::CoupledScenario build_scenario(const ScenarioBundle& bundle, const ElectricNetwork& net,
                                         const GasNetwork& gas_net);

/// Bundle plus the coupled system rebuilt on the disaggregated electric side.
struct LoadedScenario {
  ScenarioBundle bundle;
  std::shared_ptr<const CoupledSystem> system;
  coupling::CoupledScenario scenario;
};
LoadedScenario load_scenario(const std::filesystem::path& dir);

/// Every problem found in a bundle directory, network files included, as
/// findings rather than exceptions. Also flags exports and firm demand that
/// the injectors cannot supply.
ValidationReport validate_scenario(const std::filesystem::path& dir);

}  // namespace nexus::ingest
