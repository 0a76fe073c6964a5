#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace nexus {

enum class Tech {
  Hydro,
  PumpedStorage,
  Nuclear,
  Ocgt,
  Ccgt,
  Coal,
  BioLignite,
  Oil,
  Wind,
  Solar,
  RoR,
};

inline constexpr std::size_t kTechCount = 11;

std::string_view to_string(Tech tech);
/// Accepts the canonical names ("CCGT", "Bio/Lignite", ...), case-insensitive.
Tech tech_from_string(std::string_view name);
bool is_renewable(Tech tech);
bool is_gas_fired(Tech tech);

/// Natural ordering of identifiers: digit runs compare numerically, so
/// "L2" < "L10".
bool natural_less(std::string_view a, std::string_view b);

// ---------------------------------------------------------------------------
// Electric side

struct Bus {
  std::string id;
  bool reference = false;
};

struct Line {
  std::string id;
  std::string from_bus;
  std::string to_bus;
  double rating = 0.0;     // MW
  double reactance = 0.0;  // p.u. on the network base
};

struct Generator {
  std::string id;
  std::string bus;
  Tech tech = Tech::Ccgt;
  double p_max = 0.0;         // MW
  double p_min_stable = 0.0;  // MW
  double ramp_up = 0.0;       // MW/h
  double ramp_down = 0.0;     // MW/h
  int min_up = 1;             // h
  int min_down = 1;           // h
  double cost_energy = 0.0;   // currency/MWh
  double cost_startup = 0.0;  // currency
  double cost_shutdown = 0.0; // currency
  bool gfpp = false;
  // Pumped storage only: pump rating and energy that may be drawn from the
  // upper reservoir beyond what is pumped back within the horizon.
  double pump_capacity = 0.0;  // MW
  double reservoir = 0.0;      // MWh
};

struct RenewableCluster {
  std::string id;
  std::string bus;
  Tech kind = Tech::Wind;  // Wind, Solar or RoR
  double capacity = 0.0;   // MW
  double curtailment_cost = 0.0;  // currency/MWh
  // Relative resource weight used when spreading a national RES series;
  // 0 means "proportional to capacity".
  double resource_weight = 0.0;
};

/// Cross-border connection whose exchange is a fixed nodal injection.
struct Interconnector {
  std::string id;
  std::string bus;
};

struct ElectricNetwork {
  double base_mva = 100.0;
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<Generator> generators;
  std::vector<RenewableCluster> clusters;
  std::vector<Interconnector> interconnectors;

  std::optional<std::size_t> bus_index(std::string_view id) const;
  std::optional<std::size_t> generator_index(std::string_view id) const;
  std::optional<std::size_t> cluster_index(std::string_view id) const;
  std::optional<std::size_t> line_index(std::string_view id) const;
};

// ---------------------------------------------------------------------------
// Gas side

struct GasNode {
  std::string id;
  double p_min = 38.0e5;  // Pa
  double p_max = 95.0e5;  // Pa
  double elevation = 0.0; // m
};

struct Pipe {
  std::string id;
  std::string from_node;
  std::string to_node;
  double length = 0.0;         // m
  double diameter = 0.0;       // m
  double friction = 0.01;      // hydraulic resistance coefficient
  double area = 0.0;           // m^2
  double height_change = 0.0;  // m, to_node minus from_node
};

enum class CompressorDrive { Gas, Electric };

struct Compressor {
  std::string id;
  std::string from_node;
  std::string to_node;
  double ratio = 1.0;
  double rated_power = 50.0;  // MW
  CompressorDrive drive = CompressorDrive::Gas;
  std::optional<std::string> electric_bus;
};

enum class InjectorKind { Terminal, Storage };

struct Injector {
  std::string id;
  std::string node;
  InjectorKind kind = InjectorKind::Terminal;
  double nominal_capacity = 0.0;  // kg/s
  double scheduled_rate = 0.0;    // kg/s
};

/// Mass off-take series at one node, one value per hour (kg/s).
struct GasDemand {
  std::string node;
  std::vector<double> profile;
  bool firm = true;
};

struct GasProperties {
  double sound_speed = 350.0;        // m/s
  double gas_constant_b = 0.0;       // m^3/kg, temperature term only
  double gravity = 9.81;             // m/s^2
  double temperature = 288.15;       // K
  double standard_density = 0.7165;  // kg/m^3
};

/// Pressure anchor used to fix the absolute level of a steady state.
struct PressureReference {
  std::string node;
  double pressure = 0.0;  // Pa
};

struct GasNetwork {
  std::vector<GasNode> nodes;
  std::vector<Pipe> pipes;
  std::vector<Compressor> compressors;
  std::vector<Injector> injectors;
  std::optional<PressureReference> reference;

  std::optional<std::size_t> node_index(std::string_view id) const;
  std::optional<std::size_t> compressor_index(std::string_view id) const;
};

// ---------------------------------------------------------------------------
// Coupling

struct CouplingEntry {
  std::string generator;
  std::string gas_node;
  double efficiency = 0.5;  // (0, 1]
  double hhv = 50.0e6;      // J/kg
};

struct CouplingMap {
  std::vector<CouplingEntry> entries;
};

struct Finding {
  std::string category;  // "line", "bus", "topology", "node", "pipe", ...
  std::string element;
  std::string message;

  bool operator==(const Finding&) const = default;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool empty() const { return findings.empty(); }
  bool contains(std::string_view category, std::string_view message) const;
  bool operator==(const ValidationReport&) const = default;
};

ValidationReport validate_electric_network(const ElectricNetwork& net);
ValidationReport validate_gas_network(const GasNetwork& net);

/// Connected components of the electric graph; each entry lists bus indices.
std::vector<std::vector<std::size_t>> electric_islands(const ElectricNetwork& net);

/// Compressor-delimited zones: connected components over pipes only.
struct GasZones {
  std::vector<std::string> ids;           // one per zone, "Z1", "Z2", ...
  std::vector<std::size_t> zone_of_node;  // node index -> zone index
};
GasZones gas_zones(const GasNetwork& net);

/// Immutable, validated pairing of both networks. Shared read-only between
/// concurrent study workers.
class CoupledSystem {
 public:
  struct Binding {
    std::size_t generator;  // index into electric().generators
    std::size_t gas_node;   // index into gas().nodes
    double efficiency;
    double hhv;
  };

  CoupledSystem(std::shared_ptr<const ElectricNetwork> electric,
                std::shared_ptr<const GasNetwork> gas, CouplingMap map,
                GasProperties properties);

  const ElectricNetwork& electric() const { return *electric_; }
  const GasNetwork& gas() const { return *gas_; }
  const std::shared_ptr<const ElectricNetwork>& electric_ptr() const { return electric_; }
  const std::shared_ptr<const GasNetwork>& gas_ptr() const { return gas_; }
  const CouplingMap& coupling() const { return map_; }
  const GasProperties& properties() const { return properties_; }
  const std::vector<Binding>& bindings() const { return bindings_; }
  const GasZones& zones() const { return zones_; }

  /// Binding of a generator index, if it is a GFPP.
  const Binding* binding_for(std::size_t generator) const;

 private:
  std::shared_ptr<const ElectricNetwork> electric_;
  std::shared_ptr<const GasNetwork> gas_;
  CouplingMap map_;
  GasProperties properties_;
  std::vector<Binding> bindings_;
  std::vector<int> binding_of_generator_;
  GasZones zones_;
};

/// Resolves every GFPP-flagged generator to its gas node.
/// Throws UnboundGfpp or DanglingNode.
CoupledSystem bind_coupling(const ElectricNetwork& electric, const GasNetwork& gas,
                            const CouplingMap& map, const GasProperties& properties = {});
CoupledSystem bind_coupling(std::shared_ptr<const ElectricNetwork> electric,
                            std::shared_ptr<const GasNetwork> gas, const CouplingMap& map,
                            const GasProperties& properties = {});

}  // namespace nexus
