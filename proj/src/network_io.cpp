#include "nexus/network_io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

#include "nexus/error.hpp"
#include "nexus/units.hpp"

namespace nexus {

using nlohmann::json;

namespace {

template <typename T>
T required(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ParseError(where + ": field '" + key + "': " + e.what());
  }
}

template <typename T>
T optional_field(const json& obj, const char* key, T fallback, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ParseError(where + ": field '" + key + "': " + e.what());
  }
}

const json& array_field(const json& doc, const char* key) {
  static const json empty = json::array();
  auto it = doc.find(key);
  if (it == doc.end()) return empty;
  if (!it->is_array()) throw ParseError(std::string("'") + key + "' must be an array");
  return *it;
}

std::string where(const char* kind, std::size_t i) {
  return std::string(kind) + "[" + std::to_string(i) + "]";
}

CompressorDrive drive_from_string(const std::string& s) {
  if (s == "gas") return CompressorDrive::Gas;
  if (s == "electric") return CompressorDrive::Electric;
  throw ParseError("unknown compressor drive '" + s + "'");
}

InjectorKind injector_kind_from_string(const std::string& s) {
  if (s == "terminal") return InjectorKind::Terminal;
  if (s == "storage") return InjectorKind::Storage;
  throw ParseError("unknown injector kind '" + s + "'");
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

ElectricNetwork electric_network_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("electric network document must be an object");
  ElectricNetwork net;
  net.base_mva = optional_field<double>(doc, "base_mva", 100.0, "electric");

  const auto& buses = array_field(doc, "buses");
  for (std::size_t i = 0; i < buses.size(); ++i) {
    const auto w = where("buses", i);
    net.buses.push_back({required<std::string>(buses[i], "id", w),
                         optional_field<bool>(buses[i], "reference", false, w)});
  }
  const auto& lines = array_field(doc, "lines");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto w = where("lines", i);
    const auto& l = lines[i];
    net.lines.push_back({required<std::string>(l, "id", w), required<std::string>(l, "from_bus", w),
                         required<std::string>(l, "to_bus", w), required<double>(l, "rating", w),
                         required<double>(l, "reactance", w)});
  }
  const auto& gens = array_field(doc, "generators");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const auto w = where("generators", i);
    const auto& j = gens[i];
    Generator g;
    g.id = required<std::string>(j, "id", w);
    g.bus = required<std::string>(j, "bus", w);
    g.tech = tech_from_string(required<std::string>(j, "tech", w));
    g.p_max = required<double>(j, "p_max", w);
    g.p_min_stable = optional_field<double>(j, "p_min_stable", 0.0, w);
    g.ramp_up = optional_field<double>(j, "ramp_up", g.p_max, w);
    g.ramp_down = optional_field<double>(j, "ramp_down", g.p_max, w);
    g.min_up = optional_field<int>(j, "min_up", 1, w);
    g.min_down = optional_field<int>(j, "min_down", 1, w);
    g.cost_energy = optional_field<double>(j, "cost_energy", 0.0, w);
    g.cost_startup = optional_field<double>(j, "cost_startup", 0.0, w);
    g.cost_shutdown = optional_field<double>(j, "cost_shutdown", 0.0, w);
    g.gfpp = optional_field<bool>(j, "gfpp_flag", is_gas_fired(g.tech), w);
    g.pump_capacity = optional_field<double>(
        j, "pump_capacity", g.tech == Tech::PumpedStorage ? g.p_max : 0.0, w);
    g.reservoir = optional_field<double>(j, "reservoir", 0.0, w);
    net.generators.push_back(std::move(g));
  }
  const auto& clusters = array_field(doc, "clusters");
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const auto w = where("clusters", i);
    const auto& j = clusters[i];
    RenewableCluster c;
    c.id = required<std::string>(j, "id", w);
    c.bus = required<std::string>(j, "bus", w);
    c.kind = tech_from_string(required<std::string>(j, "kind", w));
    c.capacity = required<double>(j, "capacity", w);
    c.curtailment_cost = optional_field<double>(j, "curtailment_cost", 0.0, w);
    c.resource_weight = optional_field<double>(j, "resource_weight", 0.0, w);
    net.clusters.push_back(std::move(c));
  }
  const auto& ics = array_field(doc, "interconnectors");
  for (std::size_t i = 0; i < ics.size(); ++i) {
    const auto w = where("interconnectors", i);
    net.interconnectors.push_back(
        {required<std::string>(ics[i], "id", w), required<std::string>(ics[i], "bus", w)});
  }
  return net;
}

GasFile gas_file_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("gas network document must be an object");
  GasFile file;
  if (auto it = doc.find("properties"); it != doc.end()) {
    const auto& p = *it;
    auto& props = file.properties;
    props.sound_speed = optional_field<double>(p, "sound_speed", props.sound_speed, "properties");
    props.gas_constant_b =
        optional_field<double>(p, "gas_constant_b", props.gas_constant_b, "properties");
    props.gravity = optional_field<double>(p, "gravity", props.gravity, "properties");
    props.temperature = optional_field<double>(p, "temperature", props.temperature, "properties");
    props.standard_density =
        optional_field<double>(p, "standard_density", props.standard_density, "properties");
    if (!(props.sound_speed > 0.0 && props.temperature > 0.0 && props.standard_density > 0.0)) {
      throw ParseError("properties: sound_speed, temperature and standard_density must be > 0");
    }
  }

  auto& net = file.network;
  const auto& nodes = array_field(doc, "nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto w = where("nodes", i);
    const auto& j = nodes[i];
    GasNode n;
    n.id = required<std::string>(j, "id", w);
    n.p_min = units::bar_to_pa(optional_field<double>(j, "p_min", 38.0, w));
    n.p_max = units::bar_to_pa(optional_field<double>(j, "p_max", 95.0, w));
    n.elevation = optional_field<double>(j, "elevation", 0.0, w);
    net.nodes.push_back(std::move(n));
  }
  const auto& pipes = array_field(doc, "pipes");
  for (std::size_t i = 0; i < pipes.size(); ++i) {
    const auto w = where("pipes", i);
    const auto& j = pipes[i];
    Pipe p;
    p.id = required<std::string>(j, "id", w);
    p.from_node = required<std::string>(j, "from_node", w);
    p.to_node = required<std::string>(j, "to_node", w);
    p.length = required<double>(j, "length", w);
    p.diameter = required<double>(j, "diameter", w);
    p.friction = optional_field<double>(j, "friction", 0.01, w);
    p.area = optional_field<double>(j, "area", std::numbers::pi * p.diameter * p.diameter / 4.0, w);
    p.height_change = optional_field<double>(j, "height_change", 0.0, w);
    net.pipes.push_back(std::move(p));
  }
  const auto& comps = array_field(doc, "compressors");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const auto w = where("compressors", i);
    const auto& j = comps[i];
    Compressor c;
    c.id = required<std::string>(j, "id", w);
    c.from_node = required<std::string>(j, "from_node", w);
    c.to_node = required<std::string>(j, "to_node", w);
    c.ratio = required<double>(j, "pressure_ratio", w);
    c.rated_power = optional_field<double>(j, "rated_power", 50.0, w);
    c.drive = drive_from_string(optional_field<std::string>(j, "drive", "gas", w));
    if (auto it = j.find("electric_bus"); it != j.end() && !it->is_null()) {
      c.electric_bus = it->get<std::string>();
    }
    net.compressors.push_back(std::move(c));
  }
  const auto& injs = array_field(doc, "injectors");
  for (std::size_t i = 0; i < injs.size(); ++i) {
    const auto w = where("injectors", i);
    const auto& j = injs[i];
    Injector inj;
    inj.id = required<std::string>(j, "id", w);
    inj.node = required<std::string>(j, "node", w);
    inj.kind = injector_kind_from_string(optional_field<std::string>(j, "kind", "terminal", w));
    inj.nominal_capacity = required<double>(j, "nominal_capacity", w);
    inj.scheduled_rate = optional_field<double>(j, "scheduled_rate", inj.nominal_capacity, w);
    net.injectors.push_back(std::move(inj));
  }
  if (auto it = doc.find("reference"); it != doc.end() && !it->is_null()) {
    net.reference = PressureReference{required<std::string>(*it, "node", "reference"),
                                      units::bar_to_pa(required<double>(*it, "pressure", "reference"))};
  }
  const auto& coupling = array_field(doc, "coupling");
  for (std::size_t i = 0; i < coupling.size(); ++i) {
    const auto w = where("coupling", i);
    const auto& j = coupling[i];
    file.coupling.entries.push_back({required<std::string>(j, "generator", w),
                                     required<std::string>(j, "gas_node", w),
                                     required<double>(j, "efficiency", w),
                                     required<double>(j, "hhv", w)});
  }
  return file;
}

json to_json(const ElectricNetwork& net) {
  json doc;
  doc["base_mva"] = net.base_mva;
  doc["buses"] = json::array();
  for (const auto& b : net.buses) doc["buses"].push_back({{"id", b.id}, {"reference", b.reference}});
  doc["lines"] = json::array();
  for (const auto& l : net.lines) {
    doc["lines"].push_back({{"id", l.id}, {"from_bus", l.from_bus}, {"to_bus", l.to_bus},
                            {"rating", l.rating}, {"reactance", l.reactance}});
  }
  doc["generators"] = json::array();
  for (const auto& g : net.generators) {
    json j = {{"id", g.id},
              {"bus", g.bus},
              {"tech", std::string(to_string(g.tech))},
              {"p_max", g.p_max},
              {"p_min_stable", g.p_min_stable},
              {"ramp_up", g.ramp_up},
              {"ramp_down", g.ramp_down},
              {"min_up", g.min_up},
              {"min_down", g.min_down},
              {"cost_energy", g.cost_energy},
              {"cost_startup", g.cost_startup},
              {"cost_shutdown", g.cost_shutdown},
              {"gfpp_flag", g.gfpp}};
    if (g.tech == Tech::PumpedStorage) {
      j["pump_capacity"] = g.pump_capacity;
      j["reservoir"] = g.reservoir;
    }
    doc["generators"].push_back(std::move(j));
  }
  doc["clusters"] = json::array();
  for (const auto& c : net.clusters) {
    doc["clusters"].push_back({{"id", c.id},
                               {"bus", c.bus},
                               {"kind", std::string(to_string(c.kind))},
                               {"capacity", c.capacity},
                               {"curtailment_cost", c.curtailment_cost},
                               {"resource_weight", c.resource_weight}});
  }
  doc["interconnectors"] = json::array();
  for (const auto& ic : net.interconnectors) {
    doc["interconnectors"].push_back({{"id", ic.id}, {"bus", ic.bus}});
  }
  return doc;
}

json to_json(const GasFile& file) {
  json doc;
  const auto& p = file.properties;
  doc["properties"] = {{"sound_speed", p.sound_speed},
                       {"gas_constant_b", p.gas_constant_b},
                       {"gravity", p.gravity},
                       {"temperature", p.temperature},
                       {"standard_density", p.standard_density}};
  const auto& net = file.network;
  doc["nodes"] = json::array();
  for (const auto& n : net.nodes) {
    doc["nodes"].push_back({{"id", n.id},
                            {"p_min", units::pa_to_bar(n.p_min)},
                            {"p_max", units::pa_to_bar(n.p_max)},
                            {"elevation", n.elevation}});
  }
  doc["pipes"] = json::array();
  for (const auto& pp : net.pipes) {
    doc["pipes"].push_back({{"id", pp.id},
                            {"from_node", pp.from_node},
                            {"to_node", pp.to_node},
                            {"length", pp.length},
                            {"diameter", pp.diameter},
                            {"friction", pp.friction},
                            {"area", pp.area},
                            {"height_change", pp.height_change}});
  }
  doc["compressors"] = json::array();
  for (const auto& c : net.compressors) {
    json j = {{"id", c.id},
              {"from_node", c.from_node},
              {"to_node", c.to_node},
              {"pressure_ratio", c.ratio},
              {"rated_power", c.rated_power},
              {"drive", c.drive == CompressorDrive::Gas ? "gas" : "electric"}};
    if (c.electric_bus) j["electric_bus"] = *c.electric_bus;
    doc["compressors"].push_back(std::move(j));
  }
  doc["injectors"] = json::array();
  for (const auto& inj : net.injectors) {
    doc["injectors"].push_back({{"id", inj.id},
                                {"node", inj.node},
                                {"kind", inj.kind == InjectorKind::Terminal ? "terminal" : "storage"},
                                {"nominal_capacity", inj.nominal_capacity},
                                {"scheduled_rate", inj.scheduled_rate}});
  }
  if (net.reference) {
    doc["reference"] = {{"node", net.reference->node},
                        {"pressure", units::pa_to_bar(net.reference->pressure)}};
  }
  doc["coupling"] = json::array();
  for (const auto& e : file.coupling.entries) {
    doc["coupling"].push_back({{"generator", e.generator},
                               {"gas_node", e.gas_node},
                               {"efficiency", e.efficiency},
                               {"hhv", e.hhv}});
  }
  return doc;
}

ElectricNetwork load_electric_network(const std::filesystem::path& path) {
  try {
    return electric_network_from_json(read_json_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

GasFile load_gas_file(const std::filesystem::path& path) {
  try {
    return gas_file_from_json(read_json_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace nexus
