#include "nexus/network.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <unordered_set>

#include "nexus/error.hpp"

namespace nexus {

namespace {

constexpr std::array<std::string_view, kTechCount> kTechNames = {
    "Hydro", "PS", "Nuclear", "OCGT", "CCGT", "Coal", "Bio/Lignite", "Oil", "Wind", "Solar", "RoR"};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

template <typename T>
std::optional<std::size_t> find_by_id(const std::vector<T>& items, std::string_view id) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].id == id) return i;
  }
  return std::nullopt;
}

// Tiny union-find used for island and zone detection.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

template <typename T>
void check_duplicates(const std::vector<T>& items, std::string_view category,
                      ValidationReport& report) {
  std::unordered_set<std::string> seen;
  for (const auto& item : items) {
    if (!seen.insert(item.id).second) {
      report.findings.push_back({std::string(category), item.id, "duplicate id"});
    }
  }
}

}  // namespace

std::string_view to_string(Tech tech) { return kTechNames[static_cast<std::size_t>(tech)]; }

Tech tech_from_string(std::string_view name) {
  const std::string key = lower(name);
  for (std::size_t i = 0; i < kTechCount; ++i) {
    if (lower(kTechNames[i]) == key) return static_cast<Tech>(i);
  }
  if (key == "pumped storage" || key == "pumped-storage" || key == "pumped_storage") return Tech::PumpedStorage;
  if (key == "bio" || key == "lignite" || key == "bio-lignite") return Tech::BioLignite;
  if (key == "ror" || key == "run-of-river") return Tech::RoR;
  throw ParseError("unknown technology '" + std::string(name) + "'");
}

bool is_renewable(Tech tech) {
  return tech == Tech::Wind || tech == Tech::Solar || tech == Tech::RoR;
}

bool is_gas_fired(Tech tech) { return tech == Tech::Ocgt || tech == Tech::Ccgt; }

bool natural_less(std::string_view a, std::string_view b) {
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (digit(a[i]) && digit(b[j])) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && digit(a[ie])) ++ie;
      while (je < b.size() && digit(b[je])) ++je;
      // Compare numerically without overflow: strip zeros, then length, then text.
      std::size_t is = i, js = j;
      while (is + 1 < ie && a[is] == '0') ++is;
      while (js + 1 < je && b[js] == '0') ++js;
      const auto na = a.substr(is, ie - is), nb = b.substr(js, je - js);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if (a.size() - i != b.size() - j) return a.size() - i < b.size() - j;
  return a < b;
}

std::optional<std::size_t> ElectricNetwork::bus_index(std::string_view id) const {
  return find_by_id(buses, id);
}
std::optional<std::size_t> ElectricNetwork::generator_index(std::string_view id) const {
  return find_by_id(generators, id);
}
std::optional<std::size_t> ElectricNetwork::cluster_index(std::string_view id) const {
  return find_by_id(clusters, id);
}
std::optional<std::size_t> ElectricNetwork::line_index(std::string_view id) const {
  return find_by_id(lines, id);
}
std::optional<std::size_t> GasNetwork::node_index(std::string_view id) const {
  return find_by_id(nodes, id);
}
std::optional<std::size_t> GasNetwork::compressor_index(std::string_view id) const {
  return find_by_id(compressors, id);
}

bool ValidationReport::contains(std::string_view category, std::string_view message) const {
  return std::any_of(findings.begin(), findings.end(), [&](const Finding& f) {
    return f.category == category && f.message == message;
  });
}

std::vector<std::vector<std::size_t>> electric_islands(const ElectricNetwork& net) {
  DisjointSets sets(net.buses.size());
  for (const auto& line : net.lines) {
    auto a = net.bus_index(line.from_bus);
    auto b = net.bus_index(line.to_bus);
    if (a && b) sets.unite(*a, *b);
  }
  std::vector<std::vector<std::size_t>> islands;
  std::vector<int> island_of_root(net.buses.size(), -1);
  for (std::size_t i = 0; i < net.buses.size(); ++i) {
    const std::size_t root = sets.find(i);
    if (island_of_root[root] < 0) {
      island_of_root[root] = static_cast<int>(islands.size());
      islands.emplace_back();
    }
    islands[static_cast<std::size_t>(island_of_root[root])].push_back(i);
  }
  return islands;
}

ValidationReport validate_electric_network(const ElectricNetwork& net) {
  ValidationReport report;
  auto add = [&](std::string category, std::string element, std::string message) {
    report.findings.push_back({std::move(category), std::move(element), std::move(message)});
  };

  check_duplicates(net.buses, "bus", report);
  check_duplicates(net.lines, "line", report);
  check_duplicates(net.generators, "generator", report);
  check_duplicates(net.clusters, "cluster", report);

  for (const auto& line : net.lines) {
    for (const auto* end : {&line.from_bus, &line.to_bus}) {
      if (!net.bus_index(*end)) add("line", line.id, "unknown endpoint " + *end);
    }
    if (line.from_bus == line.to_bus) add("line", line.id, "self-loop");
    if (!(line.rating > 0.0)) add("line", line.id, "nonpositive rating");
    if (!(line.reactance > 0.0)) add("line", line.id, "nonpositive reactance");
  }

  for (const auto& g : net.generators) {
    if (!net.bus_index(g.bus)) add("generator", g.id, "unknown bus " + g.bus);
    if (is_renewable(g.tech)) add("generator", g.id, "renewable technology must be a cluster");
    if (g.p_min_stable < 0.0 || g.p_min_stable > g.p_max) {
      add("generator", g.id, "minimum stable generation outside [0, p_max]");
    }
    if (g.ramp_up < 0.0 || g.ramp_down < 0.0) add("generator", g.id, "negative ramp rate");
    if (g.min_up < 1 || g.min_down < 1) add("generator", g.id, "minimum up/down time below 1 h");
    if (g.cost_energy < 0.0 || g.cost_startup < 0.0 || g.cost_shutdown < 0.0) {
      add("generator", g.id, "negative cost coefficient");
    }
    if (g.gfpp != is_gas_fired(g.tech)) add("generator", g.id, "gfpp flag inconsistent with tech");
    if (g.pump_capacity < 0.0 || g.reservoir < 0.0) add("generator", g.id, "negative storage data");
  }

  for (const auto& c : net.clusters) {
    if (!net.bus_index(c.bus)) add("cluster", c.id, "unknown bus " + c.bus);
    if (!is_renewable(c.kind)) add("cluster", c.id, "cluster kind must be wind, solar or RoR");
    if (!(c.capacity > 0.0)) add("cluster", c.id, "nonpositive capacity");
    if (c.curtailment_cost < 0.0) add("cluster", c.id, "negative curtailment cost");
  }

  for (const auto& ic : net.interconnectors) {
    if (!net.bus_index(ic.bus)) add("interconnector", ic.id, "unknown bus " + ic.bus);
  }

  if (net.buses.empty()) {
    add("topology", "", "network has no buses");
    return report;
  }
  const auto islands = electric_islands(net);
  if (islands.size() > 1) add("topology", "", "network is not connected");
  for (const auto& island : islands) {
    const auto slacks = std::count_if(island.begin(), island.end(),
                                      [&](std::size_t b) { return net.buses[b].reference; });
    const std::string& anchor = net.buses[island.front()].id;
    if (slacks == 0) add("topology", anchor, "island without reference bus");
    if (slacks > 1) add("topology", anchor, "multiple slack buses");
  }
  return report;
}

ValidationReport validate_gas_network(const GasNetwork& net) {
  ValidationReport report;
  auto add = [&](std::string category, std::string element, std::string message) {
    report.findings.push_back({std::move(category), std::move(element), std::move(message)});
  };

  check_duplicates(net.nodes, "node", report);
  check_duplicates(net.pipes, "pipe", report);
  check_duplicates(net.compressors, "compressor", report);
  check_duplicates(net.injectors, "injector", report);

  for (const auto& n : net.nodes) {
    if (!(n.p_min > 0.0)) add("node", n.id, "nonpositive minimum pressure");
    if (!(n.p_min < n.p_max)) add("node", n.id, "empty pressure band");
  }

  DisjointSets sets(net.nodes.size());
  auto link = [&](const std::string& category, const std::string& id, const std::string& a,
                  const std::string& b) {
    auto ia = net.node_index(a);
    auto ib = net.node_index(b);
    if (!ia) add(category, id, "unknown endpoint " + a);
    if (!ib) add(category, id, "unknown endpoint " + b);
    if (ia && ib) sets.unite(*ia, *ib);
    if (a == b) add(category, id, "self-loop");
  };

  for (const auto& p : net.pipes) {
    link("pipe", p.id, p.from_node, p.to_node);
    if (!(p.length > 0.0)) add("pipe", p.id, "nonpositive length");
    if (!(p.diameter > 0.0)) {
      add("pipe", p.id, "nonpositive diameter");
    } else {
      const double expected = std::numbers::pi * p.diameter * p.diameter / 4.0;
      if (std::abs(p.area - expected) > 1e-9 * expected) {
        add("pipe", p.id, "cross-section inconsistent with diameter");
      }
    }
    if (!(p.friction > 0.0 && p.friction <= 0.1)) add("pipe", p.id, "friction out of range");
  }

  for (const auto& c : net.compressors) {
    link("compressor", c.id, c.from_node, c.to_node);
    if (c.ratio < 1.0) add("compressor", c.id, "ratio below 1");
    if (!(c.rated_power > 0.0)) add("compressor", c.id, "nonpositive rated power");
    if (c.drive == CompressorDrive::Electric && !c.electric_bus) {
      add("compressor", c.id, "electric drive without bus");
    }
  }

  for (const auto& inj : net.injectors) {
    if (!net.node_index(inj.node)) add("injector", inj.id, "unknown node " + inj.node);
    if (inj.scheduled_rate < 0.0 || inj.scheduled_rate > inj.nominal_capacity) {
      add("injector", inj.id, "scheduled rate outside [0, nominal capacity]");
    }
  }

  if (net.reference && !net.node_index(net.reference->node)) {
    add("reference", net.reference->node, "unknown reference node");
  }

  if (!net.nodes.empty()) {
    const std::size_t root = sets.find(0);
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
      if (sets.find(i) != root) add("node", net.nodes[i].id, "disconnected node");
    }
  }
  return report;
}

GasZones gas_zones(const GasNetwork& net) {
  DisjointSets sets(net.nodes.size());
  for (const auto& p : net.pipes) {
    auto a = net.node_index(p.from_node);
    auto b = net.node_index(p.to_node);
    if (a && b) sets.unite(*a, *b);
  }
  GasZones zones;
  zones.zone_of_node.assign(net.nodes.size(), 0);
  std::vector<int> zone_of_root(net.nodes.size(), -1);
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    const std::size_t root = sets.find(i);
    if (zone_of_root[root] < 0) {
      zone_of_root[root] = static_cast<int>(zones.ids.size());
      zones.ids.push_back("Z" + std::to_string(zones.ids.size() + 1));
    }
    zones.zone_of_node[i] = static_cast<std::size_t>(zone_of_root[root]);
  }
  return zones;
}

CoupledSystem::CoupledSystem(std::shared_ptr<const ElectricNetwork> electric,
                             std::shared_ptr<const GasNetwork> gas, CouplingMap map,
                             GasProperties properties)
    : electric_(std::move(electric)),
      gas_(std::move(gas)),
      map_(std::move(map)),
      properties_(properties) {
  binding_of_generator_.assign(electric_->generators.size(), -1);
  for (const auto& entry : map_.entries) {
    auto g = electric_->generator_index(entry.generator);
    auto n = gas_->node_index(entry.gas_node);
    if (!g) throw UnboundGfpp("coupling references unknown generator " + entry.generator);
    if (!n) throw DanglingNode("coupling references unknown gas node " + entry.gas_node);
    if (!electric_->generators[*g].gfpp) {
      throw UnboundGfpp("coupling entry for non-GFPP generator " + entry.generator);
    }
    if (binding_of_generator_[*g] >= 0) {
      throw UnboundGfpp("generator " + entry.generator + " bound more than once");
    }
    if (!(entry.efficiency > 0.0 && entry.efficiency <= 1.0) || !(entry.hhv > 0.0)) {
      throw UnboundGfpp("coupling entry for " + entry.generator + " has invalid efficiency/HHV");
    }
    binding_of_generator_[*g] = static_cast<int>(bindings_.size());
    bindings_.push_back({*g, *n, entry.efficiency, entry.hhv});
  }
  for (std::size_t g = 0; g < electric_->generators.size(); ++g) {
    if (electric_->generators[g].gfpp && binding_of_generator_[g] < 0) {
      throw UnboundGfpp("GFPP " + electric_->generators[g].id + " has no coupling entry");
    }
  }
  zones_ = gas_zones(*gas_);
}

const CoupledSystem::Binding* CoupledSystem::binding_for(std::size_t generator) const {
  if (generator >= binding_of_generator_.size() || binding_of_generator_[generator] < 0) {
    return nullptr;
  }
  return &bindings_[static_cast<std::size_t>(binding_of_generator_[generator])];
}

CoupledSystem bind_coupling(std::shared_ptr<const ElectricNetwork> electric,
                            std::shared_ptr<const GasNetwork> gas, const CouplingMap& map,
                            const GasProperties& properties) {
  return CoupledSystem(std::move(electric), std::move(gas), map, properties);
}

CoupledSystem bind_coupling(const ElectricNetwork& electric, const GasNetwork& gas,
                            const CouplingMap& map, const GasProperties& properties) {
  return bind_coupling(std::make_shared<const ElectricNetwork>(electric),
                       std::make_shared<const GasNetwork>(gas), map, properties);
}

}  // namespace nexus
