#include "nexus/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "nexus/error.hpp"
#include "nexus/network_io.hpp"
#include "nexus/units.hpp"

namespace nexus::ingest {

using nlohmann::json;

namespace {

enum class Quantity { Power, GasFlow, Fraction };

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where + " must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(where + ": missing '" + key + "'");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw SchemaError(where + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw SchemaError(where + " is not finite");
  return x;
}

// Factor from the tagged unit to MW, kg/s or a plain fraction.
double unit_factor(const json& tagged, Quantity q, double density, const std::string& where) {
  if (!tagged.is_object()) throw SchemaError(where + " must be an object with a unit tag");
  auto it = tagged.find("unit");
  if (it == tagged.end() || !it->is_string()) throw UnitError(where + ": missing unit tag");
  const auto unit = it->get<std::string>();
  switch (q) {
    case Quantity::Power:
      if (unit == "MW") return 1.0;
      if (unit == "GW") return 1000.0;
      break;
    case Quantity::GasFlow:
      if (unit == "mcm/d") return units::mcmd_to_kgs(1.0, density);
      if (unit == "kg/s") return 1.0;
      break;
    case Quantity::Fraction:
      if (unit == "fraction" || unit == "1") return 1.0;
      if (unit == "%") return 0.01;
      break;
  }
  throw UnitError(where + ": unit '" + unit + "' does not fit this quantity");
}

double scalar(const json& tagged, Quantity q, double density, const std::string& where) {
  const double f = unit_factor(tagged, q, density, where);
  return f * number(member(tagged, "value", where), where + ".value");
}

// Hourly values given as an array or as an object keyed "1".."H".
std::vector<double> hourly(const json& values, int H, double factor, const std::string& where) {
  std::vector<double> out;
  if (values.is_array()) {
    if (values.size() != static_cast<std::size_t>(H))
      throw SchemaError(where + ": " + std::to_string(values.size()) + " values, expected " + std::to_string(H));
    for (std::size_t t = 0; t < values.size(); ++t)
      out.push_back(factor * number(values[t], where + "[" + std::to_string(t + 1) + "]"));
    return out;
  }
  if (!values.is_object()) throw SchemaError(where + " must be an array or an hour-keyed object");
  if (values.size() != static_cast<std::size_t>(H))
    throw SchemaError(where + ": " + std::to_string(values.size()) + " hours, expected " + std::to_string(H));
  out.assign(H, 0.0);
  for (int h = 1; h <= H; ++h) {
    auto it = values.find(std::to_string(h));
    if (it == values.end()) throw SchemaError(where + ": hour " + std::to_string(h) + " missing");
    out[h - 1] = factor * number(*it, where + "[" + std::to_string(h) + "]");
  }
  return out;
}

std::vector<double> series(const json& tagged, int H, const std::string& where, bool nonnegative) {
  const double f = unit_factor(tagged, Quantity::Power, 0.0, where);
  auto out = hourly(member(tagged, "values", where), H, f, where);
  if (nonnegative) {
    for (std::size_t t = 0; t < out.size(); ++t)
      if (out[t] < 0.0) throw SchemaError(where + ": negative value at hour " + std::to_string(t + 1));
  }
  return out;
}

std::map<std::string, double> fractions(const json& doc, const char* key, const std::string& where) {
  const auto& block = member(doc, key, where);
  const double f = unit_factor(doc, Quantity::Fraction, 0.0, where);
  if (!block.is_object()) throw SchemaError(where + "." + key + " must be an object");
  std::map<std::string, double> out;
  double total = 0.0;
  for (const auto& [id, v] : block.items()) {
    const double x = f * number(v, where + "." + id);
    if (x < 0.0) throw SchemaError(where + "." + id + " is negative");
    out[id] = x;
    total += x;
  }
  if (out.empty()) throw SchemaError(where + " lists no entries");
  if (std::abs(total - 1.0) > 1e-9)
    throw SchemaError(where + ": fractions sum to " + std::to_string(total) + ", expected 1");
  return out;
}

json read(const std::filesystem::path& path) {
  try {
    return read_json_file(path);
  } catch (const ParseError& e) {
    throw SchemaError(e.what());
  }
}

// Shares of `total` in proportion to `weights`; uniform when every weight is zero.
std::vector<double> proportional(double total, const std::vector<double>& weights) {
  std::vector<double> out(weights.size(), 0.0);
  if (weights.empty()) return out;
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (std::size_t i = 0; i < weights.size(); ++i)
    out[i] = sum > 0.0 ? total * (weights[i] / sum) : total / static_cast<double>(weights.size());
  return out;
}

const std::vector<double>& national_series(const ScenarioBundle& b, Tech kind) {
  switch (kind) {
    case Tech::Wind: return b.wind;
    case Tech::Solar: return b.solar;
    default: return b.ror;
  }
}

ScenarioBundle parse_bundle(const json& doc, const json& snapshot, const json& split) {
  ScenarioBundle b;
  if (!doc.is_object()) throw SchemaError("scenario must be an object");
  b.pathway = doc.value("pathway", std::string{});
  b.year = doc.value("year", 0);
  b.horizon = doc.value("hours", 24);
  if (b.horizon <= 0) throw SchemaError("scenario: hours must be positive");
  b.standard_density = doc.value("standard_density", 0.7165);
  if (!(b.standard_density > 0.0)) throw SchemaError("scenario: standard_density must be positive");
  const int H = b.horizon;
  const double rho = b.standard_density;

  const auto& cap = member(doc, "capacity", "scenario");
  const double cf = unit_factor(cap, Quantity::Power, rho, "capacity");
  const auto& cap_values = member(cap, "values", "capacity");
  if (!cap_values.is_object()) throw SchemaError("capacity.values must be an object");
  for (const auto& [name, v] : cap_values.items()) {
    Tech tech;
    try {
      tech = tech_from_string(name);
    } catch (const ParseError& e) {
      throw SchemaError(std::string("capacity: ") + e.what());
    }
    const double mw = cf * number(v, "capacity." + name);
    if (mw < 0.0) throw SchemaError("capacity." + name + " is negative");
    b.capacity[static_cast<std::size_t>(tech)] = mw;
  }

  b.load = series(member(doc, "load", "scenario"), H, "load", true);
  b.wind = series(member(doc, "wind", "scenario"), H, "wind", true);
  b.solar = series(member(doc, "solar", "scenario"), H, "solar", true);
  if (doc.contains("ror")) b.ror = series(doc["ror"], H, "ror", true);

  if (doc.contains("interconnectors")) {
    const auto& ic = doc["interconnectors"];
    const double f = unit_factor(ic, Quantity::Power, rho, "interconnectors");
    const auto& s = member(ic, "series", "interconnectors");
    if (!s.is_object()) throw SchemaError("interconnectors.series must be an object");
    for (const auto& [id, v] : s.items()) b.interconnectors[id] = hourly(v, H, f, "interconnectors." + id);
  }

  b.gas_demand = scalar(member(doc, "gas_demand", "scenario"), Quantity::GasFlow, rho, "gas_demand");
  if (b.gas_demand < 0.0) throw SchemaError("gas_demand is negative");
  if (doc.contains("gas_export")) {
    const auto& ex = doc["gas_export"];
    b.gas_export = scalar(ex, Quantity::GasFlow, rho, "gas_export");
    if (b.gas_export < 0.0) throw SchemaError("gas_export is negative");
    const auto& node = member(ex, "node", "gas_export");
    if (!node.is_string()) throw SchemaError("gas_export.node must be a string");
    b.gas_export_node = node.get<std::string>();
  }
  if (doc.contains("gas_supply")) {
    b.gas_supply = scalar(doc["gas_supply"], Quantity::GasFlow, rho, "gas_supply");
    if (*b.gas_supply < 0.0) throw SchemaError("gas_supply is negative");
  }
  if (doc.contains("reserve")) {
    b.reserve = scalar(doc["reserve"], Quantity::Power, rho, "reserve");
    if (b.reserve < 0.0) throw SchemaError("reserve is negative");
  }

  b.snapshot.shares = fractions(snapshot, "shares", "load_snapshot");
  b.gas_split = fractions(split, "fractions", "gas_demand_split");
  b.electric_network = doc.value("electric_network", std::string("electric.json"));
  b.gas_network = doc.value("gas_network", std::string("gas.json"));
  return b;
}

}  // namespace

ScenarioBundle bundle_from_json(const json& doc, const json& snapshot, const json& split) {
  try {
    return parse_bundle(doc, snapshot, split);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("scenario: ") + e.what());
  }
}

ScenarioBundle load_bundle(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw SchemaError(dir.string() + " is not a bundle directory");
  auto b = bundle_from_json(read(dir / "scenario.json"), read(dir / "load_snapshot.json"),
                            read(dir / "gas_demand_split.json"));
  b.electric_network = dir / b.electric_network;
  b.gas_network = dir / b.gas_network;
  return b;
}

CapacityAllocation disaggregate_capacity(const ScenarioBundle& bundle, const ElectricNetwork& net) {
  CapacityAllocation out;
  for (const auto& g : net.generators) out.generator.push_back(g.p_max);
  for (const auto& c : net.clusters) out.cluster.push_back(c.capacity);

  for (std::size_t k = 0; k < kTechCount; ++k) {
    if (!bundle.capacity[k]) continue;
    const auto tech = static_cast<Tech>(k);
    const double national = *bundle.capacity[k];
    std::vector<std::size_t> sites;
    std::vector<double> weights;
    if (is_renewable(tech)) {
      for (std::size_t c = 0; c < net.clusters.size(); ++c) {
        if (net.clusters[c].kind != tech) continue;
        sites.push_back(c);
        weights.push_back(tech == Tech::Solar ? 1.0 : net.clusters[c].capacity);
      }
    } else {
      for (std::size_t g = 0; g < net.generators.size(); ++g) {
        if (net.generators[g].tech != tech) continue;
        sites.push_back(g);
        weights.push_back(net.generators[g].p_max);
      }
    }
    if (sites.empty()) {
      if (national > 0.0)
        throw NoHostBus(std::string(to_string(tech)) + ": " + std::to_string(national) +
                        " MW with no existing site in the network");
      continue;
    }
    const auto share = proportional(national, weights);
    auto& target = is_renewable(tech) ? out.cluster : out.generator;
    for (std::size_t i = 0; i < sites.size(); ++i) target[sites[i]] = share[i];
  }
  return out;
}

ElectricNetwork apply_capacity(const ElectricNetwork& net, const CapacityAllocation& alloc) {
  if (alloc.generator.size() != net.generators.size() || alloc.cluster.size() != net.clusters.size())
    throw DimensionMismatch("capacity allocation does not match the network");
  ElectricNetwork out = net;
  for (std::size_t g = 0; g < out.generators.size(); ++g) {
    auto& gen = out.generators[g];
    const double mw = alloc.generator[g];
    if (gen.p_max > 0.0) {
      const double k = mw / gen.p_max;
      gen.p_min_stable *= k;
      gen.ramp_up *= k;
      gen.ramp_down *= k;
      gen.pump_capacity *= k;
      gen.reservoir *= k;
    } else {
      gen.ramp_up = std::max(gen.ramp_up, mw);
      gen.ramp_down = std::max(gen.ramp_down, mw);
    }
    gen.p_max = mw;
  }
  for (std::size_t c = 0; c < out.clusters.size(); ++c) out.clusters[c].capacity = alloc.cluster[c];
  return out;
}

std::vector<std::vector<double>> disaggregate_load(const ScenarioBundle& bundle, const LoadSnapshot& snapshot,
                                                   const ElectricNetwork& net) {
  for (const auto& [bus, share] : snapshot.shares) {
    if (!net.bus_index(bus)) throw SchemaError("load snapshot names unknown bus '" + bus + "'");
  }
  std::vector<std::vector<double>> out(net.buses.size(), std::vector<double>(bundle.load.size(), 0.0));
  for (std::size_t b = 0; b < net.buses.size(); ++b) {
    auto it = snapshot.shares.find(net.buses[b].id);
    if (it == snapshot.shares.end()) continue;
    for (std::size_t t = 0; t < bundle.load.size(); ++t) out[b][t] = it->second * bundle.load[t];
  }
  return out;
}

std::vector<std::vector<double>> scale_res_profiles(const ScenarioBundle& bundle,
                                                    const std::vector<RenewableCluster>& clusters) {
  const auto H = static_cast<std::size_t>(bundle.horizon);
  std::vector<std::vector<double>> out(clusters.size(), std::vector<double>(H, 0.0));

  for (Tech kind : {Tech::Wind, Tech::Solar, Tech::RoR}) {
    std::vector<std::size_t> members;
    for (std::size_t c = 0; c < clusters.size(); ++c)
      if (clusters[c].kind == kind) members.push_back(c);
    if (members.empty()) continue;
    const auto& national = national_series(bundle, kind);
    if (national.empty()) {
      // No series for this kind: the clusters run at their rating.
      for (auto c : members) std::fill(out[c].begin(), out[c].end(), clusters[c].capacity);
      continue;
    }
    double installed = 0.0;
    for (auto c : members) installed += clusters[c].capacity;

    for (std::size_t t = 0; t < H; ++t) {
      const double target = national[t];
      if (target > installed * (1.0 + 1e-9) + 1e-9)
        throw InfeasibleProfile(std::string(to_string(kind)) + " at hour " + std::to_string(t + 1) + ": " +
                                std::to_string(target) + " MW against " + std::to_string(installed) +
                                " MW installed");
      std::vector<std::size_t> open;
      for (auto c : members)
        if (clusters[c].capacity > 0.0) open.push_back(c);
      double remaining = target;
      for (bool clamped = true; clamped && !open.empty();) {
        clamped = false;
        double wsum = 0.0;
        for (auto c : open) {
          const auto& rc = clusters[c];
          wsum += rc.resource_weight > 0.0 ? rc.resource_weight : rc.capacity;
        }
        std::vector<std::size_t> still;
        for (auto c : open) {
          const auto& rc = clusters[c];
          const double w = rc.resource_weight > 0.0 ? rc.resource_weight : rc.capacity;
          const double a = remaining * (w / wsum);
          if (a >= rc.capacity) {
            out[c][t] = rc.capacity;
            clamped = true;
          } else {
            out[c][t] = a;
            still.push_back(c);
          }
        }
        if (clamped) {
          remaining = target;
          for (auto c : members)
            if (std::find(still.begin(), still.end(), c) == still.end()) remaining -= out[c][t];
          remaining = std::max(0.0, remaining);
          open = std::move(still);
        }
      }
    }
  }
  return out;
}

gas::Schedules gas_schedules(const ScenarioBundle& bundle, const GasNetwork& net) {
  gas::Schedules s;
  const auto H = static_cast<std::size_t>(bundle.horizon);
  for (const auto& [node, fraction] : bundle.gas_split) {
    if (!net.node_index(node)) throw SchemaError("gas demand split names unknown node '" + node + "'");
    s.demands.push_back({node, std::vector<double>(H, fraction * bundle.gas_demand), true});
  }
  if (bundle.gas_export > 0.0) {
    if (!net.node_index(bundle.gas_export_node))
      throw SchemaError("gas export node '" + bundle.gas_export_node + "' is not in the network");
    s.demands.push_back({bundle.gas_export_node, std::vector<double>(H, bundle.gas_export), true});
  }
  if (bundle.gas_supply) {
    std::vector<double> weights;
    for (const auto& inj : net.injectors) weights.push_back(inj.nominal_capacity);
    s.injector_rate = proportional(*bundle.gas_supply, weights);
  } else {
    for (const auto& inj : net.injectors) s.injector_rate.push_back(inj.scheduled_rate);
  }
  return s;
}

coupling::CoupledScenario build_scenario(const ScenarioBundle& bundle, const ElectricNetwork& net,
                                         const GasNetwork& gas_net) {
  for (const auto& [id, _] : bundle.interconnectors) {
    const bool known = std::any_of(net.interconnectors.begin(), net.interconnectors.end(),
                                   [&](const Interconnector& ic) { return ic.id == id; });
    if (!known) throw SchemaError("interconnector '" + id + "' is not in the electric network");
  }
  coupling::CoupledScenario sc;
  sc.uc.horizon = bundle.horizon;
  sc.uc.bus_load = disaggregate_load(bundle, bundle.snapshot, net);
  sc.uc.cluster_available = scale_res_profiles(bundle, net.clusters);
  for (const auto& ic : net.interconnectors) {
    auto it = bundle.interconnectors.find(ic.id);
    sc.uc.interconnector_import.push_back(it != bundle.interconnectors.end()
                                              ? it->second
                                              : std::vector<double>(bundle.horizon, 0.0));
  }
  sc.uc_options.reserve = bundle.reserve > 0.0;
  sc.uc_options.reserve_mw = bundle.reserve;
  sc.gas = gas_schedules(bundle, gas_net);
  return sc;
}

LoadedScenario load_scenario(const std::filesystem::path& dir) {
  LoadedScenario out;
  out.bundle = load_bundle(dir);
  const auto base = load_electric_network(out.bundle.electric_network);
  auto gas_file = load_gas_file(out.bundle.gas_network);
  auto el = std::make_shared<const ElectricNetwork>(apply_capacity(base, disaggregate_capacity(out.bundle, base)));
  auto gas = std::make_shared<const GasNetwork>(std::move(gas_file.network));
  out.system = std::make_shared<const CoupledSystem>(bind_coupling(el, gas, gas_file.coupling, gas_file.properties));
  out.scenario = build_scenario(out.bundle, *el, *gas);
  return out;
}

ValidationReport validate_scenario(const std::filesystem::path& dir) {
  ValidationReport rep;
  auto add = [&](std::string category, std::string element, std::string message) {
    rep.findings.push_back({std::move(category), std::move(element), std::move(message)});
  };
  ScenarioBundle bundle;
  try {
    bundle = load_bundle(dir);
  } catch (const Error& e) {
    add("bundle", dir.string(), e.what());
    return rep;
  }
  ElectricNetwork el;
  GasFile gas;
  try {
    el = load_electric_network(bundle.electric_network);
    gas = load_gas_file(bundle.gas_network);
  } catch (const Error& e) {
    add("network", "", e.what());
    return rep;
  }
  for (const auto& f : validate_electric_network(el).findings) rep.findings.push_back(f);
  for (const auto& f : validate_gas_network(gas.network).findings) rep.findings.push_back(f);
  if (!rep.empty()) return rep;

  try {
    const auto scaled = apply_capacity(el, disaggregate_capacity(bundle, el));
    bind_coupling(scaled, gas.network, gas.coupling, gas.properties);
    build_scenario(bundle, scaled, gas.network);
  } catch (const Error& e) {
    add("scenario", "", e.what());
  }

  double capability = 0.0;
  for (const auto& inj : gas.network.injectors) capability += inj.nominal_capacity;
  const double rho = bundle.standard_density;
  if (bundle.gas_export > capability)
    add("supply", bundle.gas_export_node,
        "export of " + std::to_string(units::kgs_to_mcmd(bundle.gas_export, rho)) +
            " mcm/d exceeds the injection capability of " + std::to_string(units::kgs_to_mcmd(capability, rho)) +
            " mcm/d");
  else if (bundle.gas_export + bundle.gas_demand > capability)
    add("supply", "", "firm demand plus export exceeds the injection capability");
  if (bundle.gas_supply && *bundle.gas_supply > capability)
    add("supply", "", "scheduled supply exceeds the injection capability");
  return rep;
}

}  // namespace nexus::ingest
