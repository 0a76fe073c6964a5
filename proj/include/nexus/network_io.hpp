#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "nexus/network.hpp"

namespace nexus {

/// Contents of a gas network file: topology, gas properties and the GFPP
/// coupling map (the coupling lives with the gas data because every entry
/// names a gas off-take node).
struct GasFile {
  GasNetwork network;
  GasProperties properties;
  CouplingMap coupling;
};

// Pressures are written and read in bar; everything else mirrors the type
// fields in SI / MW. Malformed documents raise ParseError.
ElectricNetwork electric_network_from_json(const nlohmann::json& doc);
GasFile gas_file_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ElectricNetwork& net);
nlohmann::json to_json(const GasFile& file);

ElectricNetwork load_electric_network(const std::filesystem::path& path);
GasFile load_gas_file(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace nexus
