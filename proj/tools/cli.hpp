#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace nexus::cli {

inline constexpr int kExitClean = 0;
inline constexpr int kExitFindings = 2;
inline constexpr int kExitStudyFailed = 3;
inline constexpr int kExitUsage = 1;

/// Entry point of the `nexus` tool; returns the process exit code.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);

/// Lower-case hex SHA-256 of a file's bytes. Throws IoError.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace nexus::cli
