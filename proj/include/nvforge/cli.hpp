#pragma once

// Subcommands of the nvforge tool. Each takes a parsed JSON config and an
// output directory, writes its artifacts plus metadata.json, and returns the
// metadata object.

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace nvforge {

/// Invalid or unknown configuration content.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kSchemaVersion = 1;

using Seed = std::optional<std::uint64_t>;

nlohmann::json cmd_zeeman_scan(const nlohmann::json& config, const std::filesystem::path& out,
                               Seed seed = std::nullopt);
nlohmann::json cmd_strain_scan(const nlohmann::json& config, const std::filesystem::path& out,
                               Seed seed = std::nullopt);
nlohmann::json cmd_gates(const nlohmann::json& config, const std::filesystem::path& out,
                         Seed seed = std::nullopt);
nlohmann::json cmd_error_budget(const nlohmann::json& config, const std::filesystem::path& out,
                                Seed seed = std::nullopt);
/// Non-convergence is reported in the metadata ("status"), not thrown.
nlohmann::json cmd_grape(const nlohmann::json& config, const std::filesystem::path& out,
                         Seed seed = std::nullopt);

/// Dispatches by subcommand name.
nlohmann::json run_command(const std::string& name, const nlohmann::json& config,
                           const std::filesystem::path& out, Seed seed = std::nullopt);

/// Reads a JSON file, throwing ConfigError on I/O or parse failure.
nlohmann::json load_config(const std::filesystem::path& path);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace nvforge
