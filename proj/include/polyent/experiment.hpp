#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyent/estimation.hpp"
#include "polyent/metric_system.hpp"
#include "polyent/pl_map.hpp"

namespace polyent {

enum class CheckKind { growth, kato, lap, factor, hyperspace_trend };

const char* to_string(CheckKind kind);
CheckKind check_kind_from_string(const std::string& text);

// A system named by a catalog expression or given inline as a graph and map.
struct SystemSpec {
  std::string name;
  std::optional<PLMap> inline_map;
  // Accepted exponent range for the growth check, when given.
  std::optional<std::pair<double, double>> expected_exponent;
};

struct ExperimentConfig {
  std::vector<SystemSpec> systems;
  EstimationProtocol protocol;
  std::vector<CheckKind> checks{CheckKind::growth};
  std::filesystem::path out_dir{"out"};
  std::uint64_t seed = 1;
  std::size_t lap_n = 0;             // 0: protocol max n
  std::size_t factor_samples = 1000;
  std::size_t factor_power = 2;
  std::size_t trend_max_power = 3;
};

// JSON text -> config. Unknown keys, unresolved systems and invalid protocols
// raise ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

SystemPtr resolve_system(const SystemSpec& spec);

struct ExperimentResult {
  std::string report_json;  // also written to out_dir/report.json
  std::vector<std::filesystem::path> csv_files;
  bool satisfied = true;
};

// Runs every check on every system and writes one counts CSV per system plus
// report.json. Deterministic for a fixed config and seed.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Exit codes of the command-line runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitCheckFailed = 4;

// File-system safe stem for a system descriptor.
std::string file_stem(const std::string& descriptor);

}  // namespace polyent
