#pragma once

// Named reproduction scenarios and the custom-config runner behind the command-line tool.

#include "opcalc/descriptors.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace opcalc {

inline constexpr const char* kToolkitVersion = "1.0.0";
inline constexpr int kReportSchema = 1;

/// Command-line overrides; unset fields fall back to the config file, then to preset defaults.
struct ScenarioOptions {
  std::optional<std::size_t> iters;
  std::optional<double> grid_h;
  std::optional<double> window;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  /// Scenario fields from a config file (operators, sets, x0, ...). May be empty.
  Json config = Json::object();
};

struct Check {
  std::string name;
  int criterion = 0;  // acceptance criterion this check reproduces, 0 for custom checks
  bool passed = false;
  Json evidence = Json::object();
};

struct VerdictReport {
  std::string scenario;
  Json config = Json::object();  // effective parameters
  std::vector<Check> checks;
  std::vector<std::string> artifacts;  // files written next to report.json

  bool passed() const;
  /// The timestamp is the only field that differs between identical runs.
  Json to_json(const std::string& timestamp) const;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
};

/// Every built-in operator (projections, prox oracles, linear resolvents, translations,
/// averages), as exercised by the resolvent-identity and firmness presets.
std::vector<OperatorSpec> builtin_operators();

std::vector<ScenarioInfo> list_scenarios();
bool has_scenario(const std::string& name);

/// Runs a preset (or "custom", driven by options.config) and writes its artifacts into out_dir
/// when out_dir is non-empty. Throws InvalidArgument for unknown names or malformed configs.
VerdictReport run_scenario(const std::string& name, const ScenarioOptions& options,
                           const std::filesystem::path& out_dir);

/// Writes report.json into out_dir.
void write_report(const VerdictReport& report, const std::filesystem::path& out_dir,
                  const std::string& timestamp);

}  // namespace opcalc
