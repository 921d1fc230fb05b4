#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "bach/objectives.hpp"
#include "bach/optimizer.hpp"

namespace bach {

/// One run, as declared in an INI-style config file (see README).
struct ScenarioConfig {
  std::filesystem::path network_path;
  std::filesystem::path profiles_path;
  Eigen::Index horizon = 24;
  double dt = 1.0;
  DeviceFleet fleet;
  Weights weights;
  SolverConfig solver;
  int n_pareto_points = 20;
  std::filesystem::path output_dir = "out";
  ScenarioOptions options;

  /// Throws ValidationError for negative weights or missing files.
  void validate() const;
};

/// Relative paths in the file resolve against the file's directory.
ScenarioConfig load_config(const std::filesystem::path& path);
ScenarioConfig parse_config(std::istream& in, const std::filesystem::path& base_dir,
                            const std::string& source = "<stream>");

/// Loads network and profiles and validates the assembled scenario.
Scenario build_scenario(const ScenarioConfig& config);

}  // namespace bach
