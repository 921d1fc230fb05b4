#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bach/config.hpp"
#include "bach/pareto.hpp"
#include "bach/report.hpp"

namespace bach {

/// Process exit codes of the command-line tool.
enum class ExitCode : int { Ok = 0, Usage = 1, Config = 2, Infeasible = 3, NonConvergence = 4 };

struct CaseResult {
  int case_id = 0;
  Schedule schedule;
  ObjectiveValues objectives;
  std::optional<ParetoFront> front;  // case 3 only
};

/// Runs the requested cases (1 = min F1, 2 = min F2, 3 = epsilon sweep and
/// compromise). The anchor solves are shared between cases 1, 2 and 3. When
/// `output_dir` is non-empty, writes cases_summary.csv plus per-case
/// schedule, SoC and voltage CSVs, and for case 3 the front (CSV and JSON)
/// and battery_life.csv.
std::vector<CaseResult> run_cases(const Scenario& scenario, const ScenarioConfig& config,
                                  const std::vector<int>& cases,
                                  const std::filesystem::path& output_dir);

/// Recomputes the compromise for each value of `param` ("lambda1" or
/// "lambda2"). Needs at least two non-negative values; throws
/// std::invalid_argument otherwise. Failed values are recorded, not fatal.
std::vector<SensitivityRow> sensitivity_sweep(const Scenario& scenario, const ScenarioConfig& config,
                                              const std::string& param,
                                              const std::vector<double>& values);

/// Writes `rows` to <output_dir>/sensitivity_<param>.csv.
std::filesystem::path write_sensitivity(const std::vector<SensitivityRow>& rows,
                                        const std::filesystem::path& output_dir,
                                        const std::string& param);

}  // namespace bach
