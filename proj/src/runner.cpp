#include "bach/runner.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "bach/errors.hpp"

namespace bach {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_case_files(const Scenario& sc, const ScenarioConfig& cfg, const CaseResult& r,
                      const std::filesystem::path& dir) {
  const std::string stem = "case" + std::to_string(r.case_id);
  const Evaluation ev = evaluate_detailed(sc, r.schedule, cfg.weights);
  auto schedule = open_output(dir / (stem + "_schedule.csv"));
  write_schedule_csv(r.schedule, sc.fleet, schedule);
  auto soc = open_output(dir / (stem + "_soc.csv"));
  write_soc_csv(ev.soc, sc.fleet, soc);
  auto volts = open_output(dir / (stem + "_voltages.csv"));
  write_voltages_csv(ev.flows, sc.network, volts);
}

}  // namespace

std::vector<CaseResult> run_cases(const Scenario& scenario, const ScenarioConfig& config,
                                  const std::vector<int>& cases,
                                  const std::filesystem::path& output_dir) {
  for (int c : cases)
    if (c < 1 || c > 3) throw std::invalid_argument("case must be 1, 2 or 3");
  auto wants = [&](int c) { return std::find(cases.begin(), cases.end(), c) != cases.end(); };

  std::optional<SolveResult> f1_opt;
  std::optional<SolveResult> f2_opt;
  if (wants(1) || wants(3))
    f1_opt = solve_single(scenario, Target::F1, std::nullopt, config.weights, config.solver);
  if (wants(2) || wants(3))
    f2_opt = solve_single(scenario, Target::F2, std::nullopt, config.weights, config.solver);

  std::vector<CaseResult> results;
  for (int c : cases) {
    CaseResult r;
    r.case_id = c;
    if (c == 1) {
      r.schedule = f1_opt->schedule;
      r.objectives = f1_opt->objectives;
    } else if (c == 2) {
      r.schedule = f2_opt->schedule;
      r.objectives = f2_opt->objectives;
    } else {
      Anchors anchors{*f1_opt, *f2_opt};
      ParetoFront front =
          epsilon_sweep(scenario, config.weights, config.n_pareto_points, config.solver, &anchors);
      const auto& pick = front.points[front.selected];
      r.schedule = pick.schedule;
      r.objectives = pick.objectives;
      r.front = std::move(front);
    }
    results.push_back(std::move(r));
  }

  if (!output_dir.empty()) {
    std::filesystem::create_directories(output_dir);
    std::vector<CaseRow> rows;
    for (const auto& r : results) {
      rows.push_back({"case" + std::to_string(r.case_id), r.objectives});
      write_case_files(scenario, config, r, output_dir);
      if (r.front) {
        auto csv = open_output(output_dir / "pareto_front.csv");
        write_front_csv(*r.front, csv);
        auto json = open_output(output_dir / "pareto_front.json");
        write_front_json(*r.front, scenario.fleet, json);
        auto life = open_output(output_dir / "battery_life.csv");
        write_battery_life_csv(*r.front, scenario.fleet, life);
      }
    }
    auto summary = open_output(output_dir / "cases_summary.csv");
    write_case_summary_csv(rows, scenario.fleet, summary);
  }
  return results;
}

std::vector<SensitivityRow> sensitivity_sweep(const Scenario& scenario, const ScenarioConfig& config,
                                              const std::string& param,
                                              const std::vector<double>& values) {
  if (param != "lambda1" && param != "lambda2")
    throw std::invalid_argument("sensitivity parameter must be lambda1 or lambda2");
  if (values.size() < 2) throw std::invalid_argument("sensitivity sweep needs at least two values");
  for (double v : values)
    if (!(v >= 0)) throw std::invalid_argument("sensitivity values must be >= 0");

  std::vector<SensitivityRow> rows;
  for (double v : values) {
    SensitivityRow row;
    row.param = param;
    row.value = v;
    Weights w = config.weights;
    (param == "lambda1" ? w.lambda1 : w.lambda2) = v;
    try {
      const ParetoFront front =
          epsilon_sweep(scenario, w, config.n_pareto_points, config.solver);
      row.objectives = front.points[front.selected].objectives;
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::filesystem::path write_sensitivity(const std::vector<SensitivityRow>& rows,
                                        const std::filesystem::path& output_dir,
                                        const std::string& param) {
  std::filesystem::create_directories(output_dir);
  const auto path = output_dir / ("sensitivity_" + param + ".csv");
  auto out = open_output(path);
  write_sensitivity_csv(rows, out);
  return path;
}

}  // namespace bach
