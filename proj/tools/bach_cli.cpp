// Command-line front end: case runs, Pareto sweeps, sensitivity sweeps,
// single-slot power flow and config validation.

#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "bach/errors.hpp"
#include "bach/runner.hpp"

namespace {

using bach::ExitCode;

int code(ExitCode c) { return static_cast<int>(c); }

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  std::optional<int> points;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-c,--config", o.config, "scenario config file")->required();
  cmd->add_option("--seed", o.seed, "solver base seed");
  cmd->add_option("-o,--output", o.output, "output directory");
  cmd->add_option("--lambda1", o.lambda1, "weight of the degradation cost in F1");
  cmd->add_option("--lambda2", o.lambda2, "weight of the voltage deviation in F2");
  cmd->add_option("--points", o.points, "number of epsilon grid points");
}

bach::ScenarioConfig resolve(const CommonOptions& o) {
  bach::ScenarioConfig cfg = bach::load_config(o.config);
  if (o.seed) cfg.solver.seed = *o.seed;
  if (o.output) cfg.output_dir = *o.output;
  if (o.lambda1) cfg.weights.lambda1 = *o.lambda1;
  if (o.lambda2) cfg.weights.lambda2 = *o.lambda2;
  if (o.points) cfg.n_pareto_points = *o.points;
  return cfg;
}

void print_objectives(const char* label, const bach::ObjectiveValues& o) {
  std::printf("%-8s energy %.2f $  degradation %.2f $  losses %.2f kWh  voltage dev %.4f  "
              "F1 %.2f  F2 %.2f  %s\n",
              label, o.energy_cost, o.degradation_cost, o.loss_total, o.voltage_dev, o.f1, o.f2,
              o.feasible ? "feasible" : "INFEASIBLE");
}

int run_case_cmd(const CommonOptions& o, const std::vector<int>& cases) {
  const auto cfg = resolve(o);
  const auto sc = bach::build_scenario(cfg);
  const auto results = bach::run_cases(sc, cfg, cases, cfg.output_dir);
  bool feasible = true;
  for (const auto& r : results) {
    const std::string label = "case " + std::to_string(r.case_id);
    print_objectives(label.c_str(), r.objectives);
    feasible = feasible && r.objectives.feasible;
    if (r.front) {
      std::printf("front: %zu points, F1 %.2f..%.2f, F2 %.2f..%.2f, compromise #%zu\n",
                  r.front->points.size(), r.front->payoff.f1_min, r.front->payoff.f1_max,
                  r.front->payoff.f2_min, r.front->payoff.f2_max, r.front->selected);
      for (const auto& f : r.front->failures) std::fprintf(stderr, "skipped %s\n", f.c_str());
    }
  }
  std::printf("reports written to %s\n", cfg.output_dir.string().c_str());
  return code(feasible ? ExitCode::Ok : ExitCode::Infeasible);
}

int sweep_cmd(const CommonOptions& o, const std::string& param, const std::vector<double>& values) {
  const auto cfg = resolve(o);
  const auto sc = bach::build_scenario(cfg);
  const auto rows = bach::sensitivity_sweep(sc, cfg, param, values);
  const auto path = bach::write_sensitivity(rows, cfg.output_dir, param);
  for (const auto& r : rows) {
    if (r.ok)
      std::printf("%s=%g  C^E %.2f  C^D %.2f  L %.2f  V %.4f\n", param.c_str(), r.value,
                  r.objectives.energy_cost, r.objectives.degradation_cost,
                  r.objectives.loss_total, r.objectives.voltage_dev);
    else
      std::printf("%s=%g  failed: %s\n", param.c_str(), r.value, r.error.c_str());
  }
  std::printf("written %s\n", path.string().c_str());
  return code(ExitCode::Ok);
}

int powerflow_cmd(const CommonOptions& o, long slot) {
  const auto cfg = resolve(o);
  const auto sc = bach::build_scenario(cfg);
  if (slot < 0 || slot >= sc.horizon()) {
    std::fprintf(stderr, "slot %ld outside [0, %ld)\n", slot, static_cast<long>(sc.horizon()));
    return code(ExitCode::Usage);
  }
  const auto idle = bach::Schedule::zeros(sc.units(), sc.horizon());
  const auto demand = bach::nodal_injections(sc.network, sc.fleet, sc.profiles, idle, slot);
  const auto sol = bach::solve_slot(sc.network, demand, sc.options.flow);
  std::printf("slot %ld: %s after %d iterations (worst mismatch %.3g p.u.)\n", slot,
              sol.converged() ? "converged" : "NOT converged", sol.iterations, sol.worst_mismatch);
  std::printf("bus,voltage_pu,demand_kw,demand_kvar\n");
  for (Eigen::Index i = 0; i < sc.network.size(); ++i)
    std::printf("%d,%.6f,%.3f,%.3f\n", sc.network.buses()[i].id, sol.voltages(i), sol.demand_p(i),
                sol.demand_q(i));
  std::printf("slack %.3f kW %.3f kvar, losses %.3f kW\n", sol.slack_active, sol.slack_reactive,
              sol.loss_active);
  const auto limits = bach::check_limits(sc.network, sol);
  for (const auto& v : limits.violations) {
    static const char* names[] = {"under-voltage", "over-voltage", "bus apparent", "line apparent"};
    std::printf("violation: %s element %d value %.6g limit %.6g by %.6g\n",
                names[static_cast<int>(v.kind)], v.element, v.value, v.limit, v.magnitude);
  }
  if (limits.empty()) std::printf("no limit violations\n");
  return code(sol.converged() ? ExitCode::Ok : ExitCode::NonConvergence);
}

int validate_cmd(const CommonOptions& o) {
  const auto cfg = resolve(o);
  const auto sc = bach::build_scenario(cfg);
  std::printf("network: %ld buses, %zu lines, slack bus %d, base %.4g kV / %.4g MVA\n",
              static_cast<long>(sc.network.size()), sc.network.lines().size(),
              sc.network.buses()[sc.network.slack()].id, sc.network.base_voltage(),
              sc.network.base_power());
  std::printf("profiles: %ld slots of %.4g h\n", static_cast<long>(sc.horizon()), sc.profiles.dt);
  std::printf("devices: %zu PV, %zu EV stations, %zu BESS\n", sc.fleet.pv_units.size(),
              sc.fleet.ev_stations.size(), sc.fleet.bess_units.size());
  const auto idle = bach::Schedule::zeros(sc.units(), sc.horizon());
  const auto report = bach::feasibility(sc, idle);
  std::printf("idle schedule: %s (violation %.3g)\n", report.empty() ? "feasible" : "infeasible",
              report.total);
  return code(ExitCode::Ok);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Battery degradation-aware BESS scheduling"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string case_arg = "1,2,3";
  auto* case_cmd = app.add_subcommand("case", "run cases 1 (min cost), 2 (min network F2), 3 (both)");
  add_common(case_cmd, common);
  case_cmd->add_option("--case", case_arg, "comma-separated case ids");

  auto* pareto_cmd = app.add_subcommand("pareto", "epsilon-constraint front and fuzzy compromise");
  add_common(pareto_cmd, common);

  std::string param = "lambda1";
  std::vector<double> values{0.5, 1, 2, 4};
  auto* sweep = app.add_subcommand("sweep", "lambda sensitivity sweep");
  add_common(sweep, common);
  sweep->add_option("--param", param, "lambda1 or lambda2")
      ->check(CLI::IsMember({"lambda1", "lambda2"}));
  sweep->add_option("--values", values, "weights to evaluate")->delimiter(',');

  long slot = 0;
  auto* pf = app.add_subcommand("powerflow", "solve one slot with idle batteries");
  add_common(pf, common);
  pf->add_option("--slot", slot, "slot index");

  auto* validate = app.add_subcommand("validate", "load and check a scenario");
  add_common(validate, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : code(ExitCode::Usage);
  }

  try {
    if (*case_cmd) {
      std::vector<int> cases;
      for (const auto& item : CLI::detail::split(case_arg, ',')) cases.push_back(std::stoi(item));
      return run_case_cmd(common, cases);
    }
    if (*pareto_cmd) return run_case_cmd(common, {3});
    if (*sweep) {
      if (values.size() < 2) {
        std::fprintf(stderr, "sweep needs at least two values\n");
        return code(ExitCode::Usage);
      }
      return sweep_cmd(common, param, values);
    }
    if (*pf) return powerflow_cmd(common, slot);
    if (*validate) return validate_cmd(common);
  } catch (const bach::ParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return code(ExitCode::Config);
  } catch (const bach::TopologyError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return code(ExitCode::Config);
  } catch (const bach::ValidationError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return code(ExitCode::Config);
  } catch (const bach::ConvergenceError& e) {
    std::fprintf(stderr, "power flow did not converge: %s\n", e.what());
    return code(ExitCode::NonConvergence);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "argument error: %s\n", e.what());
    return code(ExitCode::Usage);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return code(ExitCode::Infeasible);
  }
  return code(ExitCode::Usage);
}
