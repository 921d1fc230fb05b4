#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bach/degradation.hpp"
#include "bach/grid_model.hpp"
#include "bach/power_flow.hpp"
#include "bach/schedule.hpp"

namespace bach {

struct ScenarioOptions {
  /// When false, negative grid draw (export) earns nothing.
  bool export_revenue = false;
  EfficiencyModel efficiency = EfficiencyModel::AsPublished;
  /// Require every BESS to end the horizon at or above its initial SoC.
  bool enforce_terminal_soc = false;
  double noise_floor = 0.01;
  PowerFlowOptions flow;
};

struct Scenario {
  NetworkModel network;
  DeviceFleet fleet;
  ScenarioProfiles profiles;
  ScenarioOptions options;

  Eigen::Index units() const { return static_cast<Eigen::Index>(fleet.bess_units.size()); }
  Eigen::Index horizon() const { return profiles.horizon; }

  /// Validates fleet and profiles against the network.
  void validate() const;
};

struct Weights {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
};

struct ObjectiveValues {
  double energy_cost = 0.0;       // $
  double degradation_cost = 0.0;  // $, summed over BESS units
  double f1 = 0.0;
  double loss_total = 0.0;        // kWh
  double voltage_dev = 0.0;       // sum over slots and buses of |1 - v|
  double f2 = 0.0;
  bool feasible = true;
  double violation = 0.0;         // normalized aggregate
  std::vector<double> cycle_life; // years, per BESS unit
};

enum class ViolationKind { PowerBound, StateOfCharge, TerminalSoc, Voltage, Apparent, NonConvergence };

struct ViolationItem {
  ViolationKind kind;
  int element;          // BESS index or bus id
  Eigen::Index slot;    // -1 when not slot specific
  double magnitude;     // natural unit (kW, SoC fraction, p.u., kVA)
  double normalized;    // contribution to the total
};

struct ViolationReport {
  std::vector<ViolationItem> items;
  double total = 0.0;

  bool empty() const { return items.empty(); }
};

/// Full simulation of one schedule.
struct Evaluation {
  ObjectiveValues objectives;
  std::vector<SocTrajectory> soc;
  std::vector<PowerFlowSolution> flows;
  ViolationReport violations;
};

/// A schedule counts as feasible when its normalized violation is at or
/// below this value.
inline constexpr double kFeasibilityTolerance = 1e-9;

/// Sum of rho_t p_t dt. Negative draws count only when `export_revenue`.
double energy_purchase_cost(const Eigen::Ref<const Eigen::VectorXd>& prices,
                            const Eigen::Ref<const Eigen::VectorXd>& grid_power, double dt,
                            bool export_revenue = false);

/// Network I^2R energy in kWh. Throws ConvergenceError on a non-converged slot.
double loss_total(std::span<const PowerFlowSolution> solutions, double dt);

/// Sum over slots and buses of |1 - v|. Throws ConvergenceError on a
/// non-converged slot.
double voltage_deviation(std::span<const PowerFlowSolution> solutions);

/// Simulates SoC, solves every slot and assembles the objectives together
/// with an itemized violation report.
Evaluation evaluate_detailed(const Scenario& scenario, const Schedule& schedule,
                             const Weights& weights);

/// Objective values only; the hot path used by the optimizer.
ObjectiveValues evaluate_schedule(const Scenario& scenario, const Schedule& schedule,
                                  const Weights& weights);

const char* to_string(ViolationKind kind);

}  // namespace bach
