#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bach/grid_model.hpp"

namespace bach {

/// Exponential voltage-dependent demand p* (v / v*)^kappa.
template <typename Scalar>
Scalar voltage_dependent_load(Scalar p_star, Scalar v, Scalar v_star, Scalar kappa) {
  using std::pow;
  if (!(v > Scalar(0)) || !(v_star > Scalar(0)))
    throw std::domain_error("voltage_dependent_load: voltages must be positive");
  if (kappa == Scalar(0)) return p_star;
  return p_star * pow(v / v_star, kappa);
}

struct PowerFlowOptions {
  double tolerance = 1e-8;  // per-unit power mismatch
  int max_iterations = 100;
  double collapse_floor = 0.5;  // p.u.
};

enum class FlowStatus { Converged, MaxIterations, VoltageCollapse };

struct PowerFlowSolution {
  Eigen::VectorXcd phasors;        // p.u.
  Eigen::VectorXd voltages;        // |V| p.u.
  Eigen::VectorXd demand_p;        // kW consumed per bus at the solved voltage
  Eigen::VectorXd demand_q;        // kvar
  Eigen::VectorXd branch_current;  // |I| p.u. per line
  Eigen::VectorXd branch_apparent; // kVA at the sending end of each line
  double slack_active = 0.0;       // kW drawn from the grid
  double slack_reactive = 0.0;     // kvar
  double loss_active = 0.0;        // kW, sum of I^2 R
  double loss_reactive = 0.0;      // kvar, sum of I^2 X
  FlowStatus status = FlowStatus::MaxIterations;
  int iterations = 0;
  double worst_mismatch = 0.0;     // p.u.

  bool converged() const { return status == FlowStatus::Converged; }
  /// Apparent power per bus in kVA: net demand for load buses, the grid
  /// injection for the slack.
  Eigen::VectorXd bus_apparent(const NetworkModel& network) const;
};

/// Backward/forward sweep (current summation) for a radial feeder. Loads are
/// re-evaluated at every iteration with the exponential model; device power
/// is constant. Never throws on non-convergence, check `status`.
PowerFlowSolution solve_slot(const NetworkModel& network, const NodalDemand& demand,
                             const PowerFlowOptions& options = {});

enum class LimitKind { UnderVoltage, OverVoltage, BusApparent, LineApparent };

struct LimitViolation {
  LimitKind kind;
  int element;        // bus id, or line index for LineApparent
  double value;       // p.u. or kVA
  double limit;
  double magnitude;   // distance beyond the limit, same unit as value
};

struct LimitReport {
  std::vector<LimitViolation> violations;

  bool empty() const { return violations.empty(); }
  /// Sum of voltage magnitudes (p.u.) and bus apparent-power excesses
  /// relative to their caps. Line entries are informational only.
  double gating_total() const;
};

/// Voltage band, bus apparent-power caps and line ratings.
LimitReport check_limits(const NetworkModel& network, const PowerFlowSolution& solution);

}  // namespace bach
