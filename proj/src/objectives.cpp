#include "bach/objectives.hpp"

#include <cmath>

#include "bach/errors.hpp"

namespace bach {

void Scenario::validate() const {
  fleet.validate(network);
  profiles.validate();
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::PowerBound: return "power_bound";
    case ViolationKind::StateOfCharge: return "soc";
    case ViolationKind::TerminalSoc: return "terminal_soc";
    case ViolationKind::Voltage: return "voltage";
    case ViolationKind::Apparent: return "apparent_power";
    case ViolationKind::NonConvergence: return "non_convergence";
  }
  return "unknown";
}

double energy_purchase_cost(const Eigen::Ref<const Eigen::VectorXd>& prices,
                            const Eigen::Ref<const Eigen::VectorXd>& grid_power, double dt,
                            bool export_revenue) {
  if (prices.size() != grid_power.size())
    throw ValidationError("energy_purchase_cost: price and power series differ in length");
  double cost = 0.0;
  for (Eigen::Index t = 0; t < prices.size(); ++t) {
    const double p = export_revenue ? grid_power(t) : std::max(grid_power(t), 0.0);
    cost += prices(t) * p * dt;
  }
  return cost;
}

double loss_total(std::span<const PowerFlowSolution> solutions, double dt) {
  double total = 0.0;
  for (std::size_t t = 0; t < solutions.size(); ++t) {
    if (!solutions[t].converged())
      throw ConvergenceError("loss_total: slot " + std::to_string(t) + " did not converge");
    total += solutions[t].loss_active * dt;
  }
  return total;
}

double voltage_deviation(std::span<const PowerFlowSolution> solutions) {
  double total = 0.0;
  for (std::size_t t = 0; t < solutions.size(); ++t) {
    if (!solutions[t].converged())
      throw ConvergenceError("voltage_deviation: slot " + std::to_string(t) + " did not converge");
    total += (1.0 - solutions[t].voltages.array()).abs().sum();
  }
  return total;
}

namespace {

template <bool Detailed>
Evaluation evaluate_impl(const Scenario& sc, const Schedule& schedule, const Weights& w) {
  const auto units = sc.units();
  const auto horizon = sc.horizon();
  const double dt = sc.profiles.dt;
  if (schedule.units() != units || schedule.horizon() != horizon)
    throw ValidationError("schedule shape does not match the scenario");

  Evaluation ev;
  ObjectiveValues& obj = ev.objectives;
  ViolationReport& report = ev.violations;
  auto add = [&](ViolationKind kind, int element, Eigen::Index slot, double magnitude,
                 double normalized) {
    report.total += normalized;
    if constexpr (Detailed) report.items.push_back({kind, element, slot, magnitude, normalized});
  };

  obj.cycle_life.resize(static_cast<std::size_t>(units));
  for (Eigen::Index u = 0; u < units; ++u) {
    const BessParams& bp = sc.fleet.bess_units[static_cast<std::size_t>(u)];
    const Eigen::VectorXd row = schedule.power.row(u).transpose();
    for (Eigen::Index t = 0; t < horizon; ++t) {
      const double excess = std::abs(row(t)) - bp.p_max;
      if (excess > 1e-9) add(ViolationKind::PowerBound, static_cast<int>(u), t, excess, excess / bp.p_max);
    }
    SocTrajectory traj = simulate_soc(row, bp, dt, sc.options.efficiency);
    if (!traj.feasible()) {
      for (Eigen::Index t = 0; t < horizon; ++t) {
        const double s = traj.soc(t + 1);
        double out = 0.0;
        if (s < bp.soc_min) out = bp.soc_min - s;
        if (s > bp.soc_max) out = s - bp.soc_max;
        if (out > 1e-12) add(ViolationKind::StateOfCharge, static_cast<int>(u), t, out, out);
      }
    }
    if (sc.options.enforce_terminal_soc) {
      const double short_by = bp.soc_init - traj.soc(horizon);
      if (short_by > 1e-12)
        add(ViolationKind::TerminalSoc, static_cast<int>(u), horizon, short_by, short_by);
    }
    const auto events = extract_dod_events(traj.soc, sc.options.noise_floor);
    const double life = cycle_life(events, bp, sc.profiles.days());
    obj.cycle_life[static_cast<std::size_t>(u)] = life;
    obj.degradation_cost += degradation_cost(bp, life);
    if constexpr (Detailed) ev.soc.push_back(std::move(traj));
  }

  Eigen::VectorXd grid(horizon);
  for (Eigen::Index t = 0; t < horizon; ++t) {
    const NodalDemand demand = nodal_injections(sc.network, sc.fleet, sc.profiles, schedule, t);
    PowerFlowSolution flow = solve_slot(sc.network, demand, sc.options.flow);
    if (!flow.converged()) add(ViolationKind::NonConvergence, -1, t, flow.worst_mismatch, 1.0);
    grid(t) = flow.slack_active;
    obj.loss_total += flow.loss_active * dt;
    obj.voltage_dev += (1.0 - flow.voltages.array()).abs().sum();

    const auto& buses = sc.network.buses();
    const Eigen::VectorXd apparent = flow.bus_apparent(sc.network);
    for (Eigen::Index i = 0; i < sc.network.size(); ++i) {
      const Bus& b = buses[i];
      const double v = flow.voltages(i);
      const double out = v < b.v_min ? b.v_min - v : (v > b.v_max ? v - b.v_max : 0.0);
      if (out > 0) add(ViolationKind::Voltage, b.id, t, out, out);
      const double over = apparent(i) - b.s_max;
      if (over > 0) add(ViolationKind::Apparent, b.id, t, over, over / b.s_max);
    }
    if constexpr (Detailed) ev.flows.push_back(std::move(flow));
  }
  obj.energy_cost = energy_purchase_cost(sc.profiles.price, grid, dt, sc.options.export_revenue);
  obj.f1 = obj.energy_cost + w.lambda1 * obj.degradation_cost;
  obj.f2 = obj.loss_total + w.lambda2 * obj.voltage_dev;
  obj.violation = report.total;
  obj.feasible = report.total <= kFeasibilityTolerance;
  return ev;
}

}  // namespace

Evaluation evaluate_detailed(const Scenario& scenario, const Schedule& schedule,
                             const Weights& weights) {
  return evaluate_impl<true>(scenario, schedule, weights);
}

ObjectiveValues evaluate_schedule(const Scenario& scenario, const Schedule& schedule,
                                  const Weights& weights) {
  return std::move(evaluate_impl<false>(scenario, schedule, weights).objectives);
}

}  // namespace bach
