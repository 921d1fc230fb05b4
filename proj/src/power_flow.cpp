#include "bach/power_flow.hpp"

#include <complex>
#include <limits>

namespace bach {

namespace {

using cd = std::complex<double>;

// Per-unit complex demand at a given voltage magnitude.
cd bus_demand(const Bus& bus, double load_p, double load_q, double device_p, double vmag,
              double base_kw) {
  double scale = 1.0;
  if (bus.load_exponent != 0.0) scale = std::pow(vmag / bus.v_nominal, bus.load_exponent);
  return cd(load_p * scale + device_p, load_q * scale) / base_kw;
}

}  // namespace

PowerFlowSolution solve_slot(const NetworkModel& network, const NodalDemand& demand,
                             const PowerFlowOptions& options) {
  const auto n = network.size();
  const auto& buses = network.buses();
  const auto& lines = network.lines();
  const auto& order = network.order();
  const auto& parent = network.parent();
  const auto& feeder = network.feeder_line();
  const double base_kw = network.base_power_kw();
  const double zbase = network.base_impedance();
  const auto slack = network.slack();

  std::vector<cd> z(lines.size());
  for (std::size_t k = 0; k < lines.size(); ++k)
    z[k] = cd(lines[k].resistance, lines[k].reactance) / zbase;

  PowerFlowSolution sol;
  Eigen::VectorXcd v = Eigen::VectorXcd::Constant(n, cd(buses[slack].v_nominal, 0.0));
  Eigen::VectorXcd current(n);   // bus demand current
  Eigen::VectorXcd acc(n);       // current through the line feeding each bus

  // Plain real arithmetic: std::complex multiply/divide carry NaN recovery
  // paths that dominate the sweep otherwise.
  auto demand_currents = [&](Eigen::VectorXcd& out) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double vr = v(i).real();
      const double vi = v(i).imag();
      const double m2 = vr * vr + vi * vi;
      const cd s = bus_demand(buses[i], demand.load_p(i), demand.load_q(i), demand.device_p(i),
                              std::sqrt(m2), base_kw);
      // conj(s / v) = conj(s) v / |v|^2
      out(i) = cd((s.real() * vr + s.imag() * vi) / m2, (s.real() * vi - s.imag() * vr) / m2);
    }
  };
  auto backward = [&] {
    acc = current;
    for (auto it = order.rbegin(); it != order.rend(); ++it)
      if (parent[*it] >= 0) acc(parent[*it]) += acc(*it);
  };

  demand_currents(current);
  Eigen::VectorXcd next(n);
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    sol.iterations = iter;
    backward();
    double vmin2 = std::numeric_limits<double>::infinity();
    for (const auto b : order) {
      if (parent[b] >= 0) {
        const cd zk = z[feeder[b]];
        const cd a = acc(b);
        v(b) = v(parent[b]) - cd(zk.real() * a.real() - zk.imag() * a.imag(),
                                 zk.real() * a.imag() + zk.imag() * a.real());
      }
      vmin2 = std::min(vmin2, std::norm(v(b)));
    }
    if (!(vmin2 >= options.collapse_floor * options.collapse_floor)) {
      sol.status = FlowStatus::VoltageCollapse;
      break;
    }
    demand_currents(next);
    double worst2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      worst2 = std::max(worst2, std::norm(v(i)) * std::norm(next(i) - current(i)));
    current.swap(next);
    sol.worst_mismatch = std::sqrt(worst2);
    if (sol.worst_mismatch < options.tolerance) {
      sol.status = FlowStatus::Converged;
      break;
    }
  }

  backward();
  sol.phasors = v;
  sol.voltages = v.cwiseAbs();
  sol.demand_p.resize(n);
  sol.demand_q.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const cd s = bus_demand(buses[i], demand.load_p(i), demand.load_q(i), demand.device_p(i),
                            sol.voltages(i), base_kw);
    sol.demand_p(i) = s.real() * base_kw;
    sol.demand_q(i) = s.imag() * base_kw;
  }
  sol.branch_current = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lines.size()));
  sol.branch_apparent = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lines.size()));
  double loss_p = 0.0;
  double loss_q = 0.0;
  for (Eigen::Index b = 0; b < n; ++b) {
    if (parent[b] < 0) continue;
    const auto k = feeder[b];
    const double i2 = std::norm(acc(b));
    loss_p += i2 * z[k].real();
    loss_q += i2 * z[k].imag();
    sol.branch_current(k) = std::sqrt(i2);
    sol.branch_apparent(k) = std::abs(v(parent[b]) * std::conj(acc(b))) * base_kw;
  }
  const cd s_slack = v(slack) * std::conj(acc(slack));
  sol.slack_active = s_slack.real() * base_kw;
  sol.slack_reactive = s_slack.imag() * base_kw;
  sol.loss_active = loss_p * base_kw;
  sol.loss_reactive = loss_q * base_kw;
  return sol;
}

Eigen::VectorXd PowerFlowSolution::bus_apparent(const NetworkModel& network) const {
  Eigen::VectorXd s = (demand_p.array().square() + demand_q.array().square()).sqrt();
  s(network.slack()) = std::hypot(slack_active, slack_reactive);
  return s;
}

double LimitReport::gating_total() const {
  double total = 0.0;
  for (const auto& v : violations) {
    switch (v.kind) {
      case LimitKind::UnderVoltage:
      case LimitKind::OverVoltage: total += v.magnitude; break;
      case LimitKind::BusApparent: total += v.magnitude / v.limit; break;
      case LimitKind::LineApparent: break;
    }
  }
  return total;
}

LimitReport check_limits(const NetworkModel& network, const PowerFlowSolution& solution) {
  LimitReport report;
  const auto& buses = network.buses();
  const Eigen::VectorXd apparent = solution.bus_apparent(network);
  for (Eigen::Index i = 0; i < network.size(); ++i) {
    const Bus& b = buses[i];
    const double v = solution.voltages(i);
    if (v < b.v_min)
      report.violations.push_back({LimitKind::UnderVoltage, b.id, v, b.v_min, b.v_min - v});
    else if (v > b.v_max)
      report.violations.push_back({LimitKind::OverVoltage, b.id, v, b.v_max, v - b.v_max});
    if (apparent(i) > b.s_max)
      report.violations.push_back(
          {LimitKind::BusApparent, b.id, apparent(i), b.s_max, apparent(i) - b.s_max});
  }
  const auto& feeder = network.feeder_line();
  for (Eigen::Index i = 0; i < network.size(); ++i) {
    if (feeder[i] < 0) continue;
    const double s = solution.branch_apparent(feeder[i]);
    const double cap = network.lines()[feeder[i]].s_max;
    if (s > cap)
      report.violations.push_back(
          {LimitKind::LineApparent, static_cast<int>(feeder[i]), s, cap, s - cap});
  }
  return report;
}

}  // namespace bach
