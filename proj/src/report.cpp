#include "bach/report.hpp"

#include <ostream>

#include "json.hpp"

#include "csv.hpp"

namespace bach {

namespace {

using csv::format;

std::string bess_label(const BessParams& b, std::size_t index) {
  return "bess" + std::to_string(index + 1) + "_bus" + std::to_string(b.bus);
}

}  // namespace

std::string csv_preamble(const std::string& schema) {
  return "# bach " + schema + " v" + std::to_string(kSchemaVersion) + "\n";
}

void write_case_summary_csv(const std::vector<CaseRow>& rows, const DeviceFleet& fleet,
                            std::ostream& out) {
  out << csv_preamble("case_summary");
  out << "case,energy_purchase_usd,battery_degradation_usd,energy_losses_kwh,voltage_deviation,"
         "f1,f2,feasible,violation";
  for (std::size_t u = 0; u < fleet.bess_units.size(); ++u)
    out << ",life_" << bess_label(fleet.bess_units[u], u) << "_years";
  out << '\n';
  for (const auto& r : rows) {
    const auto& o = r.objectives;
    out << r.label << ',' << format(o.energy_cost) << ',' << format(o.degradation_cost) << ','
        << format(o.loss_total) << ',' << format(o.voltage_dev) << ',' << format(o.f1) << ','
        << format(o.f2) << ',' << (o.feasible ? 1 : 0) << ',' << format(o.violation);
    for (double life : o.cycle_life) out << ',' << format(life);
    out << '\n';
  }
}

void write_front_csv(const ParetoFront& front, std::ostream& out) {
  out << csv_preamble("pareto_front");
  out << "epsilon,f1,energy_cost,degradation_cost,loss_kwh,voltage_dev,f2,mu_f1,mu_f2,mu_norm,"
         "selected\n";
  for (std::size_t k = 0; k < front.points.size(); ++k) {
    const auto& p = front.points[k];
    const auto& o = p.objectives;
    out << format(p.epsilon) << ',' << format(o.f1) << ',' << format(o.energy_cost) << ','
        << format(o.degradation_cost) << ',' << format(o.loss_total) << ','
        << format(o.voltage_dev) << ',' << format(o.f2) << ',' << format(p.membership(0)) << ','
        << format(p.membership(1)) << ',' << format(p.normalized) << ','
        << (k == front.selected ? 1 : 0) << '\n';
  }
}

void write_front_json(const ParetoFront& front, const DeviceFleet& fleet, std::ostream& out) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema"] = "bach.pareto_front";
  j["version"] = kSchemaVersion;
  j["payoff"] = {{"f1_min", front.payoff.f1_min},
                 {"f1_max", front.payoff.f1_max},
                 {"f2_min", front.payoff.f2_min},
                 {"f2_max", front.payoff.f2_max}};
  j["selected"] = front.selected;
  j["failures"] = front.failures;
  ordered_json units = ordered_json::array();
  for (std::size_t u = 0; u < fleet.bess_units.size(); ++u)
    units.push_back(bess_label(fleet.bess_units[u], u));
  j["bess_units"] = units;
  ordered_json points = ordered_json::array();
  for (const auto& p : front.points) {
    const auto& o = p.objectives;
    ordered_json schedule = ordered_json::array();
    for (Eigen::Index u = 0; u < p.schedule.units(); ++u) {
      std::vector<double> row(p.schedule.power.row(u).begin(), p.schedule.power.row(u).end());
      schedule.push_back(row);
    }
    points.push_back({{"epsilon", p.epsilon},
                      {"energy_cost", o.energy_cost},
                      {"degradation_cost", o.degradation_cost},
                      {"f1", o.f1},
                      {"loss_kwh", o.loss_total},
                      {"voltage_dev", o.voltage_dev},
                      {"f2", o.f2},
                      {"cycle_life_years", o.cycle_life},
                      {"membership", {p.membership(0), p.membership(1)}},
                      {"normalized", p.normalized},
                      {"schedule_kw", schedule}});
  }
  j["points"] = points;
  out << j.dump(2) << '\n';
}

void write_battery_life_csv(const ParetoFront& front, const DeviceFleet& fleet, std::ostream& out) {
  out << csv_preamble("battery_life");
  out << "point,f2";
  for (std::size_t u = 0; u < fleet.bess_units.size(); ++u)
    out << ",life_" << bess_label(fleet.bess_units[u], u) << "_years";
  out << ",selected\n";
  for (std::size_t k = 0; k < front.points.size(); ++k) {
    const auto& o = front.points[k].objectives;
    out << k << ',' << format(o.f2);
    for (double life : o.cycle_life) out << ',' << format(life);
    out << ',' << (k == front.selected ? 1 : 0) << '\n';
  }
}

void write_schedule_csv(const Schedule& schedule, const DeviceFleet& fleet, std::ostream& out) {
  out << csv_preamble("schedule");
  out << "slot";
  for (std::size_t u = 0; u < fleet.bess_units.size(); ++u)
    out << ',' << bess_label(fleet.bess_units[u], u) << "_kw";
  out << '\n';
  for (Eigen::Index t = 0; t < schedule.horizon(); ++t) {
    out << t;
    for (Eigen::Index u = 0; u < schedule.units(); ++u) out << ',' << format(schedule.power(u, t));
    out << '\n';
  }
}

void write_soc_csv(const std::vector<SocTrajectory>& soc, const DeviceFleet& fleet,
                   std::ostream& out) {
  out << csv_preamble("soc");
  out << "step";
  for (std::size_t u = 0; u < fleet.bess_units.size(); ++u)
    out << ',' << bess_label(fleet.bess_units[u], u) << "_soc";
  out << '\n';
  const Eigen::Index steps = soc.empty() ? 0 : soc.front().soc.size();
  for (Eigen::Index t = 0; t < steps; ++t) {
    out << t;
    for (const auto& traj : soc) out << ',' << format(traj.soc(t));
    out << '\n';
  }
}

void write_voltages_csv(const std::vector<PowerFlowSolution>& flows, const NetworkModel& network,
                        std::ostream& out) {
  out << csv_preamble("voltages");
  out << "slot";
  for (const auto& b : network.buses()) out << ",bus_" << b.id;
  out << ",loss_kw,slack_kw,converged\n";
  for (std::size_t t = 0; t < flows.size(); ++t) {
    out << t;
    for (Eigen::Index i = 0; i < flows[t].voltages.size(); ++i)
      out << ',' << format(flows[t].voltages(i));
    out << ',' << format(flows[t].loss_active) << ',' << format(flows[t].slack_active) << ','
        << (flows[t].converged() ? 1 : 0) << '\n';
  }
}

void write_sensitivity_csv(const std::vector<SensitivityRow>& rows, std::ostream& out) {
  out << csv_preamble("sensitivity");
  out << "param,value,energy_cost,degradation_cost,loss_kwh,voltage_dev,status\n";
  for (const auto& r : rows) {
    const auto& o = r.objectives;
    out << r.param << ',' << format(r.value) << ',';
    if (r.ok)
      out << format(o.energy_cost) << ',' << format(o.degradation_cost) << ','
          << format(o.loss_total) << ',' << format(o.voltage_dev) << ",ok\n";
    else
      out << ",,,,failed\n";
  }
}

}  // namespace bach
