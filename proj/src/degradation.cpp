#include "bach/degradation.hpp"

#include <stdexcept>
#include <string>

#include "bach/errors.hpp"

namespace bach {

void BessParams::validate() const {
  const std::string where = "BESS at bus " + std::to_string(bus) + ": ";
  if (!(capacity > 0)) throw ValidationError(where + "capacity must be > 0");
  if (!(p_max > 0)) throw ValidationError(where + "p_max must be > 0");
  if (!(eta_charge > 0 && eta_charge <= 1) || !(eta_discharge > 0 && eta_discharge <= 1))
    throw ValidationError(where + "efficiencies must lie in (0, 1]");
  if (!(soc_min >= 0 && soc_min < soc_max && soc_max <= 1))
    throw ValidationError(where + "need 0 <= soc_min < soc_max <= 1");
  if (!(soc_init >= soc_min && soc_init <= soc_max))
    throw ValidationError(where + "soc_init outside [soc_min, soc_max]");
  if (!(dod_exponent >= 0.8 && dod_exponent <= 2.1))
    throw ValidationError(where + "dod_exponent must lie in [0.8, 2.1]");
  if (!(invest_cost >= 0)) throw ValidationError(where + "invest_cost must be >= 0");
  if (!(discount_rate >= 0)) throw ValidationError(where + "discount_rate must be >= 0");
  if (!(ref_cycle_life > 0)) throw ValidationError(where + "ref_cycle_life must be > 0");
  if (!(calendar_life_cap > 0)) throw ValidationError(where + "calendar_life_cap must be > 0");
}

double soc_step(double soc, double p_discharge, double p_charge, const BessParams& params,
                double dt, EfficiencyModel model) {
  if (p_discharge < 0 || p_charge < 0)
    throw std::invalid_argument("soc_step: charge and discharge power must be non-negative");
  if (p_discharge > 0 && p_charge > 0)
    throw std::invalid_argument("soc_step: simultaneous charge and discharge");
  const double e = params.capacity;
  double charge_term = dt * p_charge / (params.eta_charge * e);
  if (model == EfficiencyModel::Physical) charge_term = dt * params.eta_charge * p_charge / e;
  return soc - dt * p_discharge / (params.eta_discharge * e) + charge_term;
}

double soc_step_signed(double soc, double power, const BessParams& params, double dt,
                       EfficiencyModel model) {
  return power >= 0 ? soc_step(soc, power, 0.0, params, dt, model)
                    : soc_step(soc, 0.0, -power, params, dt, model);
}

SocTrajectory simulate_soc(const Eigen::Ref<const Eigen::VectorXd>& power, const BessParams& params,
                           double dt, EfficiencyModel model) {
  SocTrajectory traj;
  traj.soc.resize(power.size() + 1);
  traj.soc(0) = params.soc_init;
  for (Eigen::Index t = 0; t < power.size(); ++t) {
    const double next = soc_step_signed(traj.soc(t), power(t), params, dt, model);
    traj.soc(t + 1) = next;
    double out = 0.0;
    if (next < params.soc_min) out = params.soc_min - next;
    if (next > params.soc_max) out = next - params.soc_max;
    // Tiny round-off at an exactly hit bound is not an excursion.
    if (out > 1e-12) {
      traj.excursion += out;
      if (!traj.first_infeasible_slot) traj.first_infeasible_slot = t;
    }
  }
  return traj;
}

std::vector<DodEvent> extract_dod_events(const Eigen::Ref<const Eigen::VectorXd>& soc,
                                         double noise_floor) {
  std::vector<DodEvent> events;
  if (soc.size() < 2) return events;

  Eigen::Index start = 0;
  Eigen::Index extreme = 0;
  int dir = 0;
  for (Eigen::Index i = 1; i < soc.size(); ++i) {
    const double x = soc(i);
    if (dir == 0) {
      if (x - soc(start) >= noise_floor) {
        dir = 1;
        extreme = i;
      } else if (soc(start) - x >= noise_floor) {
        dir = -1;
        extreme = i;
      }
      continue;
    }
    const double moved = dir > 0 ? x - soc(extreme) : soc(extreme) - x;
    if (moved >= 0) {
      extreme = i;
    } else if (-moved >= noise_floor) {
      events.push_back({start, extreme, std::abs(soc(extreme) - soc(start)),
                        dir > 0 ? Direction::Charge : Direction::Discharge});
      start = extreme;
      extreme = i;
      dir = -dir;
    }
  }
  if (dir != 0)
    events.push_back({start, extreme, std::abs(soc(extreme) - soc(start)),
                      dir > 0 ? Direction::Charge : Direction::Discharge});
  return events;
}

double cycle_life(const std::vector<DodEvent>& events, const BessParams& params, double days) {
  double stress = 0.0;
  for (const auto& e : events) stress += std::pow(e.depth, params.dod_exponent);
  stress /= days;
  if (!(stress > 0)) return params.calendar_life_cap;
  const double years = params.ref_cycle_life / (365.0 * 0.5 * stress);
  return std::min(years, params.calendar_life_cap);
}

double degradation_cost(const BessParams& params, double t_cycle) {
  if (!(t_cycle > 0)) throw std::invalid_argument("degradation_cost: cycle life must be > 0");
  return params.invest_cost * capital_recovery_factor(params.discount_rate, t_cycle);
}

}  // namespace bach
