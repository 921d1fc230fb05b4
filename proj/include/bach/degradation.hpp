#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace bach {

struct BessParams {
  int bus = 0;
  double capacity = 1000.0;     // kWh
  double p_max = 250.0;         // kW
  double eta_charge = 0.95;
  double eta_discharge = 0.95;
  double soc_min = 0.1;
  double soc_max = 0.9;
  double soc_init = 0.5;
  double invest_cost = 750.0;   // $, same time basis as the horizon's energy cost
  double discount_rate = 0.05;  // per year
  double ref_cycle_life = 3650.0;
  double dod_exponent = 1.1;
  double calendar_life_cap = 15.0;  // years

  /// Throws ValidationError on any out-of-range field.
  void validate() const;
};

/// How the efficiencies enter the state-of-charge update.
enum class EfficiencyModel {
  /// Both efficiencies divide the power term (charging with eta < 1 adds
  /// more SoC than the delivered energy).
  AsPublished,
  /// Charging stores eta * energy, discharging draws energy / eta.
  Physical,
};

/// One charge/discharge step over `dt` hours. Inputs are non-negative and at
/// most one may be nonzero; throws std::invalid_argument otherwise. The
/// result is not clamped to the SoC band.
double soc_step(double soc, double p_discharge, double p_charge, const BessParams& params,
                double dt, EfficiencyModel model = EfficiencyModel::AsPublished);

/// Same update from a signed power (positive = discharge).
double soc_step_signed(double soc, double power, const BessParams& params, double dt,
                       EfficiencyModel model = EfficiencyModel::AsPublished);

struct SocTrajectory {
  Eigen::VectorXd soc;  // horizon + 1 entries, soc[0] = soc_init
  std::optional<Eigen::Index> first_infeasible_slot;
  /// Sum over slots of the distance outside [soc_min, soc_max].
  double excursion = 0.0;

  bool feasible() const { return !first_infeasible_slot.has_value(); }
};

/// Folds soc_step over a signed power row. The trajectory is never clamped;
/// infeasibility is reported through first_infeasible_slot and excursion.
SocTrajectory simulate_soc(const Eigen::Ref<const Eigen::VectorXd>& power, const BessParams& params,
                           double dt, EfficiencyModel model = EfficiencyModel::AsPublished);

enum class Direction { Charge, Discharge };

struct DodEvent {
  Eigen::Index start_slot = 0;
  Eigen::Index end_slot = 0;
  double depth = 0.0;
  Direction direction = Direction::Charge;
};

/// Splits a trajectory into monotone charge/discharge swings. A reversal is
/// only registered once the SoC has moved back from the running extreme by at
/// least `noise_floor`, so jitter below the floor neither creates events nor
/// splits a larger swing.
std::vector<DodEvent> extract_dod_events(const Eigen::Ref<const Eigen::VectorXd>& soc,
                                         double noise_floor = 0.01);

/// Cycle life in years: n* / (365 * 0.5 * sum(depth^kappa) / days), capped
/// at the calendar life. `days` is the horizon length in days.
double cycle_life(const std::vector<DodEvent>& events, const BessParams& params, double days = 1.0);

/// Capital recovery factor r (1+r)^T / ((1+r)^T - 1), evaluated through
/// expm1/log1p so that large T does not overflow. r = 0 gives 1/T.
template <typename Scalar>
Scalar capital_recovery_factor(Scalar rate, Scalar years) {
  using std::expm1;
  using std::log1p;
  if (rate == Scalar(0)) return Scalar(1) / years;
  return rate / -expm1(-years * log1p(rate));
}

/// Annuitized investment cost c^B * CRF(r, T). Throws std::invalid_argument for T <= 0.
double degradation_cost(const BessParams& params, double t_cycle);

}  // namespace bach
