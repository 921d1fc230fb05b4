#pragma once

#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bach/degradation.hpp"
#include "bach/schedule.hpp"

namespace bach {

enum class BusKind { Slack, Load };
enum class CustomerClass { Residential = 0, Commercial = 1, Industrial = 2 };
inline constexpr int kCustomerClasses = 3;

struct Bus {
  int id = 0;
  BusKind kind = BusKind::Load;
  double base_active_load = 0.0;    // kW
  double base_reactive_load = 0.0;  // kvar
  double v_nominal = 1.0;           // p.u.
  double v_min = 0.90;
  double v_max = 1.05;
  double s_max = 1000.0;            // kVA
  double load_exponent = 0.0;
  CustomerClass customer_class = CustomerClass::Residential;
};

struct Line {
  int from_bus = 0;
  int to_bus = 0;
  double resistance = 0.0;  // ohm
  double reactance = 0.0;   // ohm
  /// Thermal rating in kVA; infinity when the file gives none.
  double s_max = std::numeric_limits<double>::infinity();
};

/// Radial network. Construction validates limits and topology; the object is
/// immutable afterwards. Buses are addressed by position (index) internally;
/// `Bus::id` is the identifier used in files.
class NetworkModel {
 public:
  NetworkModel(std::vector<Bus> buses, std::vector<Line> lines, double base_voltage_kv,
               double base_power_mva);

  const std::vector<Bus>& buses() const { return buses_; }
  const std::vector<Line>& lines() const { return lines_; }
  double base_voltage() const { return base_voltage_kv_; }
  double base_power() const { return base_power_mva_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(buses_.size()); }

  /// Bus impedance base in ohms.
  double base_impedance() const { return base_voltage_kv_ * base_voltage_kv_ / base_power_mva_; }
  double base_power_kw() const { return base_power_mva_ * 1000.0; }

  Eigen::Index slack() const { return slack_; }
  /// Throws ValidationError for unknown ids.
  Eigen::Index index_of(int bus_id) const;
  bool has_bus(int bus_id) const;

  /// Buses in breadth-first order from the slack.
  const std::vector<Eigen::Index>& order() const { return order_; }
  /// Parent bus index, -1 for the slack.
  const std::vector<Eigen::Index>& parent() const { return parent_; }
  /// Index into lines() of the line feeding each bus, -1 for the slack.
  const std::vector<Eigen::Index>& feeder_line() const { return feeder_line_; }

  bool operator==(const NetworkModel& other) const;

 private:
  std::vector<Bus> buses_;
  std::vector<Line> lines_;
  double base_voltage_kv_;
  double base_power_mva_;
  Eigen::Index slack_ = -1;
  std::vector<Eigen::Index> order_;
  std::vector<Eigen::Index> parent_;
  std::vector<Eigen::Index> feeder_line_;
};

bool operator==(const Bus& a, const Bus& b);
bool operator==(const Line& a, const Line& b);

/// Reads the record-oriented network CSV (see README). Throws ParseError,
/// TopologyError or ValidationError.
NetworkModel load_network(const std::filesystem::path& path);
NetworkModel parse_network(std::istream& in, const std::string& source = "<stream>");
void write_network(const NetworkModel& network, std::ostream& out);

struct PvUnit {
  int bus = 0;
  double capacity = 0.0;  // kW
};

struct EvStation {
  int bus = 0;
  int level = 1;  // 1 or 2
};

struct DeviceFleet {
  std::vector<PvUnit> pv_units;
  std::vector<EvStation> ev_stations;
  std::vector<BessParams> bess_units;

  void validate(const NetworkModel& network) const;
};

struct ScenarioProfiles {
  Eigen::Index horizon = 0;
  double dt = 1.0;                   // hours
  Eigen::VectorXd price;             // $/kWh
  Eigen::VectorXd pv_fraction;       // of installed capacity
  Eigen::MatrixXd ev_load;           // horizon x 2, kW per station of each level
  Eigen::MatrixXd load_multiplier;   // horizon x 3, indexed by CustomerClass

  /// Horizon length in days (horizon * dt / 24).
  double days() const { return static_cast<double>(horizon) * dt / 24.0; }

  void validate() const;
};

/// Reads a profile CSV with a header row. `price` is required; the optional
/// columns pv_fraction, ev_level1_kw, ev_level2_kw, load_residential,
/// load_commercial and load_industrial default to zero. A `slot` column is
/// ignored.
ScenarioProfiles load_profiles(const std::filesystem::path& path, Eigen::Index horizon,
                               double dt = 1.0);
ScenarioProfiles parse_profiles(std::istream& in, Eigen::Index horizon, double dt = 1.0,
                                const std::string& source = "<stream>");

/// Per-bus demand at one slot; positive = consumption.
struct NodalDemand {
  Eigen::VectorXd load_p;    // kW at v_nominal, voltage dependent
  Eigen::VectorXd load_q;    // kvar at v_nominal, voltage dependent
  Eigen::VectorXd device_p;  // kW, constant power (EV + BESS charge - PV - BESS discharge)

  Eigen::VectorXd net_p() const { return load_p + device_p; }
  Eigen::VectorXd net_q() const { return load_q; }
};

NodalDemand nodal_injections(const NetworkModel& network, const DeviceFleet& fleet,
                             const ScenarioProfiles& profiles, const Schedule& schedule,
                             Eigen::Index slot);

}  // namespace bach
