#include "bach/grid_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include "bach/errors.hpp"
#include "csv.hpp"

namespace bach {

namespace {

const char* class_name(const Bus& bus) {
  if (bus.kind == BusKind::Slack) return "slack";
  switch (bus.customer_class) {
    case CustomerClass::Residential: return "residential";
    case CustomerClass::Commercial: return "commercial";
    case CustomerClass::Industrial: return "industrial";
  }
  return "residential";
}

}  // namespace

bool operator==(const Bus& a, const Bus& b) {
  return a.id == b.id && a.kind == b.kind && a.base_active_load == b.base_active_load &&
         a.base_reactive_load == b.base_reactive_load && a.v_nominal == b.v_nominal &&
         a.v_min == b.v_min && a.v_max == b.v_max && a.s_max == b.s_max &&
         a.load_exponent == b.load_exponent && a.customer_class == b.customer_class;
}

bool operator==(const Line& a, const Line& b) {
  return a.from_bus == b.from_bus && a.to_bus == b.to_bus && a.resistance == b.resistance &&
         a.reactance == b.reactance && a.s_max == b.s_max;
}

NetworkModel::NetworkModel(std::vector<Bus> buses, std::vector<Line> lines, double base_voltage_kv,
                           double base_power_mva)
    : buses_(std::move(buses)),
      lines_(std::move(lines)),
      base_voltage_kv_(base_voltage_kv),
      base_power_mva_(base_power_mva) {
  if (!(base_voltage_kv_ > 0) || !(base_power_mva_ > 0))
    throw ValidationError("network base voltage and power must be positive");
  if (buses_.empty()) throw TopologyError("network has no buses");

  for (std::size_t i = 0; i < buses_.size(); ++i) {
    const Bus& b = buses_[i];
    if (!(b.v_min < b.v_nominal && b.v_nominal <= b.v_max))
      throw ValidationError("bus " + std::to_string(b.id) +
                            ": voltage limits must satisfy v_min < v_nominal <= v_max");
    if (!(b.s_max > 0)) throw ValidationError("bus " + std::to_string(b.id) + ": s_max must be > 0");
    if (!(b.load_exponent >= 0))
      throw ValidationError("bus " + std::to_string(b.id) + ": load exponent must be >= 0");
    if (b.kind == BusKind::Slack) {
      if (slack_ >= 0) throw TopologyError("network has more than one slack bus");
      slack_ = static_cast<Eigen::Index>(i);
    }
    for (std::size_t j = 0; j < i; ++j)
      if (buses_[j].id == b.id) throw ParseError("duplicate bus id " + std::to_string(b.id));
  }
  if (slack_ < 0) throw TopologyError("network has no slack bus");

  const auto n = buses_.size();
  for (const Line& l : lines_) {
    if (l.from_bus == l.to_bus)
      throw TopologyError("line " + std::to_string(l.from_bus) + "-" + std::to_string(l.to_bus) +
                          " is a self-loop");
    if (!has_bus(l.from_bus) || !has_bus(l.to_bus))
      throw TopologyError("line " + std::to_string(l.from_bus) + "-" + std::to_string(l.to_bus) +
                          " references an unknown bus");
    if (!(l.resistance >= 0) || !(l.reactance >= 0))
      throw ValidationError("line impedances must be non-negative");
  }
  if (lines_.size() != n - 1)
    throw TopologyError("radial network needs exactly buses - 1 lines (got " +
                        std::to_string(lines_.size()) + " lines for " + std::to_string(n) +
                        " buses)");

  std::vector<std::vector<std::pair<Eigen::Index, Eigen::Index>>> adjacency(n);
  for (std::size_t k = 0; k < lines_.size(); ++k) {
    const auto a = index_of(lines_[k].from_bus);
    const auto b = index_of(lines_[k].to_bus);
    adjacency[a].emplace_back(b, static_cast<Eigen::Index>(k));
    adjacency[b].emplace_back(a, static_cast<Eigen::Index>(k));
  }

  parent_.assign(n, -1);
  feeder_line_.assign(n, -1);
  std::vector<bool> seen(n, false);
  std::queue<Eigen::Index> frontier;
  frontier.push(slack_);
  seen[slack_] = true;
  while (!frontier.empty()) {
    const auto u = frontier.front();
    frontier.pop();
    order_.push_back(u);
    for (const auto& [v, k] : adjacency[u]) {
      if (k == feeder_line_[u]) continue;
      if (seen[v]) throw TopologyError("network contains a cycle through bus " +
                                       std::to_string(buses_[v].id));
      seen[v] = true;
      parent_[v] = u;
      feeder_line_[v] = k;
      frontier.push(v);
    }
  }
  if (order_.size() != n) {
    for (std::size_t i = 0; i < n; ++i)
      if (!seen[i])
        throw TopologyError("bus " + std::to_string(buses_[i].id) + " is not reachable from slack");
  }
}

Eigen::Index NetworkModel::index_of(int bus_id) const {
  for (std::size_t i = 0; i < buses_.size(); ++i)
    if (buses_[i].id == bus_id) return static_cast<Eigen::Index>(i);
  throw ValidationError("unknown bus id " + std::to_string(bus_id));
}

bool NetworkModel::has_bus(int bus_id) const {
  return std::any_of(buses_.begin(), buses_.end(), [&](const Bus& b) { return b.id == bus_id; });
}

bool NetworkModel::operator==(const NetworkModel& other) const {
  return buses_ == other.buses_ && lines_ == other.lines_ &&
         base_voltage_kv_ == other.base_voltage_kv_ && base_power_mva_ == other.base_power_mva_;
}

NetworkModel parse_network(std::istream& in, const std::string& source) {
  std::vector<Bus> buses;
  std::vector<Line> lines;
  double base_kv = 12.66;
  double base_mva = 10.0;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto fields = csv::split(raw);
    if (fields.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    const std::string& tag = fields[0];
    auto field = [&](std::size_t i) -> const std::string& {
      static const std::string empty;
      return i < fields.size() ? fields[i] : empty;
    };

    if (tag == "base") {
      if (fields.size() < 3) throw ParseError(where + ": base record needs kv and mva");
      base_kv = csv::to_double(fields[1], where);
      base_mva = csv::to_double(fields[2], where);
    } else if (tag == "bus") {
      if (fields.size() < 5) throw ParseError(where + ": bus record needs id, p_kw, q_kvar, class");
      Bus b;
      b.id = csv::to_int(fields[1], where);
      b.base_active_load = csv::to_double(fields[2], where);
      b.base_reactive_load = csv::to_double(fields[3], where);
      const std::string& cls = fields[4];
      if (cls == "slack") {
        b.kind = BusKind::Slack;
        b.s_max = 10000.0;
      } else if (cls == "residential") {
        b.customer_class = CustomerClass::Residential;
      } else if (cls == "commercial") {
        b.customer_class = CustomerClass::Commercial;
      } else if (cls == "industrial") {
        b.customer_class = CustomerClass::Industrial;
      } else {
        throw ParseError(where + ": unknown bus class '" + cls + "'");
      }
      if (!field(5).empty()) b.v_min = csv::to_double(field(5), where);
      if (!field(6).empty()) b.v_max = csv::to_double(field(6), where);
      if (!field(7).empty()) b.s_max = csv::to_double(field(7), where);
      if (!field(8).empty()) b.load_exponent = csv::to_double(field(8), where);
      if (!field(9).empty()) b.v_nominal = csv::to_double(field(9), where);
      if (!(b.v_min < b.v_max))
        throw ValidationError(where + ": bus " + std::to_string(b.id) + " has v_min >= v_max");
      buses.push_back(b);
    } else if (tag == "line") {
      if (fields.size() < 5) throw ParseError(where + ": line record needs from, to, r_ohm, x_ohm");
      Line l;
      l.from_bus = csv::to_int(fields[1], where);
      l.to_bus = csv::to_int(fields[2], where);
      l.resistance = csv::to_double(fields[3], where);
      l.reactance = csv::to_double(fields[4], where);
      if (!field(5).empty()) l.s_max = csv::to_double(field(5), where);
      if (!(l.s_max > 0)) throw ValidationError(where + ": line rating must be > 0");
      lines.push_back(l);
    } else {
      throw ParseError(where + ": unknown record type '" + tag + "'");
    }
  }
  return NetworkModel(std::move(buses), std::move(lines), base_kv, base_mva);
}

NetworkModel load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open network file " + path.string());
  return parse_network(in, path.string());
}

void write_network(const NetworkModel& network, std::ostream& out) {
  auto num = [](double v) { return csv::format_exact(v); };
  out << "# record,fields...\n";
  out << "base," << num(network.base_voltage()) << ',' << num(network.base_power()) << '\n';
  for (const Bus& b : network.buses()) {
    out << "bus," << b.id << ',' << num(b.base_active_load) << ',' << num(b.base_reactive_load)
        << ',' << class_name(b) << ',' << num(b.v_min) << ',' << num(b.v_max) << ','
        << num(b.s_max) << ',' << num(b.load_exponent) << ',' << num(b.v_nominal) << '\n';
  }
  for (const Line& l : network.lines()) {
    out << "line," << l.from_bus << ',' << l.to_bus << ',' << num(l.resistance) << ','
        << num(l.reactance);
    if (std::isfinite(l.s_max)) out << ',' << num(l.s_max);
    out << '\n';
  }
}

void DeviceFleet::validate(const NetworkModel& network) const {
  for (const PvUnit& pv : pv_units) {
    if (!network.has_bus(pv.bus))
      throw ValidationError("PV unit references unknown bus " + std::to_string(pv.bus));
    if (!(pv.capacity > 0)) throw ValidationError("PV capacity must be > 0");
  }
  for (const EvStation& ev : ev_stations) {
    if (!network.has_bus(ev.bus))
      throw ValidationError("EV station references unknown bus " + std::to_string(ev.bus));
    if (ev.level != 1 && ev.level != 2) throw ValidationError("EV station level must be 1 or 2");
  }
  for (const BessParams& b : bess_units) {
    if (!network.has_bus(b.bus))
      throw ValidationError("BESS references unknown bus " + std::to_string(b.bus));
    b.validate();
  }
}

void ScenarioProfiles::validate() const {
  if (horizon <= 0) throw ValidationError("profile horizon must be positive");
  if (!(dt > 0)) throw ValidationError("profile dt must be > 0");
  if (price.size() != horizon || pv_fraction.size() != horizon || ev_load.rows() != horizon ||
      ev_load.cols() != 2 || load_multiplier.rows() != horizon ||
      load_multiplier.cols() != kCustomerClasses)
    throw ValidationError("profile series lengths do not match the horizon");
  if ((price.array() < 0).any()) throw ValidationError("negative price in profiles");
  if ((pv_fraction.array() < 0).any() || (pv_fraction.array() > 1).any())
    throw ValidationError("pv_fraction outside [0, 1]");
  if ((ev_load.array() < 0).any()) throw ValidationError("negative EV load in profiles");
  if ((load_multiplier.array() < 0).any())
    throw ValidationError("negative load multiplier in profiles");
}

ScenarioProfiles parse_profiles(std::istream& in, Eigen::Index horizon, double dt,
                                const std::string& source) {
  std::string raw;
  std::vector<std::string> header;
  std::size_t line_no = 0;
  while (header.empty() && std::getline(in, raw)) {
    ++line_no;
    header = csv::split(raw);
  }
  if (header.empty()) throw ParseError(source + ": missing header row");

  static const std::array<std::string, 8> known = {
      "slot", "price", "pv_fraction", "ev_level1_kw", "ev_level2_kw",
      "load_residential", "load_commercial", "load_industrial"};
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (std::find(known.begin(), known.end(), header[i]) == known.end())
      throw ParseError(source + ": unknown profile column '" + header[i] + "'");
    column[header[i]] = i;
  }
  if (!column.count("price")) throw ParseError(source + ": profile file needs a price column");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto fields = csv::split(raw);
    if (fields.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    if (fields.size() != header.size())
      throw ParseError(where + ": expected " + std::to_string(header.size()) + " fields");
    std::vector<double> values(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) values[i] = csv::to_double(fields[i], where);
    rows.push_back(std::move(values));
  }
  if (static_cast<Eigen::Index>(rows.size()) != horizon)
    throw ValidationError(source + ": profile has " + std::to_string(rows.size()) +
                          " rows, horizon is " + std::to_string(horizon));

  ScenarioProfiles p;
  p.horizon = horizon;
  p.dt = dt;
  p.price = Eigen::VectorXd::Zero(horizon);
  p.pv_fraction = Eigen::VectorXd::Zero(horizon);
  p.ev_load = Eigen::MatrixXd::Zero(horizon, 2);
  p.load_multiplier = Eigen::MatrixXd::Zero(horizon, kCustomerClasses);
  auto fill = [&](const std::string& name, auto&& target) {
    auto it = column.find(name);
    if (it == column.end()) return;
    for (Eigen::Index t = 0; t < horizon; ++t) target(t) = rows[t][it->second];
  };
  fill("price", p.price);
  fill("pv_fraction", p.pv_fraction);
  auto ev1 = p.ev_load.col(0);
  auto ev2 = p.ev_load.col(1);
  fill("ev_level1_kw", ev1);
  fill("ev_level2_kw", ev2);
  auto res = p.load_multiplier.col(0);
  auto com = p.load_multiplier.col(1);
  auto ind = p.load_multiplier.col(2);
  fill("load_residential", res);
  fill("load_commercial", com);
  fill("load_industrial", ind);
  p.validate();
  return p;
}

ScenarioProfiles load_profiles(const std::filesystem::path& path, Eigen::Index horizon, double dt) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open profile file " + path.string());
  return parse_profiles(in, horizon, dt, path.string());
}

NodalDemand nodal_injections(const NetworkModel& network, const DeviceFleet& fleet,
                             const ScenarioProfiles& profiles, const Schedule& schedule,
                             Eigen::Index slot) {
  const auto n = network.size();
  NodalDemand d{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  const auto& buses = network.buses();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double m = profiles.load_multiplier(slot, static_cast<int>(buses[i].customer_class));
    d.load_p(i) = buses[i].base_active_load * m;
    d.load_q(i) = buses[i].base_reactive_load * m;
  }
  for (const EvStation& ev : fleet.ev_stations)
    d.device_p(network.index_of(ev.bus)) += profiles.ev_load(slot, ev.level - 1);
  for (const PvUnit& pv : fleet.pv_units)
    d.device_p(network.index_of(pv.bus)) -= pv.capacity * profiles.pv_fraction(slot);
  for (std::size_t u = 0; u < fleet.bess_units.size(); ++u)
    d.device_p(network.index_of(fleet.bess_units[u].bus)) -=
        schedule.power(static_cast<Eigen::Index>(u), slot);
  return d;
}

}  // namespace bach
