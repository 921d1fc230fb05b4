#include "bach/config.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "bach/errors.hpp"
#include "csv.hpp"

namespace bach {

namespace {

bool to_bool(const std::string& s, const std::string& where) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw ParseError(where + ": expected a boolean, got '" + s + "'");
}

std::vector<std::string> list(const std::string& s) {
  std::vector<std::string> out;
  for (auto& item : csv::split(s))
    if (!item.empty()) out.push_back(item);
  return out;
}

using Setter = std::function<void(const std::string&, const std::string&)>;

std::map<std::string, Setter> bess_keys(BessParams& b) {
  auto num = [](double& field) {
    return [&field](const std::string& v, const std::string& where) {
      field = csv::to_double(v, where);
    };
  };
  return {
      {"bus", [&b](const std::string& v, const std::string& w) { b.bus = csv::to_int(v, w); }},
      {"capacity_kwh", num(b.capacity)},
      {"p_max_kw", num(b.p_max)},
      {"eta_charge", num(b.eta_charge)},
      {"eta_discharge", num(b.eta_discharge)},
      {"soc_min", num(b.soc_min)},
      {"soc_max", num(b.soc_max)},
      {"soc_init", num(b.soc_init)},
      {"invest_cost", num(b.invest_cost)},
      {"discount_rate", num(b.discount_rate)},
      {"ref_cycle_life", num(b.ref_cycle_life)},
      {"dod_exponent", num(b.dod_exponent)},
      {"calendar_life_cap", num(b.calendar_life_cap)},
  };
}

}  // namespace

ScenarioConfig parse_config(std::istream& in, const std::filesystem::path& base_dir,
                            const std::string& source) {
  ScenarioConfig cfg;
  auto path_of = [&](const std::string& v) {
    std::filesystem::path p(v);
    return p.is_absolute() ? p : base_dir / p;
  };

  std::map<std::string, Setter> scenario{
      {"network", [&](auto& v, auto&) { cfg.network_path = path_of(v); }},
      {"profiles", [&](auto& v, auto&) { cfg.profiles_path = path_of(v); }},
      {"horizon", [&](auto& v, auto& w) { cfg.horizon = csv::to_int(v, w); }},
      {"dt_hours", [&](auto& v, auto& w) { cfg.dt = csv::to_double(v, w); }},
      {"lambda1", [&](auto& v, auto& w) { cfg.weights.lambda1 = csv::to_double(v, w); }},
      {"lambda2", [&](auto& v, auto& w) { cfg.weights.lambda2 = csv::to_double(v, w); }},
      {"pareto_points", [&](auto& v, auto& w) { cfg.n_pareto_points = csv::to_int(v, w); }},
      {"output_dir", [&](auto& v, auto&) { cfg.output_dir = path_of(v); }},
      {"export_revenue", [&](auto& v, auto& w) { cfg.options.export_revenue = to_bool(v, w); }},
      {"enforce_terminal_soc",
       [&](auto& v, auto& w) { cfg.options.enforce_terminal_soc = to_bool(v, w); }},
      {"noise_floor", [&](auto& v, auto& w) { cfg.options.noise_floor = csv::to_double(v, w); }},
      {"efficiency_model",
       [&](auto& v, auto& w) {
         if (v == "published")
           cfg.options.efficiency = EfficiencyModel::AsPublished;
         else if (v == "physical")
           cfg.options.efficiency = EfficiencyModel::Physical;
         else
           throw ParseError(w + ": efficiency_model must be 'published' or 'physical'");
       }},
      {"flow_tolerance",
       [&](auto& v, auto& w) { cfg.options.flow.tolerance = csv::to_double(v, w); }},
      {"flow_max_iterations",
       [&](auto& v, auto& w) { cfg.options.flow.max_iterations = csv::to_int(v, w); }},
  };
  std::map<std::string, Setter> devices{
      {"pv",
       [&](auto& v, auto& w) {
         for (const auto& item : list(v)) {
           const auto colon = item.find(':');
           if (colon == std::string::npos) throw ParseError(w + ": pv entries are bus:capacity_kw");
           cfg.fleet.pv_units.push_back({csv::to_int(item.substr(0, colon), w),
                                         csv::to_double(item.substr(colon + 1), w)});
         }
       }},
      {"ev_level1",
       [&](auto& v, auto& w) {
         for (const auto& item : list(v)) cfg.fleet.ev_stations.push_back({csv::to_int(item, w), 1});
       }},
      {"ev_level2",
       [&](auto& v, auto& w) {
         for (const auto& item : list(v)) cfg.fleet.ev_stations.push_back({csv::to_int(item, w), 2});
       }},
  };
  std::map<std::string, Setter> solver{
      {"population", [&](auto& v, auto& w) { cfg.solver.population = csv::to_int(v, w); }},
      {"max_evals", [&](auto& v, auto& w) { cfg.solver.max_evals = csv::to_int(v, w); }},
      {"seed",
       [&](auto& v, auto& w) { cfg.solver.seed = static_cast<std::uint64_t>(csv::to_int(v, w)); }},
      {"penalty_weight",
       [&](auto& v, auto& w) { cfg.solver.penalty_weight = csv::to_double(v, w); }},
      {"penalty_growth",
       [&](auto& v, auto& w) { cfg.solver.penalty_growth = csv::to_double(v, w); }},
      {"tolerance", [&](auto& v, auto& w) { cfg.solver.tolerance = csv::to_double(v, w); }},
      {"noise_band", [&](auto& v, auto& w) { cfg.solver.noise_band = csv::to_double(v, w); }},
  };

  std::string section;
  std::map<std::string, Setter> bess;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no);
    const auto body = csv::trim(raw);
    if (body.empty() || body.front() == '#' || body.front() == ';') continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ParseError(where + ": malformed section header");
      section = std::string(csv::trim(body.substr(1, body.size() - 2)));
      if (section == "bess") {
        cfg.fleet.bess_units.emplace_back();
        bess = bess_keys(cfg.fleet.bess_units.back());
      } else if (section != "scenario" && section != "devices" && section != "solver") {
        throw ParseError(where + ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError(where + ": expected key = value");
    const std::string key(csv::trim(body.substr(0, eq)));
    const std::string value(csv::trim(body.substr(eq + 1)));
    std::map<std::string, Setter>* table = nullptr;
    if (section == "scenario") table = &scenario;
    if (section == "devices") table = &devices;
    if (section == "solver") table = &solver;
    if (section == "bess") table = &bess;
    if (!table) throw ParseError(where + ": key outside of a section");
    auto it = table->find(key);
    if (it == table->end())
      throw ParseError(where + ": unknown key '" + key + "' in [" + section + "]");
    it->second(value, where);
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path.string());
  return parse_config(in, path.parent_path(), path.string());
}

void ScenarioConfig::validate() const {
  if (!(weights.lambda1 >= 0) || !(weights.lambda2 >= 0))
    throw ValidationError("lambda1 and lambda2 must be >= 0");
  if (!std::filesystem::exists(network_path))
    throw ValidationError("network file not found: " + network_path.string());
  if (!std::filesystem::exists(profiles_path))
    throw ValidationError("profile file not found: " + profiles_path.string());
  if (horizon <= 0) throw ValidationError("horizon must be positive");
  if (n_pareto_points < 2) throw ValidationError("pareto_points must be >= 2");
  solver.validate();
}

Scenario build_scenario(const ScenarioConfig& config) {
  config.validate();
  Scenario sc{load_network(config.network_path), config.fleet,
              load_profiles(config.profiles_path, config.horizon, config.dt), config.options};
  sc.validate();
  return sc;
}

}  // namespace bach
