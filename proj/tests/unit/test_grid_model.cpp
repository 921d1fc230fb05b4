#include <random>
#include <sstream>

#include "doctest.h"

#include "../support/toy.hpp"
#include "bach/errors.hpp"
#include "bach/grid_model.hpp"

using namespace bach;
using testing_support::data_dir;

namespace {

NetworkModel parse(const std::string& text) {
  std::istringstream in(text);
  return parse_network(in, "test");
}

ScenarioProfiles profiles_from(const std::string& text, Eigen::Index horizon) {
  std::istringstream in(text);
  return parse_profiles(in, horizon, 1.0, "test");
}

}  // namespace

TEST_SUITE("grid_model") {

TEST_CASE("bundled 33-bus feeder") {
  const NetworkModel net = load_network(data_dir() / "ieee33_network.csv");
  CHECK(net.size() == 33);
  CHECK(net.lines().size() == 32);
  CHECK(net.buses()[net.slack()].id == 1);
  CHECK(net.base_voltage() == 12.66);
  CHECK(net.base_power() == 10.0);
  double p = 0.0;
  double q = 0.0;
  for (const Bus& b : net.buses()) {
    p += b.base_active_load;
    q += b.base_reactive_load;
  }
  CHECK(p == doctest::Approx(3715.0));
  CHECK(q == doctest::Approx(2300.0));
  CHECK(net.buses()[net.slack()].s_max == 10000.0);
  CHECK(net.buses()[net.index_of(18)].s_max == 1000.0);
  CHECK(net.buses()[net.index_of(7)].customer_class == CustomerClass::Commercial);
  CHECK(net.buses()[net.index_of(20)].customer_class == CustomerClass::Industrial);
  CHECK(net.buses()[net.index_of(18)].load_exponent == 1.2);
}

TEST_CASE("two-bus network") {
  const NetworkModel net = parse("base,1,1\nbus,1,0,0,slack\nbus,2,100,0,residential\nline,1,2,0.05,0\n");
  CHECK(net.size() == 2);
  CHECK(net.parent()[1] == 0);
  CHECK(net.feeder_line()[1] == 0);
  CHECK(net.base_impedance() == 1.0);
}

TEST_CASE("topology and parse errors") {
  const std::string head = "base,12.66,10\nbus,1,0,0,slack\n";
  CHECK_THROWS_AS(parse(head + "bus,5,10,5,residential\nline,5,5,0.1,0.1\n"), TopologyError);
  CHECK_THROWS_AS(parse(head + "bus,2,10,5,residential\nbus,3,10,5,residential\nline,1,2,1,1\n"),
                  TopologyError);
  CHECK_THROWS_AS(parse(head +
                        "bus,2,1,1,residential\nbus,3,1,1,residential\nbus,4,1,1,residential\n"
                        "line,1,2,1,1\nline,2,3,1,1\nline,3,2,1,1\n"),
                  TopologyError);
  CHECK_THROWS_AS(parse(head + "bus,2,10,5,residential\nline,1,9,1,1\n"), TopologyError);
  CHECK_THROWS_AS(parse("base,12.66,10\nbus,1,0,0,residential\nbus,2,1,1,residential\nline,1,2,1,1\n"),
                  TopologyError);
  CHECK_THROWS_AS(parse(head + "bus,2,10,5,residential,0.95,0.94\nline,1,2,1,1\n"), ValidationError);
  CHECK_THROWS_AS(parse(head + "bus,2,abc,5,residential\nline,1,2,1,1\n"), ParseError);
  CHECK_THROWS_AS(parse(head + "bus,2,10,5,farm\nline,1,2,1,1\n"), ParseError);
  CHECK_THROWS_AS(parse(head + "node,2\n"), ParseError);
  CHECK_THROWS_AS(parse(head + "bus,1,10,5,residential\nline,1,2,1,1\n"), ParseError);
  CHECK_THROWS_AS(load_network(data_dir() / "missing.csv"), ParseError);
}

TEST_CASE("radiality holds for every accepted random tree") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 15;
    std::vector<Bus> buses(static_cast<std::size_t>(n));
    std::vector<Line> lines;
    for (int i = 0; i < n; ++i) {
      buses[static_cast<std::size_t>(i)].id = 100 + i;
      buses[static_cast<std::size_t>(i)].base_active_load = 10.0;
    }
    buses[0].kind = BusKind::Slack;
    for (int i = 1; i < n; ++i) {
      std::uniform_int_distribution<int> up(0, i - 1);
      lines.push_back({100 + up(rng), 100 + i, 0.1, 0.05});
    }
    const NetworkModel net(buses, lines, 12.66, 10);
    CHECK(net.lines().size() == static_cast<std::size_t>(net.size() - 1));
    CHECK(net.order().size() == static_cast<std::size_t>(net.size()));
    // An extra chord always breaks radiality.
    if (n >= 3) {
      auto extra = lines;
      extra.push_back({100 + n - 1, 100, 0.1, 0.1});
      CHECK_THROWS_AS(NetworkModel(buses, extra, 12.66, 10), TopologyError);
    }
  }
}

TEST_CASE("write then load reproduces the model") {
  for (const char* file : {"ieee33_network.csv", "ieee33_constant_power.csv"}) {
    const NetworkModel net = load_network(data_dir() / file);
    std::stringstream buf;
    write_network(net, buf);
    const NetworkModel back = parse_network(buf, "roundtrip");
    CHECK(back == net);
  }
  NetworkModel rated = parse("base,0.4,1\nbus,1,0,0,slack\nbus,2,12.5,3.25,industrial,0.92,1.04,"
                             "750,0.18,1\nline,1,2,0.0123456789,0.00987654321,400\n");
  std::stringstream buf;
  write_network(rated, buf);
  const NetworkModel back = parse_network(buf);
  CHECK(back == rated);
  CHECK(back.lines()[0].s_max == 400.0);
}

TEST_CASE("profiles") {
  const auto p = load_profiles(data_dir() / "ieee33_profiles.csv", 24);
  CHECK(p.horizon == 24);
  CHECK(p.dt == 1.0);
  CHECK(p.days() == 1.0);
  CHECK(p.price.size() == 24);
  CHECK_NOTHROW(p.validate());

  std::string rows = "price\n";
  for (int i = 0; i < 23; ++i) rows += "0.05\n";
  CHECK_THROWS_AS(profiles_from(rows, 24), ValidationError);
  CHECK_THROWS_AS(profiles_from("price,pv_fraction\n0.1,1.2\n", 1), ValidationError);
  CHECK_THROWS_AS(profiles_from("price\n-0.1\n", 1), ValidationError);
  CHECK_THROWS_AS(profiles_from("price,wind\n0.1,1\n", 1), ParseError);
  CHECK_THROWS_AS(profiles_from("pv_fraction\n0.1\n", 1), ParseError);

  const auto q = profiles_from("slot,price,ev_level2_kw\n0,0.1,40\n1,0.2,50\n", 2);
  CHECK(q.pv_fraction.isZero());
  CHECK(q.load_multiplier.isZero());
  CHECK(q.ev_load(1, 1) == 50.0);
  CHECK(q.ev_load(1, 0) == 0.0);
}

TEST_CASE("nodal injections") {
  const NetworkModel net = parse(
      "base,12.66,10\nbus,1,0,0,slack\nbus,2,60,20,residential\nbus,3,0,0,residential\n"
      "bus,4,80,30,commercial\nline,1,2,1,1\nline,2,3,1,1\nline,2,4,1,1\n");
  ScenarioProfiles prof = testing_support::flat_profiles(1, Eigen::VectorXd::Constant(1, 0.1));
  prof.pv_fraction(0) = 0.5;
  prof.ev_load(0, 1) = 7.0;
  prof.load_multiplier(0, 1) = 0.5;
  DeviceFleet fleet;
  fleet.pv_units.push_back({3, 500.0});
  fleet.ev_stations.push_back({4, 2});
  BessParams b;
  b.bus = 2;
  fleet.bess_units.push_back(b);
  CHECK_NOTHROW(fleet.validate(net));

  Schedule s = Schedule::zeros(1, 1);
  s.power(0, 0) = -100.0;  // charging
  const NodalDemand d = nodal_injections(net, fleet, prof, s, 0);
  CHECK(d.net_p()(0) == 0.0);
  CHECK(d.net_p()(1) == doctest::Approx(160.0));
  CHECK(d.net_p()(2) == doctest::Approx(-250.0));
  CHECK(d.net_p()(3) == doctest::Approx(40.0 + 7.0));
  CHECK(d.net_q()(3) == doctest::Approx(15.0));

  fleet.pv_units.push_back({9, 10.0});
  CHECK_THROWS_AS(fleet.validate(net), ValidationError);
}

TEST_CASE("injections are additive in the schedule") {
  const NetworkModel net = load_network(data_dir() / "ieee33_network.csv");
  const auto prof = load_profiles(data_dir() / "ieee33_profiles.csv", 24);
  DeviceFleet fleet;
  fleet.pv_units.push_back({9, 500});
  fleet.ev_stations.push_back({19, 2});
  for (int bus : {18, 33}) {
    BessParams b;
    b.bus = bus;
    fleet.bess_units.push_back(b);
  }
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> p(-250, 250);
  const Schedule zero = Schedule::zeros(2, 24);
  for (int trial = 0; trial < 20; ++trial) {
    Schedule a = zero;
    Schedule b = zero;
    for (Eigen::Index i = 0; i < a.power.size(); ++i) {
      a.power(i) = p(rng);
      b.power(i) = p(rng);
    }
    const Eigen::Index t = trial % 24;
    const auto da = nodal_injections(net, fleet, prof, a, t);
    const auto db = nodal_injections(net, fleet, prof, b, t);
    const auto dab = nodal_injections(net, fleet, prof, a + b, t);
    const auto d0 = nodal_injections(net, fleet, prof, zero, t);
    // BESS terms are linear; the exogenous part appears once.
    const Eigen::VectorXd lhs = dab.net_p() - d0.net_p();
    const Eigen::VectorXd rhs = (da.net_p() - d0.net_p()) + (db.net_p() - d0.net_p());
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(dab.net_q() == d0.net_q());
  }
}

}
