#include <algorithm>
#include <random>

#include "doctest.h"

#include "../oracles/dominance.hpp"
#include "../support/toy.hpp"
#include "bach/config.hpp"
#include "bach/pareto.hpp"

using namespace bach;

namespace {

Eigen::MatrixX2d rows(std::initializer_list<std::pair<double, double>> pts) {
  Eigen::MatrixX2d m(static_cast<Eigen::Index>(pts.size()), 2);
  Eigen::Index k = 0;
  for (const auto& [a, b] : pts) {
    m(k, 0) = a;
    m(k, 1) = b;
    ++k;
  }
  return m;
}

SolverConfig quick() {
  SolverConfig c;
  c.seed = 13;
  c.max_evals = 4000;
  c.threads = 1;
  return c;
}

const ParetoFront& toy_front() {
  static const ParetoFront f = epsilon_sweep(testing_support::toy_scenario(), {}, 5, quick());
  return f;
}

}  // namespace

TEST_SUITE("pareto") {

TEST_CASE("fuzzy membership") {
  CHECK(fuzzy_membership(1.0, 1.0, 3.0) == 1.0);
  CHECK(fuzzy_membership(3.0, 1.0, 3.0) == 0.0);
  CHECK(fuzzy_membership(2.0, 1.0, 3.0) == 0.5);
  CHECK(fuzzy_membership(0.0, 1.0, 3.0) == 1.0);
  CHECK(fuzzy_membership(5.0, 1.0, 3.0) == 0.0);
  CHECK(fuzzy_membership(7.0, 2.0, 2.0) == 1.0);
  CHECK(fuzzy_membership(2.5f, 2.0f, 3.0f) == 0.5f);
}

TEST_CASE("dominance filter examples") {
  CHECK(dominance_filter(rows({{1, 2}, {2, 1}})).size() == 2);
  const auto one = dominance_filter(rows({{1, 1}, {2, 2}}));
  REQUIRE(one.size() == 1);
  CHECK(one[0] == 0);
  // Weak dominance (equal in one objective) also removes the point.
  CHECK(dominance_filter(rows({{1, 1}, {1, 2}})).size() == 1);
  const auto dup = dominance_filter(rows({{1, 3}, {2, 2}, {1, 3}}));
  CHECK(dup.size() == 2);
  // Output ordered by F2.
  const auto ordered = dominance_filter(rows({{1, 5}, {3, 1}, {2, 2}}));
  REQUIRE(ordered.size() == 3);
  CHECK(ordered == std::vector<Eigen::Index>{1, 2, 0});
}

TEST_CASE("dominance filter matches the quadratic oracle on random clouds") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixX2d m(100, 2);
    std::vector<oracle::Point2> pts;
    for (Eigen::Index k = 0; k < 100; ++k) {
      m(k, 0) = u(rng);
      m(k, 1) = trial % 2 ? 1.0 - m(k, 0) + 0.3 * u(rng) : u(rng);
      pts.push_back({m(k, 0), m(k, 1)});
    }
    auto ours = dominance_filter(m);
    const auto ref = oracle::non_dominated(pts);
    std::vector<std::size_t> got(ours.begin(), ours.end());
    std::sort(got.begin(), got.end());
    CHECK(got == ref);
  }
}

TEST_CASE("compromise selection") {
  const Compromise single = select_compromise(rows({{4, 5}}));
  CHECK(single.index == 0);
  CHECK(single.normalized(0) == 1.0);

  // Memberships (1, 0) and (0, 1): a tie, resolved toward the lower F1.
  const Compromise tie = select_compromise(rows({{3, 1}, {1, 3}}));
  CHECK(tie.membership(1, 0) == 1.0);
  CHECK(tie.membership(0, 1) == 1.0);
  CHECK(tie.index == 1);

  Eigen::MatrixX2d mu(3, 2);
  mu << 0.6, 0.6, 0.5, 1.0, 0.9, 0.0;
  Eigen::VectorXd f1(3);
  f1 << 2.0, 3.0, 1.0;
  const Compromise three = compromise_from_memberships(mu, f1);
  CHECK(three.index == 1);
  CHECK(three.normalized(1) == doctest::Approx(1.5 / 3.6).epsilon(1e-14));
  CHECK(three.normalized.sum() == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(select_compromise(Eigen::MatrixX2d(0, 2)), std::invalid_argument);
}

TEST_CASE("normalization and affine invariance") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixX2d m(12, 2);
    for (Eigen::Index k = 0; k < 12; ++k) {
      m(k, 0) = 1000.0 + 300.0 * u(rng);
      m(k, 1) = 50.0 * u(rng);
    }
    const Compromise c = select_compromise(m);
    CHECK(std::abs(c.normalized.sum() - 1.0) <= 1e-9);
    for (Eigen::Index col : {0, 1}) {
      Eigen::MatrixX2d scaled = m;
      scaled.col(col) = (scaled.col(col).array() * 3.7 + 250.0).matrix();
      const Compromise s = select_compromise(scaled);
      CHECK(s.index == c.index);
      CHECK((s.membership - c.membership).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("toy sweep points are non-dominated and near the enumerated front") {
  const ParetoFront& f = toy_front();
  REQUIRE(f.points.size() >= 2);
  REQUIRE(f.points.size() <= 5);
  std::vector<oracle::Point2> pts;
  for (const auto& p : f.points) pts.push_back({p.objectives.f1, p.objectives.f2});
  CHECK(oracle::non_dominated(pts).size() == pts.size());
  for (std::size_t k = 1; k < f.points.size(); ++k) {
    CHECK(f.points[k].objectives.f2 > f.points[k - 1].objectives.f2);
    CHECK(f.points[k].objectives.f1 < f.points[k - 1].objectives.f1);
  }

  // No enumerated schedule beats a swept point by more than 2% in both objectives.
  const auto all = testing_support::enumerate_toy(testing_support::toy_scenario());
  for (const auto& p : f.points) {
    for (const auto& e : all) {
      if (!e.objectives.feasible) continue;
      const bool better_f1 = e.objectives.f1 < p.objectives.f1 - 0.02 * std::abs(p.objectives.f1);
      const bool better_f2 = e.objectives.f2 < p.objectives.f2 - 0.02 * std::abs(p.objectives.f2);
      CHECK_FALSE((better_f1 && better_f2));
    }
  }
}

TEST_CASE("front bookkeeping") {
  const ParetoFront& f = toy_front();
  double total = 0.0;
  for (const auto& p : f.points) {
    total += p.normalized;
    CHECK(p.membership.minCoeff() >= 0.0);
    CHECK(p.membership.maxCoeff() <= 1.0);
    CHECK(p.objectives.f1 >= f.payoff.f1_min);
    CHECK(p.objectives.f1 <= f.payoff.f1_max);
    CHECK(p.objectives.f2 >= f.payoff.f2_min);
    CHECK(p.objectives.f2 <= f.payoff.f2_max);
  }
  CHECK(std::abs(total - 1.0) <= 1e-9);
  // Anchors: the lowest-F2 point has mu(F2) = 1 and the lowest-F1 point mu(F1) = 1.
  CHECK(f.points.front().membership(1) == 1.0);
  CHECK(f.points.back().membership(0) == 1.0);
  CHECK(f.selected < f.points.size());
  const Compromise c = select_compromise(f.objective_matrix());
  CHECK(c.index == static_cast<Eigen::Index>(f.selected));
}

TEST_CASE("two-point sweep holds at most the anchors") {
  const Scenario sc = testing_support::toy_scenario();
  const Anchors a = payoff_table(sc, {}, quick());
  const ParetoFront f = epsilon_sweep(sc, {}, 2, quick(), &a);
  REQUIRE(f.points.size() <= 2);
  REQUIRE_FALSE(f.points.empty());
  CHECK(f.points.front().epsilon == doctest::Approx(a.epsilon_low()));
  CHECK(f.points.front().objectives.f2 == doctest::Approx(a.f2_optimal.objectives.f2).epsilon(1e-6));
  CHECK(f.points.back().objectives.f1 <= a.f1_optimal.objectives.f1 * (1.0 + 1e-9));
  CHECK_THROWS_AS(epsilon_sweep(sc, {}, 1, quick(), &a), std::invalid_argument);
}

TEST_CASE("idle scenario anchors coincide") {
  const Scenario sc = build_scenario(load_config(testing_support::data_dir() / "noload.ini"));
  SolverConfig cfg = quick();
  cfg.max_evals = 3000;
  const Anchors a = payoff_table(sc, {}, cfg);
  CHECK(a.f1_optimal.schedule.power.isZero());
  CHECK(a.f2_optimal.schedule.power.cwiseAbs().maxCoeff() < 10.0);
  CHECK(a.epsilon_low() <= a.epsilon_high());
  CHECK(a.epsilon_high() == 0.0);
}

}
