#include "bach/pareto.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace bach {

Eigen::MatrixX2d memberships(const Eigen::Ref<const Eigen::MatrixX2d>& objectives) {
  Eigen::MatrixX2d mu(objectives.rows(), 2);
  if (objectives.rows() == 0) return mu;
  for (Eigen::Index c = 0; c < 2; ++c) {
    const double lo = objectives.col(c).minCoeff();
    const double hi = objectives.col(c).maxCoeff();
    for (Eigen::Index k = 0; k < objectives.rows(); ++k)
      mu(k, c) = fuzzy_membership(objectives(k, c), lo, hi);
  }
  return mu;
}

std::vector<Eigen::Index> dominance_filter(const Eigen::Ref<const Eigen::MatrixX2d>& objectives) {
  const Eigen::Index n = objectives.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (objectives(a, 1) != objectives(b, 1)) return objectives(a, 1) < objectives(b, 1);
    return objectives(a, 0) < objectives(b, 0);
  });
  // Sweep by increasing F2: a point survives iff its F1 is strictly below
  // every F1 seen so far.
  std::vector<Eigen::Index> kept;
  double best_f1 = std::numeric_limits<double>::infinity();
  for (const auto i : order) {
    if (objectives(i, 0) < best_f1) {
      kept.push_back(i);
      best_f1 = objectives(i, 0);
    }
  }
  return kept;
}

Compromise compromise_from_memberships(const Eigen::Ref<const Eigen::MatrixX2d>& membership,
                                       const Eigen::Ref<const Eigen::VectorXd>& f1) {
  if (membership.rows() == 0) throw std::invalid_argument("select_compromise: empty front");
  if (f1.size() != membership.rows())
    throw std::invalid_argument("select_compromise: membership and F1 sizes differ");
  Compromise c;
  c.membership = membership;
  const Eigen::VectorXd sums = membership.rowwise().sum();
  const double total = sums.sum();
  c.normalized = total > 0 ? Eigen::VectorXd(sums / total)
                           : Eigen::VectorXd::Constant(sums.size(), 1.0 / sums.size());
  c.index = 0;
  for (Eigen::Index k = 1; k < membership.rows(); ++k) {
    const double a = c.normalized(k);
    const double b = c.normalized(c.index);
    const bool tie = std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
    if ((!tie && a > b) || (tie && f1(k) < f1(c.index))) c.index = k;
  }
  return c;
}

Compromise select_compromise(const Eigen::Ref<const Eigen::MatrixX2d>& objectives) {
  if (objectives.rows() == 0) throw std::invalid_argument("select_compromise: empty front");
  return compromise_from_memberships(memberships(objectives), objectives.col(0));
}

Eigen::MatrixX2d ParetoFront::objective_matrix() const {
  Eigen::MatrixX2d m(static_cast<Eigen::Index>(points.size()), 2);
  for (std::size_t k = 0; k < points.size(); ++k) {
    m(static_cast<Eigen::Index>(k), 0) = points[k].objectives.f1;
    m(static_cast<Eigen::Index>(k), 1) = points[k].objectives.f2;
  }
  return m;
}

ParetoFront build_front(std::vector<ParetoPoint> raw) {
  ParetoFront front;
  if (raw.empty()) return front;
  Eigen::MatrixX2d obj(static_cast<Eigen::Index>(raw.size()), 2);
  for (std::size_t k = 0; k < raw.size(); ++k) {
    obj(static_cast<Eigen::Index>(k), 0) = raw[k].objectives.f1;
    obj(static_cast<Eigen::Index>(k), 1) = raw[k].objectives.f2;
  }
  for (const auto i : dominance_filter(obj)) front.points.push_back(std::move(raw[i]));

  const Eigen::MatrixX2d kept = front.objective_matrix();
  front.payoff = {kept.col(0).minCoeff(), kept.col(0).maxCoeff(), kept.col(1).minCoeff(),
                  kept.col(1).maxCoeff()};
  const Compromise c = select_compromise(kept);
  for (std::size_t k = 0; k < front.points.size(); ++k) {
    front.points[k].membership = c.membership.row(static_cast<Eigen::Index>(k)).transpose();
    front.points[k].normalized = c.normalized(static_cast<Eigen::Index>(k));
  }
  front.selected = static_cast<std::size_t>(c.index);
  return front;
}

Anchors payoff_table(const Scenario& scenario, const Weights& weights, const SolverConfig& config) {
  Anchors a{solve_single(scenario, Target::F1, std::nullopt, weights, config),
            solve_single(scenario, Target::F2, std::nullopt, weights, config)};
  return a;
}

ParetoFront epsilon_sweep(const Scenario& scenario, const Weights& weights, int n_points,
                          const SolverConfig& config, const Anchors* anchors) {
  if (n_points < 2) throw std::invalid_argument("epsilon_sweep: need at least 2 points");
  Anchors computed;
  if (!anchors) {
    computed = payoff_table(scenario, weights, config);
    anchors = &computed;
  }
  const double lo = anchors->epsilon_low();
  const double hi = std::max(lo, anchors->epsilon_high());

  std::vector<ParetoPoint> raw;
  std::vector<std::string> failures;
  std::vector<Schedule> warm{anchors->f2_optimal.schedule, anchors->f1_optimal.schedule};
  for (int k = 0; k < n_points; ++k) {
    const double eps = k == n_points - 1 ? hi : lo + (hi - lo) * k / (n_points - 1);
    SolverConfig cfg = config;
    cfg.seed = config.seed + static_cast<std::uint64_t>(k);
    SolveResult r = solve_single(scenario, Target::F1, eps, weights, cfg, warm);
    if (!r.objectives.feasible) {
      failures.push_back("epsilon " + std::to_string(eps) + ": no feasible schedule (violation " +
                         std::to_string(r.objectives.violation) + ")");
      continue;
    }
    if (warm.size() > 2) warm.pop_back();
    warm.push_back(r.schedule);
    raw.push_back(ParetoPoint{eps, std::move(r.schedule), std::move(r.objectives), {}, 0.0});
  }
  if (raw.size() < 2)
    throw std::runtime_error("epsilon_sweep: fewer than two feasible epsilon solves");
  ParetoFront front = build_front(std::move(raw));
  front.failures = std::move(failures);
  return front;
}

}  // namespace bach
