#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bach/optimizer.hpp"

namespace bach {

/// Linear membership: 1 at or below f_min, 0 at or above f_max. A degenerate
/// range (f_min == f_max) maps everything to 1.
template <typename Scalar>
Scalar fuzzy_membership(Scalar f, Scalar f_min, Scalar f_max) {
  if (f_max <= f_min) return Scalar(1);
  if (f <= f_min) return Scalar(1);
  if (f >= f_max) return Scalar(0);
  return (f_max - f) / (f_max - f_min);
}

/// Column-wise memberships of an n x 2 objective matrix, each column scaled
/// between its own minimum and maximum.
Eigen::MatrixX2d memberships(const Eigen::Ref<const Eigen::MatrixX2d>& objectives);

/// Row indices of the points not dominated in (F1, F2), ordered by F2 then
/// F1. Exact duplicates are kept once (first occurrence).
std::vector<Eigen::Index> dominance_filter(const Eigen::Ref<const Eigen::MatrixX2d>& objectives);

struct Compromise {
  Eigen::Index index = 0;
  Eigen::MatrixX2d membership;
  Eigen::VectorXd normalized;  // sums to 1
};

/// Normalized aggregate membership per point and its argmax; ties go to the
/// lower F1. Throws std::invalid_argument on an empty matrix.
Compromise select_compromise(const Eigen::Ref<const Eigen::MatrixX2d>& objectives);

/// Same selection from precomputed memberships; `f1` breaks ties.
Compromise compromise_from_memberships(const Eigen::Ref<const Eigen::MatrixX2d>& membership,
                                       const Eigen::Ref<const Eigen::VectorXd>& f1);

struct ParetoPoint {
  double epsilon = 0.0;
  Schedule schedule;
  ObjectiveValues objectives;
  Eigen::Vector2d membership = Eigen::Vector2d::Zero();
  double normalized = 0.0;
};

struct Payoff {
  double f1_min = 0.0;
  double f1_max = 0.0;
  double f2_min = 0.0;
  double f2_max = 0.0;
};

struct ParetoFront {
  std::vector<ParetoPoint> points;  // ordered by F2
  Payoff payoff;
  std::size_t selected = 0;
  /// Diagnostic per epsilon solve that was skipped.
  std::vector<std::string> failures;

  Eigen::MatrixX2d objective_matrix() const;
};

struct Anchors {
  SolveResult f1_optimal;  // minimum cost
  SolveResult f2_optimal;  // best network performance
  /// Range swept by epsilon: F2 at the F2 optimum up to F2 at the F1 optimum.
  double epsilon_low() const { return f2_optimal.objectives.f2; }
  double epsilon_high() const { return f1_optimal.objectives.f2; }
};

/// The two single-objective anchor solves.
Anchors payoff_table(const Scenario& scenario, const Weights& weights, const SolverConfig& config);

/// Epsilon-constraint sweep over a uniform grid of `n_points` caps spanning
/// the anchors' F2 range. Caps are solved from tightest to loosest and each
/// solve is warm-started with the previous optimum, which is feasible for the
/// looser cap. Solve seeds are base seed + grid index.
ParetoFront epsilon_sweep(const Scenario& scenario, const Weights& weights, int n_points,
                          const SolverConfig& config, const Anchors* anchors = nullptr);

/// Dominance-filters raw points, orders them by F2, fills payoff bounds,
/// memberships and the normalized scores, and selects the compromise.
ParetoFront build_front(std::vector<ParetoPoint> raw);

}  // namespace bach
