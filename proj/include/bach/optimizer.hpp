#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bach/objectives.hpp"

namespace bach {

enum class Target { F1, F2 };

struct SolverConfig {
  int population = 32;
  int max_evals = 20000;
  std::uint64_t seed = 1;
  /// Initial penalty per unit of normalized violation, relative to the
  /// objective scale of the idle schedule.
  double penalty_weight = 1000.0;
  /// Factor applied to the penalty after a generation whose best member is
  /// infeasible.
  double penalty_growth = 2.0;
  /// Stop when the population's fitness spread falls below this fraction.
  double tolerance = 1e-9;
  /// Declared relative noise of returned optima, used when comparing solves.
  double noise_band = 0.005;
  /// Evaluation threads; 0 = BACH_THREADS or hardware concurrency.
  int threads = 0;

  void validate() const;
};

/// Bounded box-constrained problem handed to a search strategy.
struct SearchProblem {
  struct Outcome {
    double objective;
    double violation;
  };
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::function<Outcome(const Eigen::VectorXd&)> evaluate;
  /// Objective magnitude used to scale the penalty.
  double objective_scale = 1.0;
};

struct SearchResult {
  Eigen::VectorXd best;
  SearchProblem::Outcome outcome{0.0, 0.0};
  int evaluations = 0;
};

class SearchStrategy {
 public:
  virtual ~SearchStrategy() = default;
  virtual SearchResult minimize(const SearchProblem& problem, std::span<const Eigen::VectorXd> seeds,
                                const SolverConfig& config) const = 0;
};

/// current-to-pbest/1/bin differential evolution with an adaptive exterior
/// penalty, followed by a shrinking compass search on the incumbent with the
/// remaining budget. Candidate evaluations within one generation run in
/// parallel; every random draw comes from a stream keyed by
/// (seed, generation, index), so results do not depend on the thread count.
class DifferentialEvolution final : public SearchStrategy {
 public:
  SearchResult minimize(const SearchProblem& problem, std::span<const Eigen::VectorXd> seeds,
                        const SolverConfig& config) const override;
};

struct SolveResult {
  Schedule schedule;
  ObjectiveValues objectives;
  int evaluations = 0;
};

/// Minimizes F1 or F2 over signed BESS schedules. With `epsilon` set (and
/// target F1) the cap F2 <= epsilon joins the penalized constraints. The
/// initial population holds the idle schedule, a greedy price-arbitrage
/// schedule, any `warm_starts`, and random perturbations of those.
SolveResult solve_single(const Scenario& scenario, Target target, std::optional<double> epsilon,
                         const Weights& weights, const SolverConfig& config,
                         std::span<const Schedule> warm_starts = {},
                         const SearchStrategy& strategy = DifferentialEvolution{});

/// Itemized constraint check of an arbitrary schedule.
ViolationReport feasibility(const Scenario& scenario, const Schedule& schedule);

/// Charges at the cheapest slots and discharges at the most expensive ones,
/// halving the power until the SoC band (and terminal SoC, when enforced)
/// holds.
Schedule greedy_arbitrage(const Scenario& scenario);

/// Projects a schedule towards the SoC-feasible set: clips power to the
/// rating, trims the slot that would cross a SoC bound so the bound is met
/// exactly, and scales discharge down to restore the terminal SoC when it is
/// enforced. Schedules that already satisfy those constraints are returned
/// unchanged. The search decodes every candidate through this map.
Schedule repair_schedule(const Scenario& scenario, Schedule schedule);

}  // namespace bach
