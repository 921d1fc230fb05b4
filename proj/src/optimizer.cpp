#include "bach/optimizer.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "bach/errors.hpp"
#include "bach/parallel.hpp"

namespace bach {

void SolverConfig::validate() const {
  if (population < 4) throw ValidationError("solver population must be >= 4");
  if (!(penalty_weight > 0)) throw ValidationError("solver penalty_weight must be > 0");
  if (!(penalty_growth >= 1)) throw ValidationError("solver penalty_growth must be >= 1");
  if (max_evals < population) throw ValidationError("solver max_evals must be >= population");
  if (!(tolerance >= 0)) throw ValidationError("solver tolerance must be >= 0");
  if (!(noise_band >= 0)) throw ValidationError("solver noise_band must be >= 0");
}

namespace {

using Outcome = SearchProblem::Outcome;

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t phase, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(phase), static_cast<std::uint32_t>(phase >> 32),
                    static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

bool is_feasible(const Outcome& o) { return o.violation <= kFeasibilityTolerance; }

// Feasibility-first ordering: feasible beats infeasible, then objective, and
// among infeasible points the smaller violation wins.
bool better(const Outcome& a, const Outcome& b) {
  const bool fa = is_feasible(a);
  const bool fb = is_feasible(b);
  if (fa != fb) return fa;
  if (fa) return a.objective < b.objective;
  return a.violation < b.violation;
}

struct Incumbent {
  Eigen::VectorXd x;
  Outcome outcome{0.0, std::numeric_limits<double>::infinity()};
  bool set = false;

  void offer(const Eigen::VectorXd& cand, const Outcome& o) {
    if (!set || better(o, outcome)) {
      x = cand;
      outcome = o;
      set = true;
    }
  }
};

void evaluate_all(const SearchProblem& problem, const std::vector<Eigen::VectorXd>& xs,
                  std::vector<Outcome>& out, int threads) {
  out.resize(xs.size());
  parallel_for(xs.size(), threads, [&](std::size_t i) { out[i] = problem.evaluate(xs[i]); });
}

// Compass search around the incumbent. Each pass probes +-step on every
// coordinate in parallel, then tries the sum of all improving moves.
void polish(const SearchProblem& problem, Incumbent& inc, int budget, int threads, int& evals) {
  const Eigen::Index dim = inc.x.size();
  const Eigen::VectorXd range = problem.upper - problem.lower;
  double step = 0.125;
  std::vector<Eigen::VectorXd> probes;
  std::vector<Outcome> outcomes;
  while (budget - evals >= 2 * dim + 1 && step > 1e-7) {
    probes.clear();
    for (Eigen::Index d = 0; d < dim; ++d) {
      for (int sign : {1, -1}) {
        Eigen::VectorXd p = inc.x;
        p(d) = std::clamp(p(d) + sign * step * range(d), problem.lower(d), problem.upper(d));
        probes.push_back(std::move(p));
      }
    }
    evaluate_all(problem, probes, outcomes, threads);
    evals += static_cast<int>(probes.size());

    Eigen::VectorXd combined = inc.x;
    std::size_t best = probes.size();
    int improving = 0;
    for (std::size_t k = 0; k < probes.size(); k += 2) {
      // Per coordinate keep the better of the two directions.
      std::size_t pick = better(outcomes[k + 1], outcomes[k]) ? k + 1 : k;
      if (!better(outcomes[pick], inc.outcome)) continue;
      const Eigen::Index d = static_cast<Eigen::Index>(k / 2);
      combined(d) = probes[pick](d);
      ++improving;
      if (best == probes.size() || better(outcomes[pick], outcomes[best])) best = pick;
    }
    if (best == probes.size()) {
      step *= 0.5;
      continue;
    }
    if (improving > 1) {
      const Outcome oc = problem.evaluate(combined);
      ++evals;
      if (better(oc, outcomes[best])) {
        inc.x = combined;
        inc.outcome = oc;
        continue;
      }
    }
    inc.x = probes[best];
    inc.outcome = outcomes[best];
  }
}

}  // namespace

SearchResult DifferentialEvolution::minimize(const SearchProblem& problem,
                                             std::span<const Eigen::VectorXd> seeds,
                                             const SolverConfig& config) const {
  config.validate();
  const Eigen::Index dim = problem.lower.size();
  const int np = config.population;
  const int threads = config.threads;
  const Eigen::VectorXd range = problem.upper - problem.lower;
  const int de_budget = config.max_evals - config.max_evals / 4;

  auto clip = [&](Eigen::VectorXd x) {
    return x.cwiseMax(problem.lower).cwiseMin(problem.upper).eval();
  };

  std::vector<Eigen::VectorXd> pop;
  pop.reserve(static_cast<std::size_t>(np));
  for (const auto& s : seeds) {
    if (static_cast<int>(pop.size()) == np) break;
    pop.push_back(clip(s));
  }
  const std::size_t n_seeds = pop.size();
  for (int i = static_cast<int>(pop.size()); i < np; ++i) {
    auto rng = stream(config.seed, 0, static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd x(dim);
    if (n_seeds > 0 && i % 2 == 0) {
      const auto& base = pop[static_cast<std::size_t>(i) % n_seeds];
      const double spread = 0.05 + 0.25 * unit(rng);
      for (Eigen::Index d = 0; d < dim; ++d) x(d) = base(d) + spread * range(d) * gauss(rng);
    } else {
      for (Eigen::Index d = 0; d < dim; ++d) x(d) = problem.lower(d) + unit(rng) * range(d);
    }
    pop.push_back(clip(std::move(x)));
  }

  std::vector<Outcome> out;
  evaluate_all(problem, pop, out, threads);
  int evals = np;
  Incumbent inc;
  for (int i = 0; i < np; ++i) inc.offer(pop[i], out[i]);

  double weight = config.penalty_weight * problem.objective_scale;
  auto fitness = [&](const Outcome& o) { return o.objective + weight * o.violation; };

  std::vector<int> rank(static_cast<std::size_t>(np));
  std::vector<Eigen::VectorXd> trials(static_cast<std::size_t>(np));
  std::vector<Outcome> trial_out;
  const int pbest = std::max(2, np / 5);
  for (std::uint64_t gen = 1; evals + np <= de_budget; ++gen) {
    std::iota(rank.begin(), rank.end(), 0);
    std::sort(rank.begin(), rank.end(), [&](int a, int b) {
      const double fa = fitness(out[a]);
      const double fb = fitness(out[b]);
      return fa < fb || (fa == fb && a < b);
    });
    const double spread = fitness(out[rank.back()]) - fitness(out[rank.front()]);
    if (is_feasible(out[rank.front()]) &&
        spread <= config.tolerance * (1.0 + std::abs(fitness(out[rank.front()]))))
      break;

    for (int i = 0; i < np; ++i) {
      auto rng = stream(config.seed, gen, static_cast<std::uint64_t>(i));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::uniform_int_distribution<int> pick(0, np - 1);
      std::uniform_int_distribution<int> top(0, pbest - 1);
      const int pb = rank[static_cast<std::size_t>(top(rng))];
      int r1 = pick(rng);
      while (r1 == i) r1 = pick(rng);
      int r2 = pick(rng);
      while (r2 == i || r2 == r1) r2 = pick(rng);
      const double f = 0.4 + 0.5 * unit(rng);
      const double cr = 0.9;
      std::uniform_int_distribution<Eigen::Index> forced(0, dim - 1);
      const Eigen::Index jrand = forced(rng);
      const auto& xi = pop[i];
      Eigen::VectorXd t = xi;
      for (Eigen::Index d = 0; d < dim; ++d) {
        if (d != jrand && unit(rng) > cr) continue;
        double v = xi(d) + f * (pop[pb](d) - xi(d)) + f * (pop[r1](d) - pop[r2](d));
        if (v < problem.lower(d))
          v = unit(rng) < 0.5 ? problem.lower(d) : 0.5 * (xi(d) + problem.lower(d));
        if (v > problem.upper(d))
          v = unit(rng) < 0.5 ? problem.upper(d) : 0.5 * (xi(d) + problem.upper(d));
        t(d) = v;
      }
      trials[static_cast<std::size_t>(i)] = std::move(t);
    }
    evaluate_all(problem, trials, trial_out, threads);
    evals += np;
    for (int i = 0; i < np; ++i) {
      inc.offer(trials[i], trial_out[i]);
      if (fitness(trial_out[i]) <= fitness(out[i])) {
        pop[i] = trials[i];
        out[i] = trial_out[i];
      }
    }
    const auto leader = std::min_element(out.begin(), out.end(), [&](const auto& a, const auto& b) {
      return fitness(a) < fitness(b);
    });
    if (!is_feasible(*leader)) weight *= config.penalty_growth;
  }

  polish(problem, inc, config.max_evals, threads, evals);
  return SearchResult{inc.x, inc.outcome, evals};
}

Schedule greedy_arbitrage(const Scenario& sc) {
  const auto units = sc.units();
  const auto horizon = sc.horizon();
  const double dt = sc.profiles.dt;
  Schedule s = Schedule::zeros(units, horizon);
  if (horizon < 2) return s;

  std::vector<Eigen::Index> by_price(static_cast<std::size_t>(horizon));
  std::iota(by_price.begin(), by_price.end(), 0);
  std::stable_sort(by_price.begin(), by_price.end(),
                   [&](auto a, auto b) { return sc.profiles.price(a) < sc.profiles.price(b); });
  const Eigen::Index k = std::max<Eigen::Index>(1, horizon / 6);

  for (Eigen::Index u = 0; u < units; ++u) {
    const BessParams& bp = sc.fleet.bess_units[static_cast<std::size_t>(u)];
    // Charge power giving the same SoC change as discharge power 1.
    const double ratio = sc.options.efficiency == EfficiencyModel::AsPublished
                             ? bp.eta_charge / bp.eta_discharge
                             : 1.0 / (bp.eta_charge * bp.eta_discharge);
    double p_dis = bp.p_max;
    if (p_dis * ratio > bp.p_max) p_dis = bp.p_max / ratio;
    for (int attempt = 0; attempt < 30; ++attempt, p_dis *= 0.5) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(horizon);
      for (Eigen::Index j = 0; j < k; ++j) {
        row(by_price[static_cast<std::size_t>(j)]) = -p_dis * ratio;
        row(by_price[static_cast<std::size_t>(horizon - 1 - j)]) = p_dis;
      }
      const auto traj = simulate_soc(row, bp, dt, sc.options.efficiency);
      const bool terminal_ok = !sc.options.enforce_terminal_soc ||
                               traj.soc(horizon) >= bp.soc_init - 1e-12;
      if (traj.feasible() && terminal_ok) {
        s.power.row(u) = row.transpose();
        break;
      }
    }
  }
  return s;
}

namespace {

// SoC change per kW of charge and of discharge over one slot.
struct SocRates {
  double charge;
  double discharge;
};

SocRates soc_rates(const BessParams& bp, double dt, EfficiencyModel model) {
  const double e = bp.capacity;
  const double charge = model == EfficiencyModel::Physical ? dt * bp.eta_charge / e
                                                            : dt / (bp.eta_charge * e);
  return {charge, dt / (bp.eta_discharge * e)};
}

double soc_delta(double p, const SocRates& r) { return p >= 0 ? -p * r.discharge : -p * r.charge; }

// Trims each slot so the trajectory stays in [soc_min, soc_max].
void clip_to_band(Eigen::Ref<Eigen::VectorXd> row, const BessParams& bp, const SocRates& r) {
  double soc = bp.soc_init;
  for (Eigen::Index t = 0; t < row.size(); ++t) {
    double next = soc + soc_delta(row(t), r);
    if (next > bp.soc_max && row(t) < 0) {
      row(t) = -std::max(0.0, bp.soc_max - soc) / r.charge;
      next = soc + soc_delta(row(t), r);
    } else if (next < bp.soc_min && row(t) > 0) {
      row(t) = std::max(0.0, soc - bp.soc_min) / r.discharge;
      next = soc + soc_delta(row(t), r);
    }
    soc = next;
  }
}

}  // namespace

Schedule repair_schedule(const Scenario& sc, Schedule s) {
  const double dt = sc.profiles.dt;
  for (Eigen::Index u = 0; u < s.units(); ++u) {
    const BessParams& bp = sc.fleet.bess_units[static_cast<std::size_t>(u)];
    const SocRates r = soc_rates(bp, dt, sc.options.efficiency);
    Eigen::VectorXd row = s.power.row(u).transpose().cwiseMax(-bp.p_max).cwiseMin(bp.p_max);
    for (int pass = 0; pass < 4; ++pass) {
      clip_to_band(row, bp, r);
      if (!sc.options.enforce_terminal_soc) break;
      double gain = 0.0;
      double loss = 0.0;
      for (Eigen::Index t = 0; t < row.size(); ++t) {
        if (row(t) < 0) gain -= row(t) * r.charge;
        else loss += row(t) * r.discharge;
      }
      const double deficit = loss - gain;
      if (deficit <= 0.0) break;
      const double keep = loss > 0.0 ? std::max(0.0, gain / loss) : 0.0;
      for (Eigen::Index t = 0; t < row.size(); ++t)
        if (row(t) > 0) row(t) *= keep;
    }
    s.power.row(u) = row.transpose();
  }
  return s;
}

SolveResult solve_single(const Scenario& sc, Target target, std::optional<double> epsilon,
                         const Weights& weights, const SolverConfig& config,
                         std::span<const Schedule> warm_starts, const SearchStrategy& strategy) {
  const auto units = sc.units();
  const auto horizon = sc.horizon();
  if (epsilon && target != Target::F1)
    throw std::invalid_argument("solve_single: epsilon cap applies to target F1 only");

  auto total_violation = [&](const ObjectiveValues& o) {
    double v = o.violation;
    if (epsilon) v += std::max(0.0, o.f2 - *epsilon) / std::max(std::abs(*epsilon), 1e-12);
    return v;
  };
  auto value = [&](const ObjectiveValues& o) { return target == Target::F1 ? o.f1 : o.f2; };

  if (units == 0) {
    Schedule idle = Schedule::zeros(0, horizon);
    ObjectiveValues o = evaluate_schedule(sc, idle, weights);
    o.violation = total_violation(o);
    o.feasible = o.violation <= kFeasibilityTolerance;
    return {idle, o, 1};
  }

  SearchProblem problem;
  problem.lower.resize(units * horizon);
  problem.upper.resize(units * horizon);
  for (Eigen::Index u = 0; u < units; ++u) {
    const double p = sc.fleet.bess_units[static_cast<std::size_t>(u)].p_max;
    problem.lower.segment(u * horizon, horizon).setConstant(-p);
    problem.upper.segment(u * horizon, horizon).setConstant(p);
  }
  problem.evaluate = [&](const Eigen::VectorXd& x) {
    const ObjectiveValues o =
        evaluate_schedule(sc, repair_schedule(sc, Schedule::unflatten(x, units, horizon)), weights);
    return SearchProblem::Outcome{value(o), total_violation(o)};
  };

  const Schedule idle = Schedule::zeros(units, horizon);
  problem.objective_scale = 1.0 + std::abs(value(evaluate_schedule(sc, idle, weights)));

  std::vector<Eigen::VectorXd> seeds;
  seeds.push_back(idle.flatten());
  seeds.push_back(greedy_arbitrage(sc).flatten());
  for (const auto& w : warm_starts) {
    if (w.units() != units || w.horizon() != horizon)
      throw ValidationError("warm start schedule shape does not match the scenario");
    seeds.push_back(w.flatten());
  }

  const SearchResult r = strategy.minimize(problem, seeds, config);
  SolveResult result;
  result.schedule = repair_schedule(sc, Schedule::unflatten(r.best, units, horizon));
  result.objectives = evaluate_schedule(sc, result.schedule, weights);
  result.objectives.violation = total_violation(result.objectives);
  result.objectives.feasible = result.objectives.violation <= kFeasibilityTolerance;
  result.evaluations = r.evaluations + 1;
  return result;
}

ViolationReport feasibility(const Scenario& scenario, const Schedule& schedule) {
  return evaluate_detailed(scenario, schedule, Weights{}).violations;
}

}  // namespace bach
