#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "raid/policy.hpp"

namespace raid {

// Cumulative squared tracking error R_t with its per-step increments.
struct RegretAccumulator {
  double cumulative = 0.0;
  std::vector<double> per_step;

  void update(const std::vector<double>& x, const std::vector<double>& x_des);
};

// Cross-seed aggregates on a log-spaced time grid. theta error is tracked
// per agent; average regret R_t / t is a planner-level metric.
struct AggregateSeries {
  std::vector<long> t_grid;
  std::vector<std::vector<double>> mean_theta_err;  // [agent][grid]
  std::vector<std::vector<double>> std_theta_err;   // [agent][grid]
  std::vector<double> mean_avg_regret;
  std::vector<double> std_avg_regret;
};

// Least-squares line on (ln t, ln y) over a time window.
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
};

// Per-seed metric series on the shared grid.
struct SeedSeries {
  std::vector<std::vector<double>> theta_err;  // [agent][grid]
  std::vector<double> avg_regret;              // [grid]
};

struct MonteCarloConfig {
  std::vector<AgentSpec> agents;
  std::vector<double> x_des;
  ScheduleParams schedule{2.0 / 3.0, 2.0};
  long horizon = 0;
  std::vector<std::uint64_t> seeds;
  EstimatorInit init;
  int jobs = 1;
  int grid_points = 200;
};

// Log-spaced integer grid on [1, T], strictly increasing, always ending at T.
std::vector<long> log_grid(long T, int max_points = 200);

SeedSeries run_seed_metrics(const MonteCarloConfig& cfg, std::uint64_t seed,
                            const std::vector<long>& grid);

// Mean and population standard deviation across seeds, in seed-list order.
AggregateSeries aggregate(const std::vector<long>& grid,
                          const std::vector<SeedSeries>& seeds, int n_agents);

// Runs every seed (fail-fast, optionally on cfg.jobs threads) and aggregates.
AggregateSeries run_monte_carlo(const MonteCarloConfig& cfg);

// Fit ln y = slope * ln t + intercept over grid points with t_min <= t <= t_max.
// Requires at least 10 points in the window and strictly positive values.
RateFit fit_rate(const std::vector<long>& t, const std::vector<double>& y,
                 double t_min, double t_max);

// Monte Carlo average of xi xi' delta over N i.i.d. probes p ~ N(0, sigma2).
Matrix empirical_excitation(const AgentSpec& agent, double sigma2, long N,
                            std::uint64_t seed);

// Excitation check with block-jackknife error bars on lambda_min.
struct ExcitationCheck {
  double lambda_min = 0.0;
  double std_err = 0.0;
  bool pass = false;  // lambda_min > 5 standard errors
};
ExcitationCheck check_excitation(const AgentSpec& agent, double sigma2, long N,
                                 std::uint64_t seed, int blocks = 100);

// Pure-probing run (no exploitation): (t, lambda_min(Sigma^{-1}(t)) / t)
// sampled on the log grid.
std::vector<std::pair<long, double>> verify_theorem2_growth(
    const AgentSpec& agent, double sigma2, long T, std::uint64_t seed,
    const EstimatorInit& init = {}, int grid_points = 200);

// Recursive-vs-batch equivalence over random gated trajectories, including
// the per-step rank-one identity on the information matrix.
struct OracleCheck {
  double max_theta_rel_err = 0.0;
  double max_rank_one_rel_err = 0.0;
  bool pass = false;
};
OracleCheck verify_estimator_oracle(int trials, std::uint64_t seed,
                                    double tol = 1e-8);

}  // namespace raid
