#include "raid/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace raid {

void RegretAccumulator::update(const std::vector<double>& x,
                               const std::vector<double>& x_des) {
  if (x.size() != x_des.size()) {
    throw std::invalid_argument("regret update: length mismatch");
  }
  double inc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - x_des[i];
    inc += d * d;
  }
  per_step.push_back(inc);
  cumulative += inc;
}

std::vector<long> log_grid(long T, int max_points) {
  std::vector<long> grid;
  if (T <= 0) return grid;
  if (T <= max_points) {
    grid.reserve(static_cast<std::size_t>(T));
    for (long t = 1; t <= T; ++t) grid.push_back(t);
    return grid;
  }
  const double hi = std::log(static_cast<double>(T));
  long prev = 0;
  for (int k = 0; k < max_points; ++k) {
    const double f = static_cast<double>(k) / (max_points - 1);
    long t = std::llround(std::exp(hi * f));
    t = std::clamp(t, 1L, T);
    if (t > prev) {
      grid.push_back(t);
      prev = t;
    }
  }
  if (grid.back() != T) grid.push_back(T);
  return grid;
}

SeedSeries run_seed_metrics(const MonteCarloConfig& cfg, std::uint64_t seed,
                            const std::vector<long>& grid) {
  const std::size_t n = cfg.agents.size();
  const std::size_t g = grid.size();

  SeedSeries out;
  out.theta_err.assign(n, std::vector<double>(g, 0.0));
  out.avg_regret.assign(g, 0.0);

  // cumulative per-agent regret at each grid point, filled agent-major
  std::vector<std::vector<double>> cum_regret(n, std::vector<double>(g, 0.0));
  std::vector<std::size_t> cursor(n, 0);
  std::vector<double> running(n, 0.0);

  run_horizon(cfg.agents, cfg.x_des, cfg.schedule, cfg.horizon, seed, cfg.init,
              [&](const StepRecord& rec) {
                const int i = rec.agent;
                running[i] += rec.sq_track_err;
                std::size_t& c = cursor[i];
                if (c < g && rec.t == grid[c]) {
                  out.theta_err[i][c] =
                      (rec.theta_hat - cfg.agents[i].theta_star()).norm();
                  cum_regret[i][c] = running[i];
                  ++c;
                }
              });

  for (std::size_t k = 0; k < g; ++k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += cum_regret[i][k];
    out.avg_regret[k] = total / static_cast<double>(grid[k]);
  }
  return out;
}

AggregateSeries aggregate(const std::vector<long>& grid,
                          const std::vector<SeedSeries>& seeds, int n_agents) {
  const std::size_t g = grid.size();
  const std::size_t s = seeds.size();
  if (s == 0) throw std::invalid_argument("aggregate: no seed series");

  AggregateSeries agg;
  agg.t_grid = grid;
  agg.mean_theta_err.assign(n_agents, std::vector<double>(g, 0.0));
  agg.std_theta_err.assign(n_agents, std::vector<double>(g, 0.0));
  agg.mean_avg_regret.assign(g, 0.0);
  agg.std_avg_regret.assign(g, 0.0);

  auto mean_std = [s](auto value_of, double& mean, double& sd) {
    double m = 0.0;
    for (std::size_t r = 0; r < s; ++r) m += value_of(r);
    m /= static_cast<double>(s);
    double v = 0.0;
    for (std::size_t r = 0; r < s; ++r) {
      const double d = value_of(r) - m;
      v += d * d;
    }
    mean = m;
    sd = std::sqrt(v / static_cast<double>(s));  // population form
  };

  for (int i = 0; i < n_agents; ++i) {
    for (std::size_t k = 0; k < g; ++k) {
      mean_std([&](std::size_t r) { return seeds[r].theta_err[i][k]; },
               agg.mean_theta_err[i][k], agg.std_theta_err[i][k]);
    }
  }
  for (std::size_t k = 0; k < g; ++k) {
    mean_std([&](std::size_t r) { return seeds[r].avg_regret[k]; },
             agg.mean_avg_regret[k], agg.std_avg_regret[k]);
  }
  return agg;
}

AggregateSeries run_monte_carlo(const MonteCarloConfig& cfg) {
  if (cfg.seeds.empty()) {
    throw std::invalid_argument("run_monte_carlo: seed list is empty");
  }
  const std::vector<long> grid = log_grid(cfg.horizon, cfg.grid_points);
  std::vector<SeedSeries> per_seed(cfg.seeds.size());

  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1 || cfg.seeds.size() == 1) {
    for (std::size_t r = 0; r < cfg.seeds.size(); ++r) {
      per_seed[r] = run_seed_metrics(cfg, cfg.seeds[r], grid);
    }
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(jobs);
    for (int w = 0; w < jobs; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t r = w; r < cfg.seeds.size(); r += jobs) {
            per_seed[r] = run_seed_metrics(cfg, cfg.seeds[r], grid);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);  // fail-fast: no silent seed loss
    }
  }
  return aggregate(grid, per_seed, static_cast<int>(cfg.agents.size()));
}

RateFit fit_rate(const std::vector<long>& t, const std::vector<double>& y,
                 double t_min, double t_max) {
  if (t.size() != y.size()) throw std::invalid_argument("fit_rate: length mismatch");

  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double td = static_cast<double>(t[k]);
    if (td < t_min || td > t_max) continue;
    if (!(y[k] > 0.0)) {
      throw std::invalid_argument("fit_rate: nonpositive metric value in window");
    }
    lx.push_back(std::log(td));
    ly.push_back(std::log(y[k]));
  }
  if (lx.size() < 10) {
    throw std::invalid_argument("fit_rate: fewer than 10 grid points in window");
  }

  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    const double dx = lx[k] - mx;
    const double dy = ly[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }

  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.t_min = t_min;
  fit.t_max = t_max;
  if (syy <= 0.0) {
    fit.r_squared = 1.0;  // constant series: the line is exact
  } else {
    double ss_res = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
      const double r = ly[k] - (fit.intercept + fit.slope * lx[k]);
      ss_res += r * r;
    }
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

Matrix empirical_excitation(const AgentSpec& agent, double sigma2, long N,
                            std::uint64_t seed) {
  const int d = agent.dim();
  Matrix acc = Matrix::Zero(d, d);
  Rng rng(split_seed(seed, 0));
  const double sd = std::sqrt(sigma2);
  for (long k = 0; k < N; ++k) {
    const double p = rng.normal(sd);
    const Response r = agent.best_response(p);
    if (!r.interior) continue;
    const Vector xi = basis_gradient(r.x, d);
    acc.noalias() += xi * xi.transpose();
  }
  acc /= static_cast<double>(N);
  return 0.5 * (acc + acc.transpose()).eval();
}

ExcitationCheck check_excitation(const AgentSpec& agent, double sigma2, long N,
                                 std::uint64_t seed, int blocks) {
  const int d = agent.dim();
  const double sd = std::sqrt(sigma2);
  Rng rng(split_seed(seed, 0));

  std::vector<Matrix> block_sums(blocks, Matrix::Zero(d, d));
  std::vector<long> block_n(blocks, 0);
  for (long k = 0; k < N; ++k) {
    const int b = static_cast<int>(k * blocks / N);
    ++block_n[b];
    const double p = rng.normal(sd);
    const Response r = agent.best_response(p);
    if (!r.interior) continue;
    const Vector xi = basis_gradient(r.x, d);
    block_sums[b].noalias() += xi * xi.transpose();
  }

  Matrix total = Matrix::Zero(d, d);
  for (const auto& bs : block_sums) total += bs;

  auto lambda_min_of = [](const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  };

  ExcitationCheck out;
  out.lambda_min = lambda_min_of(total / static_cast<double>(N));

  // leave-one-block-out jackknife on lambda_min
  std::vector<double> loo(blocks);
  double loo_mean = 0.0;
  for (int b = 0; b < blocks; ++b) {
    loo[b] = lambda_min_of((total - block_sums[b]) /
                           static_cast<double>(N - block_n[b]));
    loo_mean += loo[b];
  }
  loo_mean /= blocks;
  double var = 0.0;
  for (int b = 0; b < blocks; ++b) {
    const double dd = loo[b] - loo_mean;
    var += dd * dd;
  }
  out.std_err = std::sqrt(var * (blocks - 1) / static_cast<double>(blocks));
  out.pass = out.lambda_min > 5.0 * out.std_err;
  return out;
}

std::vector<std::pair<long, double>> verify_theorem2_growth(
    const AgentSpec& agent, double sigma2, long T, std::uint64_t seed,
    const EstimatorInit& init, int grid_points) {
  EstimatorState est = make_estimator(agent.dim(), init);
  Rng probe_rng(split_seed(seed, 0));
  Rng noise_rng(split_seed(seed, 1));
  const double sd = std::sqrt(sigma2);

  const std::vector<long> grid = log_grid(T, grid_points);
  std::vector<std::pair<long, double>> series;
  series.reserve(grid.size());
  std::size_t cursor = 0;

  for (long t = 1; t <= T; ++t) {
    const double p = probe_rng.normal(sd);
    const Response r = agent.best_response(p);
    const double p_hat = observe(p, draw_noise(agent.noise(), noise_rng));
    const Vector xi = basis_gradient(r.x, agent.dim());
    rls_update_inplace(est, xi, p_hat, r.interior);
    if (cursor < grid.size() && t == grid[cursor]) {
      series.emplace_back(t, min_eigenvalue_info(est) / static_cast<double>(t));
      ++cursor;
    }
  }
  return series;
}

OracleCheck verify_estimator_oracle(int trials, std::uint64_t seed,
                                    double tol) {
  OracleCheck out;
  Rng rng(split_seed(seed, 0));

  for (int trial = 0; trial < trials; ++trial) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 3);
    const long len = 1 + static_cast<long>(rng.next_u64() % 500);
    const double rho = rng.uniform(0.1, 10.0);

    Vector theta0(d);
    for (int k = 0; k < d; ++k) theta0[k] = rng.uniform(-2.0, 2.0);
    const Matrix sigma0 = rho * Matrix::Identity(d, d);

    std::vector<Regressor> traj;
    traj.reserve(static_cast<std::size_t>(len));
    EstimatorState est{theta0, sigma0, 0};

    for (long s = 0; s < len; ++s) {
      Regressor r;
      r.xi = basis_gradient(rng.uniform(-1.0, 1.0), d);
      r.p_hat = rng.uniform(-5.0, 5.0);
      r.delta = rng.next_double() < 0.7;  // mixed gates

      const Matrix prev_info = est.sigma.inverse();
      rls_update_inplace(est, r.xi, r.p_hat, r.delta);
      if (r.delta) {
        const Matrix expected = prev_info + r.xi * r.xi.transpose();
        const double rel = (est.sigma.inverse() - expected).norm() / expected.norm();
        out.max_rank_one_rel_err = std::max(out.max_rank_one_rel_err, rel);
      }
      traj.push_back(std::move(r));
    }

    const Vector batch = batch_ls_oracle(traj, theta0, sigma0);
    const double rel = (est.theta_hat - batch).norm() /
                       std::max(batch.norm(), 1e-300);
    out.max_theta_rel_err = std::max(out.max_theta_rel_err, rel);
  }

  out.pass = out.max_theta_rel_err <= tol && out.max_rank_one_rel_err <= tol;
  return out;
}

}  // namespace raid
