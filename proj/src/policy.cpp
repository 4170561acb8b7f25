#include "raid/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace raid {

double threshold(long t, double gamma) {
  if (t <= 1) return 0.0;
  const double td = static_cast<double>(t);
  return std::pow(td, gamma) * std::log(td);
}

Phase switch_decision(double tr_sigma, long t, double gamma) {
  const double a = threshold(t - 1, gamma);
  if (a <= 0.0) return Phase::exploit;
  return tr_sigma > 1.0 / a ? Phase::explore : Phase::exploit;
}

AgentPlannerState make_agent_planner(int d, const EstimatorInit& init) {
  AgentPlannerState s;
  s.est = make_estimator(d, init);
  s.lambda_min_info = min_eigenvalue_info(s.est);
  return s;
}

void raid_step(const AgentSpec& agent, AgentPlannerState& state, double x_des,
               const ScheduleParams& params, long t, Rng& probe_rng,
               Rng& noise_rng, StepRecord& out) {
  const Phase phase =
      switch_decision(trace_sigma(state.est), t, params.gamma);

  double p;
  if (phase == Phase::explore) {
    p = probe_rng.normal(std::sqrt(params.sigma2));
  } else {
    p = desired_incentive(state.est.theta_hat, x_des);
  }

  const Response r = agent.best_response(p);
  const double e = draw_noise(agent.noise(), noise_rng);
  const double p_hat = observe(p, e);

  if (phase == Phase::explore) {
    const Vector xi = basis_gradient(r.x, agent.dim());
    rls_update_inplace(state.est, xi, p_hat, r.interior);
    if (r.interior) {
      state.lambda_min_info = min_eigenvalue_info(state.est);
    }
    ++state.exploration_count;
  }
  state.phase = phase;

  out.t = t;
  out.phase = phase;
  out.p = p;
  out.p_hat = p_hat;
  out.x = r.x;
  out.interior = r.interior;
  out.theta_hat = state.est.theta_hat;
  out.tr_sigma = trace_sigma(state.est);
  out.lambda_min_info = state.lambda_min_info;
  const double dx = r.x - x_des;
  out.sq_track_err = dx * dx;
}

void run_horizon(const std::vector<AgentSpec>& agents,
                 const std::vector<double>& x_des, const ScheduleParams& params,
                 long T, std::uint64_t seed, const EstimatorInit& init,
                 const StepSink& sink) {
  if (agents.size() != x_des.size()) {
    throw std::invalid_argument("x_des length must equal the number of agents");
  }
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const StrategyInterval& X = agents[i].interval();
    if (!(X.lo < x_des[i] && x_des[i] < X.hi)) {
      throw std::invalid_argument("x_des must be strictly interior to the agent interval");
    }
  }

  for (std::size_t i = 0; i < agents.size(); ++i) {
    AgentPlannerState state = make_agent_planner(agents[i].dim(), init);
    Rng probe_rng(split_seed(seed, 2 * i));
    Rng noise_rng(split_seed(seed, 2 * i + 1));

    StepRecord rec;
    rec.agent = static_cast<int>(i);
    for (long t = 1; t <= T; ++t) {
      raid_step(agents[i], state, x_des[i], params, t, probe_rng, noise_rng,
                rec);
      sink(rec);
    }
  }
}

std::vector<std::vector<StepRecord>> run_horizon(
    const std::vector<AgentSpec>& agents, const std::vector<double>& x_des,
    const ScheduleParams& params, long T, std::uint64_t seed,
    const EstimatorInit& init) {
  std::vector<std::vector<StepRecord>> out(agents.size());
  for (auto& traj : out) traj.reserve(static_cast<std::size_t>(T));
  run_horizon(agents, x_des, params, T, seed, init,
              [&](const StepRecord& rec) { out[rec.agent].push_back(rec); });
  return out;
}

}  // namespace raid
