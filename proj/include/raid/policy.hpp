#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "raid/agents.hpp"
#include "raid/estimator.hpp"

namespace raid {

// Switching-schedule parameters: gamma in [2/3, 1) and probing variance.
struct ScheduleParams {
  double gamma;
  double sigma2;
};

enum class Phase { explore, exploit };

inline std::string_view phase_name(Phase p) {
  return p == Phase::explore ? "explore" : "exploit";
}

// Per-step trajectory record.
struct StepRecord {
  long t = 0;
  int agent = 0;
  Phase phase = Phase::exploit;
  double p = 0.0;        // issued incentive
  double p_hat = 0.0;    // observed incentive
  double x = 0.0;        // agent response
  bool interior = false;
  Vector theta_hat;      // estimate after the step
  double tr_sigma = 0.0;          // tr(Sigma) after the step
  double lambda_min_info = 0.0;   // lambda_min(Sigma^{-1}) after the step
  double sq_track_err = 0.0;      // |x - x_des|^2
};

// Planner-side state for one agent.
struct AgentPlannerState {
  EstimatorState est;
  Phase phase = Phase::exploit;
  long exploration_count = 0;
  double lambda_min_info = 0.0;  // cached; refreshed only when est changes
};

struct PlannerState {
  std::vector<AgentPlannerState> agents;
  long t = 0;
};

// A(t) = t^gamma * ln t for t >= 2, and 0 for t in {0, 1}.
double threshold(long t, double gamma);

// Phase at step t, from the previous step's trace: explore iff
// tr_sigma > 1/A(t-1), with the threshold taken as +infinity while
// A(t-1) <= 0 (steps 1 and 2 therefore exploit).
Phase switch_decision(double tr_sigma, long t, double gamma);

AgentPlannerState make_agent_planner(int d, const EstimatorInit& init = {});

// One planner step for one agent at time t. Explore: draw p ~ N(0, sigma2)
// from the probe stream, apply the gated update, bump the exploration
// counter. Exploit: issue the certainty-equivalence incentive and leave the
// estimator untouched. `out.agent` is left to the caller.
void raid_step(const AgentSpec& agent, AgentPlannerState& state, double x_des,
               const ScheduleParams& params, long t, Rng& probe_rng,
               Rng& noise_rng, StepRecord& out);

using StepSink = std::function<void(const StepRecord&)>;

// Full run over horizon T; agents evolve independently and the loop is
// agent-major, so the sink receives each agent's records in time order.
// Streams: agent i draws probes from split_seed(seed, 2i) and noise from
// split_seed(seed, 2i + 1).
void run_horizon(const std::vector<AgentSpec>& agents,
                 const std::vector<double>& x_des, const ScheduleParams& params,
                 long T, std::uint64_t seed, const EstimatorInit& init,
                 const StepSink& sink);

// Collecting variant: per-agent trajectories of length T.
std::vector<std::vector<StepRecord>> run_horizon(
    const std::vector<AgentSpec>& agents, const std::vector<double>& x_des,
    const ScheduleParams& params, long T, std::uint64_t seed,
    const EstimatorInit& init = {});

}  // namespace raid
