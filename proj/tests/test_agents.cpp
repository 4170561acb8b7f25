#include <doctest.h>

#include <cmath>

#include "raid/agents.hpp"
#include "test_helpers.hpp"

using namespace raid;

namespace {

AgentSpec quadratic_agent(NoiseSpec noise = {}) {
  Vector theta(3);
  theta << 1.0, 0.5, 0.0;
  return AgentSpec(theta, {-1.0, 1.0}, {0.5, 2.0}, noise);
}

AgentSpec cubic_agent(NoiseSpec noise = {}) {
  Vector theta(3);
  theta << 0.0, 3.5, 1.0;
  return AgentSpec(theta, {-1.0, 1.0}, {1.0, 13.0}, noise);
}

// Random admissible agent on [-1, 1]: positive quadratic coefficient
// dominating the cubic one keeps the curvature inside a computable window.
AgentSpec random_admissible_agent(Rng& rng) {
  Vector theta(3);
  theta[0] = rng.uniform(-2.0, 2.0);
  theta[1] = rng.uniform(1.0, 4.0);
  theta[2] = rng.uniform(-0.25, 0.25) * theta[1];
  const double m = 2.0 * theta[1] - 6.0 * std::abs(theta[2]);
  const double M = 2.0 * theta[1] + 6.0 * std::abs(theta[2]);
  return AgentSpec(theta, {-1.0, 1.0}, {m, M}, {});
}

}  // namespace

TEST_CASE("best response solves the first-order condition") {
  const AgentSpec a1 = quadratic_agent();
  Response r = a1.best_response(-1.5);
  CHECK(r.x == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(r.interior);
  // interior responses satisfy the stationarity residual bound
  CHECK(std::abs(gradient_dot(a1.theta_star(), r.x) + (-1.5)) <= 1e-10);

  const AgentSpec a2 = cubic_agent();
  r = a2.best_response(-4.25);
  CHECK(r.x == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(r.interior);

  // unconstrained root at x = 2 clamps to the boundary
  r = a1.best_response(-3.0);
  CHECK(r.x == 1.0);
  CHECK_FALSE(r.interior);
}

TEST_CASE("inadmissible type is rejected at construction") {
  Vector theta(3);
  theta << 0.0, 0.0, 1.0;
  CHECK_THROWS_AS(AgentSpec(theta, {-1.0, 1.0}, {0.1, 10.0}, {}),
                  std::invalid_argument);
}

TEST_CASE("observation is additive") {
  CHECK(observe(-1.5, 0.2) == doctest::Approx(-1.3));
  CHECK(observe(-1.5, 0.0) == -1.5);
  CHECK(observe(0.0, -0.1) == -0.1);
}

TEST_CASE("desired incentive values") {
  Vector t1(3), t2(3), t0(3);
  t1 << 1.0, 0.5, 0.0;
  t2 << 0.0, 3.5, 1.0;
  t0.setZero();
  CHECK(desired_incentive(t1, 0.5) == doctest::Approx(-1.5));
  CHECK(desired_incentive(t2, 0.5) == doctest::Approx(-4.25));
  CHECK(desired_incentive(t0, 0.37) == 0.0);
}

TEST_CASE("noise draws") {
  Rng rng(99);
  CHECK(draw_noise({NoiseKind::none, 0.0}, rng) == 0.0);

  for (int k = 0; k < 100; ++k) {
    const double v = draw_noise({NoiseKind::rademacher, 0.1}, rng);
    CHECK((v == 0.1 || v == -0.1));
  }

  for (int k = 0; k < 100; ++k) {
    const double v = draw_noise({NoiseKind::uniform, 0.5}, rng);
    CHECK(v >= -0.5);
    CHECK(v <= 0.5);
  }

  double sum = 0.0;
  const long n = 1000000;
  for (long k = 0; k < n; ++k) sum += draw_noise({NoiseKind::gaussian, 0.1}, rng);
  CHECK(std::abs(sum / n) <= 0.002);
}

TEST_CASE("incentive-response round trip on interior targets") {
  Rng rng(7);
  for (int rep = 0; rep < 200; ++rep) {
    const AgentSpec agent = random_admissible_agent(rng);
    const double x_des = rng.uniform(-0.9, 0.9);
    const double p = desired_incentive(agent.theta_star(), x_des);
    const Response r = agent.best_response(p);
    CHECK(std::abs(r.x - x_des) <= 1e-8);
    CHECK(r.interior);
  }
}

TEST_CASE("best response is monotone decreasing in the incentive") {
  Rng rng(8);
  for (int rep = 0; rep < 100; ++rep) {
    const AgentSpec agent = random_admissible_agent(rng);
    const double p1 = rng.uniform(-8.0, 8.0);
    const double p2 = p1 + rng.uniform(0.0, 4.0);
    CHECK(agent.best_response(p1).x >= agent.best_response(p2).x);
  }
}

TEST_CASE("best-response slope lies in [-1/m, -1/M]") {
  Rng rng(9);
  const double h = 1e-5;
  int checked = 0;
  while (checked < 100) {
    const AgentSpec agent = random_admissible_agent(rng);
    const double x_des = rng.uniform(-0.8, 0.8);
    const double p = desired_incentive(agent.theta_star(), x_des);
    const Response lo = agent.best_response(p - h);
    const Response hi = agent.best_response(p + h);
    if (!lo.interior || !hi.interior) continue;
    const double slope = (hi.x - lo.x) / (2 * h);
    CHECK(slope >= -1.0 / agent.bounds().m - 1e-3);
    CHECK(slope <= -1.0 / agent.bounds().M + 1e-3);
    ++checked;
  }
}

TEST_CASE("best response beats random probes") {
  Rng rng(10);
  const AgentSpec agent = cubic_agent();
  auto cost = [&](double x, double p) {
    return agent.theta_star().dot(monomial_basis(x, 3)) + p * x;
  };
  for (int rep = 0; rep < 20; ++rep) {
    const double p = rng.uniform(-10.0, 10.0);
    const Response r = agent.best_response(p);
    const double c_star = cost(r.x, p);
    for (int k = 0; k < 100; ++k) {
      const double xp = rng.uniform(-1.0, 1.0);
      CHECK(c_star <= cost(xp, p) + 1e-12);
    }
  }
}

TEST_CASE("benchmark agents construct and are admissible") {
  const auto agents = raid::testing::cubic3_agents();
  CHECK(agents.size() == 3);
  for (const auto& a : agents) {
    CHECK(check_admissible(a.theta_star(), a.bounds(), a.interval()));
  }
}
