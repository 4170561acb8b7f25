#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "raid/estimator.hpp"
#include "raid/experiments.hpp"
#include "test_helpers.hpp"

using namespace raid;

namespace {

std::vector<Regressor> random_trajectory(Rng& rng, int d, long len,
                                         double gate_prob = 0.7) {
  std::vector<Regressor> traj;
  traj.reserve(static_cast<std::size_t>(len));
  for (long s = 0; s < len; ++s) {
    Regressor r;
    r.xi = basis_gradient(rng.uniform(-1.0, 1.0), d);
    r.p_hat = rng.uniform(-5.0, 5.0);
    r.delta = rng.next_double() < gate_prob;
    traj.push_back(std::move(r));
  }
  return traj;
}

EstimatorState run_recursion(const std::vector<Regressor>& traj,
                             EstimatorState state) {
  for (const auto& r : traj) rls_update_inplace(state, r.xi, r.p_hat, r.delta);
  return state;
}

}  // namespace

TEST_CASE("scalar ridge steps match the closed form") {
  EstimatorState s;
  s.theta_hat = Vector::Constant(1, 0.0);
  s.sigma = Matrix::Constant(1, 1, 1.0);

  Regressor r{Vector::Constant(1, 1.0), -2.0, true};
  s = rls_update(s, r);
  CHECK(s.theta_hat[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.sigma(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s.info_updates == 1);

  s = rls_update(s, r);
  CHECK(s.theta_hat[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(s.sigma(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("closed gate leaves the state bit-identical") {
  Rng rng(11);
  EstimatorState s = make_estimator(3, {2.5, std::nullopt});
  s = run_recursion(random_trajectory(rng, 3, 20), s);

  const EstimatorState before = s;
  Regressor r{basis_gradient(0.3, 3), 1.7, false};
  const EstimatorState after = rls_update(s, r);
  CHECK(after.theta_hat == before.theta_hat);
  CHECK(after.sigma == before.sigma);
  CHECK(after.info_updates == before.info_updates);
}

TEST_CASE("information matrix minimum eigenvalue") {
  EstimatorState s;
  s.theta_hat = Vector::Zero(3);
  s.sigma = Matrix::Identity(3, 3);
  CHECK(min_eigenvalue_info(s) == doctest::Approx(1.0));
}

// diag(0.5, 0.25, 0.1): lambda_min(Sigma^{-1}) = 1/0.5 = 2
TEST_CASE("information eigenvalue of a diagonal state") {
  EstimatorState s;
  s.theta_hat = Vector::Zero(3);
  s.sigma = Matrix::Zero(3, 3);
  s.sigma.diagonal() << 0.5, 0.25, 0.1;
  CHECK(min_eigenvalue_info(s) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(trace_sigma(s) == doctest::Approx(0.85).epsilon(1e-12));
}

TEST_CASE("trace of simple states") {
  EstimatorState s;
  s.theta_hat = Vector::Zero(3);
  s.sigma = Matrix::Identity(3, 3);
  CHECK(trace_sigma(s) == 3.0);

  EstimatorState s1;
  s1.theta_hat = Vector::Zero(1);
  s1.sigma = Matrix::Constant(1, 1, 0.5);
  CHECK(trace_sigma(s1) == 0.5);
}

TEST_CASE("batch oracle basics") {
  const Vector theta0 = Vector::Constant(1, 0.7);
  const Matrix sigma0 = Matrix::Constant(1, 1, 1.0);

  CHECK(batch_ls_oracle({}, theta0, sigma0)[0] == doctest::Approx(0.7));

  std::vector<Regressor> traj{{Vector::Constant(1, 1.0), -2.0, true}};
  CHECK(batch_ls_oracle(traj, Vector::Zero(1), sigma0)[0] ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("recursion equals the batch oracle") {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 3);
    const long len = 200;
    Vector theta0(d);
    for (int k = 0; k < d; ++k) theta0[k] = rng.uniform(-1.0, 1.0);
    const Matrix sigma0 = rng.uniform(0.5, 5.0) * Matrix::Identity(d, d);

    const auto traj = random_trajectory(rng, d, len);
    const EstimatorState fin = run_recursion(traj, {theta0, sigma0, 0});
    const Vector batch = batch_ls_oracle(traj, theta0, sigma0);
    CHECK((fin.theta_hat - batch).norm() / batch.norm() <= 1e-8);
  }
}

TEST_CASE("gated samples can be permuted without changing the solution") {
  Rng rng(13);
  const int d = 3;
  const Vector theta0 = Vector::Zero(d);
  const Matrix sigma0 = 2.0 * Matrix::Identity(d, d);
  auto traj = random_trajectory(rng, d, 100);

  const Vector batch = batch_ls_oracle(traj, theta0, sigma0);
  const Vector rec = run_recursion(traj, {theta0, sigma0, 0}).theta_hat;

  // deterministic shuffle
  for (std::size_t k = traj.size(); k > 1; --k) {
    std::swap(traj[k - 1], traj[rng.next_u64() % k]);
  }
  const Vector batch_perm = batch_ls_oracle(traj, theta0, sigma0);
  const Vector rec_perm = run_recursion(traj, {theta0, sigma0, 0}).theta_hat;

  CHECK((batch_perm - batch).norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK((rec_perm - rec).norm() / rec.norm() <= 1e-8);
}

TEST_CASE("positive definiteness and information monotonicity") {
  Rng rng(14);
  EstimatorState s = make_estimator(3, {10.0, std::nullopt});
  double lambda_prev = min_eigenvalue_info(s);

  for (int step = 0; step < 300; ++step) {
    const double x = rng.uniform(-1.0, 1.0);
    const Vector xi = basis_gradient(x, 3);
    const bool delta = rng.next_double() < 0.8;
    const Matrix prev_info = s.sigma.inverse();
    rls_update_inplace(s, xi, rng.uniform(-4.0, 4.0), delta);

    // symmetric PD throughout
    CHECK((s.sigma - s.sigma.transpose()).norm() <= 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> es(s.sigma, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() > 0.0);

    // lambda_min nondecreasing, increments bounded by ||xi||^2 (Weyl)
    const double lambda = min_eigenvalue_info(s);
    CHECK(lambda >= lambda_prev - 1e-12);
    if (delta) {
      Eigen::SelfAdjointEigenSolver<Matrix> ei(s.sigma.inverse() - prev_info,
                                               Eigen::EigenvaluesOnly);
      CHECK(ei.eigenvalues().maxCoeff() <= xi.squaredNorm() + 1e-6);
    }
    lambda_prev = lambda;
  }
}

TEST_CASE("information grows linearly under pure probing") {
  // regression value: lambda_min(Sigma^{-1}) >= 0.01 * t after 1000 probes
  const auto agents = raid::testing::cubic3_agents({NoiseKind::gaussian, 0.1});
  const auto series = verify_theorem2_growth(agents[0], 2.0, 1000, 5);
  const double ratio = series.back().second;
  CHECK(series.back().first == 1000);
  CHECK(ratio * 1000.0 >= 0.01 * 1000.0);
}

TEST_CASE("estimation error decays at the predicted information rate") {
  // sup over t in [1e2, 1e5] of ||theta_hat - theta*||^2 lambda(t) / log t,
  // under pure Gaussian probing; the bound is a frozen regression constant.
  const auto agents = raid::testing::cubic3_agents({NoiseKind::gaussian, 0.1});
  const AgentSpec& agent = agents[0];
  const long T = 100000;

  double worst = 0.0;
  for (int seed = 0; seed < 20; ++seed) {
    EstimatorState est = make_estimator(agent.dim(), {});
    Rng probe(split_seed(seed, 0));
    Rng noise(split_seed(seed, 1));
    for (long t = 1; t <= T; ++t) {
      const double p = probe.normal(std::sqrt(2.0));
      const Response r = agent.best_response(p);
      const double p_hat = observe(p, draw_noise(agent.noise(), noise));
      rls_update_inplace(est, basis_gradient(r.x, agent.dim()), p_hat, r.interior);
      if (t >= 100 && t % 100 == 0) {
        const double err2 = (est.theta_hat - agent.theta_star()).squaredNorm();
        const double lambda = min_eigenvalue_info(est);
        worst = std::max(worst, err2 * lambda / std::log(static_cast<double>(t)));
      }
    }
  }
  CHECK(worst <= 1.0);  // frozen regression bound, measured 0.179 on first run
}
