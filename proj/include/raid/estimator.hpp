#pragma once

#include <optional>
#include <vector>

#include "raid/polybasis.hpp"

namespace raid {

// Gated recursive least-squares state: estimate theta_hat and covariance
// Sigma (symmetric positive definite). info_updates counts absorbed
// (gate-open) samples.
struct EstimatorState {
  Vector theta_hat;
  Matrix sigma;
  long info_updates = 0;
};

// One observation: regressor xi = grad Phi(x), noisy incentive p_hat, and
// the interiority gate delta.
struct Regressor {
  Vector xi;
  double p_hat;
  bool delta;
};

// Estimator initialization: Sigma(0) = rho * I, theta_hat(0) = theta0 or 0.
struct EstimatorInit {
  double rho = 10.0;
  std::optional<Vector> theta0;
};

EstimatorState make_estimator(int d, const EstimatorInit& init = {});

// Rank-one gated update. With delta closed the state is returned unchanged;
// otherwise Sigma is updated by the Sherman-Morrison form first and
// theta_hat second, using the updated Sigma. Sigma is re-symmetrized after
// the rank-one correction to suppress rounding drift over long horizons.
void rls_update_inplace(EstimatorState& state, const Vector& xi, double p_hat,
                        bool delta);
EstimatorState rls_update(const EstimatorState& state, const Regressor& r);

// lambda_min of the information matrix Sigma^{-1}, i.e. 1 / lambda_max(Sigma).
double min_eigenvalue_info(const EstimatorState& state);

inline double trace_sigma(const EstimatorState& state) {
  return state.sigma.trace();
}

// Exact minimizer of
//   (theta - theta0)' Sigma0^{-1} (theta - theta0)
//     + sum over gated samples of (theta . xi + p_hat)^2,
// solved directly from the normal equations. Used as an independent oracle
// for the recursion.
Vector batch_ls_oracle(const std::vector<Regressor>& trajectory,
                       const Vector& theta0, const Matrix& sigma0);

}  // namespace raid
