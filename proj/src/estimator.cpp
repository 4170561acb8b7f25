#include "raid/estimator.hpp"

#include <stdexcept>

namespace raid {

EstimatorState make_estimator(int d, const EstimatorInit& init) {
  if (d < 1) throw std::invalid_argument("estimator dimension must be >= 1");
  if (!(init.rho > 0.0)) throw std::invalid_argument("prior scale rho must be positive");
  EstimatorState s;
  s.sigma = init.rho * Matrix::Identity(d, d);
  if (init.theta0) {
    if (init.theta0->size() != d) {
      throw std::invalid_argument("theta0 dimension mismatch");
    }
    s.theta_hat = *init.theta0;
  } else {
    s.theta_hat = Vector::Zero(d);
  }
  return s;
}

void rls_update_inplace(EstimatorState& state, const Vector& xi, double p_hat,
                        bool delta) {
  if (!delta) return;

  const Vector sx = state.sigma * xi;
  const double denom = 1.0 + xi.dot(sx);
  if (denom <= 1e-300) {
    throw std::runtime_error("degenerate rank-one update: denominator underflow");
  }
  state.sigma.noalias() -= (sx * sx.transpose()) / denom;
  state.sigma = 0.5 * (state.sigma + state.sigma.transpose()).eval();

  const double innovation = p_hat + xi.dot(state.theta_hat);
  state.theta_hat.noalias() -= (state.sigma * xi) * innovation;
  ++state.info_updates;
}

EstimatorState rls_update(const EstimatorState& state, const Regressor& r) {
  EstimatorState out = state;
  rls_update_inplace(out, r.xi, r.p_hat, r.delta);
  return out;
}

double min_eigenvalue_info(const EstimatorState& state) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(state.sigma,
                                           Eigen::EigenvaluesOnly);
  return 1.0 / es.eigenvalues().maxCoeff();
}

Vector batch_ls_oracle(const std::vector<Regressor>& trajectory,
                       const Vector& theta0, const Matrix& sigma0) {
  const auto d = theta0.size();
  Matrix info = sigma0.llt().solve(Matrix::Identity(d, d));
  Vector rhs = info * theta0;
  for (const Regressor& r : trajectory) {
    if (!r.delta) continue;
    info.noalias() += r.xi * r.xi.transpose();
    rhs.noalias() -= r.xi * r.p_hat;
  }
  return info.ldlt().solve(rhs);
}

}  // namespace raid
