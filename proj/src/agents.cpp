#include "raid/agents.hpp"

#include <cmath>
#include <utility>

namespace raid {

AgentSpec::AgentSpec(Vector theta_star, StrategyInterval X,
                     CurvatureBounds bounds, NoiseSpec noise)
    : theta_star_(std::move(theta_star)), X_(X), bounds_(bounds), noise_(noise) {
  if (theta_star_.size() < 2) {
    throw std::invalid_argument("agent type must have dimension >= 2");
  }
  if (!theta_star_.allFinite()) {
    throw std::invalid_argument("agent type has non-finite coefficients");
  }
  if (!(X_.lo < X_.hi) || !std::isfinite(X_.lo) || !std::isfinite(X_.hi)) {
    throw std::invalid_argument("strategy interval must be a finite [lo, hi) with lo < hi");
  }
  if (!(0.0 < bounds_.m && bounds_.m <= bounds_.M)) {
    throw std::invalid_argument("curvature bounds must satisfy 0 < m <= M");
  }
  if (noise_.kind != NoiseKind::none && !(noise_.scale > 0.0)) {
    throw std::invalid_argument("noise scale must be positive");
  }
  if (!check_admissible(theta_star_, bounds_, X_)) {
    throw std::invalid_argument("agent type violates the curvature bounds on its interval");
  }
}

Response AgentSpec::best_response(double p) const {
  return best_response_for(theta_star_, X_, p);
}

Response best_response_for(const Vector& theta, const StrategyInterval& X,
                           double p) {
  constexpr double kWidthTol = 1e-12;

  auto g = [&](double x) { return gradient_dot(theta, x) + p; };

  double x;
  if (g(X.lo) >= 0.0) {
    x = X.lo;
  } else if (g(X.hi) <= 0.0) {
    x = X.hi;
  } else {
    double lo = X.lo;
    double hi = X.hi;
    while (hi - lo > kWidthTol) {
      const double mid = 0.5 * (lo + hi);
      if (g(mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    x = 0.5 * (lo + hi);
  }

  const double eta = 1e-9 * X.width();
  const bool interior = (X.lo + eta < x) && (x < X.hi - eta);
  return {x, interior};
}

double desired_incentive(const Vector& theta, double x_des) {
  return -gradient_dot(theta, x_des);
}

double draw_noise(const NoiseSpec& spec, Rng& rng) {
  switch (spec.kind) {
    case NoiseKind::gaussian:
      return rng.normal(std::sqrt(spec.scale));
    case NoiseKind::uniform:
      return rng.uniform(-spec.scale, spec.scale);
    case NoiseKind::rademacher:
      return rng.coin() ? spec.scale : -spec.scale;
    case NoiseKind::none:
      return 0.0;
  }
  return 0.0;
}

}  // namespace raid
