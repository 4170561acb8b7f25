#pragma once

#include <stdexcept>

#include "raid/polybasis.hpp"
#include "raid/rng.hpp"

namespace raid {

enum class NoiseKind { gaussian, uniform, rademacher, none };

// Observation noise on the incentive channel. `scale` is the variance for
// gaussian, the half-width for uniform and the magnitude for rademacher.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::none;
  double scale = 0.0;
};

struct Response {
  double x;
  bool interior;
};

// Immutable agent description: private type theta*, strategy interval,
// curvature window and noise model. Construction validates that theta* is
// admissible for (bounds, X).
class AgentSpec {
 public:
  AgentSpec(Vector theta_star, StrategyInterval X, CurvatureBounds bounds,
            NoiseSpec noise);

  const Vector& theta_star() const { return theta_star_; }
  const StrategyInterval& interval() const { return X_; }
  const CurvatureBounds& bounds() const { return bounds_; }
  const NoiseSpec& noise() const { return noise_; }
  int dim() const { return static_cast<int>(theta_star_.size()); }

  // Unique minimizer of theta* . Phi(x) + p x over the interval.
  Response best_response(double p) const;

 private:
  Vector theta_star_;
  StrategyInterval X_;
  CurvatureBounds bounds_;
  NoiseSpec noise_;
};

// Best response of the strongly convex cost theta . Phi(x) + p x over X.
// The cost derivative is strictly increasing, so the minimizer is found by
// endpoint tests plus bisection to interval width 1e-12. A response within
// 1e-9 * width of a boundary is classified non-interior.
Response best_response_for(const Vector& theta, const StrategyInterval& X,
                           double p);

// Incentive that elicits x_des from an agent of type theta: -theta . grad Phi(x_des)
double desired_incentive(const Vector& theta, double x_des);

// Noisy incentive observation p_hat = p + e
inline double observe(double p, double noise_draw) { return p + noise_draw; }

// One zero-mean draw from the given noise model.
double draw_noise(const NoiseSpec& spec, Rng& rng);

}  // namespace raid
