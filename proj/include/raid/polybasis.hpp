#pragma once

#include <Eigen/Dense>

namespace raid {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Curvature window for an admissible type: the nominal cost must be
// m-strongly convex with an M-Lipschitz gradient on the strategy interval.
struct CurvatureBounds {
  double m;
  double M;
};

// Compact strategy interval [lo, hi].
struct StrategyInterval {
  double lo;
  double hi;

  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

// Phi(x) = (x, x^2, ..., x^d)
Vector monomial_basis(double x, int d);

// grad Phi(x) = (1, 2x, ..., d x^{d-1})
Vector basis_gradient(double x, int d);

// hess Phi(x) = (0, 2, 6x, ..., d(d-1) x^{d-2})
Vector basis_hessian(double x, int d);

// theta . grad Phi(x), evaluated without temporaries (hot path of the
// best-response solver).
double gradient_dot(const Vector& theta, double x);

// theta . hess Phi(x)
double hessian_dot(const Vector& theta, double x);

// True iff q(x) = theta . hess Phi(x) stays within [m, M] on all of X.
// q is sampled on a 1025-point grid including both endpoints, then refined
// by golden-section search around the grid extremes to x-tolerance 1e-10.
bool check_admissible(const Vector& theta, const CurvatureBounds& bounds,
                      const StrategyInterval& X);

}  // namespace raid
