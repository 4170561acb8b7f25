#include "raid/polybasis.hpp"

#include <algorithm>
#include <limits>

namespace raid {

namespace {

constexpr double kInvPhi = 0.61803398874989484820;

// Golden-section minimization of f on [a, b]; returns the minimal value seen.
template <class F>
double golden_min(F f, double a, double b, double xtol) {
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > xtol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return std::min(fc, fd);
}

}  // namespace

Vector monomial_basis(double x, int d) {
  Vector v(d);
  double pw = 1.0;
  for (int k = 0; k < d; ++k) {
    pw *= x;
    v[k] = pw;
  }
  return v;
}

Vector basis_gradient(double x, int d) {
  Vector g(d);
  double pw = 1.0;
  for (int k = 0; k < d; ++k) {
    g[k] = static_cast<double>(k + 1) * pw;
    pw *= x;
  }
  return g;
}

Vector basis_hessian(double x, int d) {
  Vector h(d);
  h[0] = 0.0;
  double pw = 1.0;
  for (int k = 1; k < d; ++k) {
    h[k] = static_cast<double>((k + 1) * k) * pw;
    pw *= x;
  }
  return h;
}

double gradient_dot(const Vector& theta, double x) {
  const double* c = theta.data();
  const int d = static_cast<int>(theta.size());
  double acc = 0.0;
  double pw = 1.0;
  for (int k = 0; k < d; ++k) {
    acc += c[k] * static_cast<double>(k + 1) * pw;
    pw *= x;
  }
  return acc;
}

double hessian_dot(const Vector& theta, double x) {
  const double* c = theta.data();
  const int d = static_cast<int>(theta.size());
  double acc = 0.0;
  double pw = 1.0;
  for (int k = 1; k < d; ++k) {
    acc += c[k] * static_cast<double>((k + 1) * k) * pw;
    pw *= x;
  }
  return acc;
}

bool check_admissible(const Vector& theta, const CurvatureBounds& bounds,
                      const StrategyInterval& X) {
  constexpr int kGrid = 1025;
  constexpr double kXTol = 1e-10;

  auto q = [&](double x) { return hessian_dot(theta, x); };

  const double step = X.width() / (kGrid - 1);
  double qmin = std::numeric_limits<double>::infinity();
  double qmax = -std::numeric_limits<double>::infinity();
  int imin = 0;
  int imax = 0;
  for (int i = 0; i < kGrid; ++i) {
    const double x = (i == kGrid - 1) ? X.hi : X.lo + step * i;
    const double v = q(x);
    if (v < qmin) {
      qmin = v;
      imin = i;
    }
    if (v > qmax) {
      qmax = v;
      imax = i;
    }
  }

  // refine around the grid extremes, bracketing by one cell on each side
  auto bracket = [&](int i, double& a, double& b) {
    a = std::max(X.lo, X.lo + step * (i - 1));
    b = std::min(X.hi, X.lo + step * (i + 1));
  };
  double a, b;
  bracket(imin, a, b);
  qmin = std::min(qmin, golden_min(q, a, b, kXTol));
  bracket(imax, a, b);
  qmax = std::max(qmax, -golden_min([&](double x) { return -q(x); }, a, b, kXTol));

  return bounds.m <= qmin && qmax <= bounds.M;
}

}  // namespace raid
