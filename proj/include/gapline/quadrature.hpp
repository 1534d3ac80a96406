#pragma once

#include <functional>

namespace gapline {

struct QuadratureResult {
  double value = 0.0;
  double est_error = 0.0;
  long evaluations = 0;
  bool converged = false;
};

// Adaptive Gauss-Kronrod (7/15) bisection on [lo,hi] to relative tolerance
// tol. Throws QuadratureError when the subdivision limit (2^20 panels) is
// reached before convergence. initial_panels pre-splits the interval.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double lo, double hi, double tol = 1e-10,
                                    int initial_panels = 1);

// Integral over [0, inf) of f with f(t) = O(t^-2), via the substitution
// t = scale * tan(theta) mapping to [0, pi/2). scale should be the natural
// length of the integrand (callers here pass sqrt(a*b)).
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         double scale, double tol = 1e-10);

// Integral over [lo,hi] of g(x) * w(x) where w carries an inverse-square-root
// singularity at the flagged endpoints: w(x) = (x-lo)^{-1/2} if singular_lo,
// times (hi-x)^{-1/2} if singular_hi. The cosine substitution
// x = mid + halfwidth*cos(theta) absorbs the singular weight; with both ends
// flagged this is the Chebyshev-Gauss form, exact for polynomial g. With one
// end flagged the interval is split at the midpoint and only the singular
// side is substituted.
QuadratureResult integrate_sqrt_singular(const std::function<double(double)>& g,
                                         double lo, double hi, bool singular_lo,
                                         bool singular_hi, double tol = 1e-10);

}  // namespace gapline
