#include "gapline/quadrature.hpp"

#include <cmath>
#include <queue>

#include "gapline/errors.hpp"

namespace gapline {
namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
// Odd-indexed abscissae plus the center are the Gauss nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo, hi;
  double value;      // Kronrod estimate
  double abs_value;  // Kronrod estimate for |f|
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double lo, double hi,
                     long& evaluations) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double kronrod = 0.0, gauss = 0.0, abs_sum = 0.0;
  for (int i = 0; i < 8; ++i) {
    double fsum, fabs_sum;
    if (i == 7) {
      const double fc = f(center);
      ++evaluations;
      fsum = fc;
      fabs_sum = std::abs(fc);
    } else {
      const double x = half * kXgk[i];
      const double f1 = f(center - x);
      const double f2 = f(center + x);
      evaluations += 2;
      fsum = f1 + f2;
      fabs_sum = std::abs(f1) + std::abs(f2);
    }
    kronrod += kWgk[i] * fsum;
    abs_sum += kWgk[i] * fabs_sum;
    if (i % 2 == 1 || i == 7) gauss += kWg[i / 2] * fsum;
  }
  return Panel{lo, hi, kronrod * half, abs_sum * half,
               std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double lo, double hi, double tol,
                                    int initial_panels) {
  if (!(lo < hi)) throw QuadratureError("integrate_adaptive: requires lo < hi");
  if (initial_panels < 1) initial_panels = 1;
  constexpr long kMaxPanels = 1L << 20;

  QuadratureResult res;
  std::priority_queue<Panel> queue;
  double total = 0.0, total_err = 0.0, total_abs = 0.0;
  const double width = (hi - lo) / initial_panels;
  for (int i = 0; i < initial_panels; ++i) {
    Panel p = evaluate_panel(f, lo + i * width, lo + (i + 1) * width, res.evaluations);
    total += p.value;
    total_err += p.error;
    total_abs += p.abs_value;
    queue.push(p);
  }

  long panels = initial_panels;
  // The convergence target is relative to |value|, with a floor tied to the
  // integral of |f| so that integrals that cancel to ~0 still terminate.
  while (total_err > tol * std::max(std::abs(total), 1e-3 * total_abs) &&
         total_err > 0.0) {
    if (panels >= kMaxPanels) {
      throw QuadratureError("integrate_adaptive: subdivision limit reached");
    }
    Panel worst = queue.top();
    queue.pop();
    total -= worst.value;
    total_err -= worst.error;
    total_abs -= worst.abs_value;
    const double mid = 0.5 * (worst.lo + worst.hi);
    for (Panel p : {evaluate_panel(f, worst.lo, mid, res.evaluations),
                    evaluate_panel(f, mid, worst.hi, res.evaluations)}) {
      total += p.value;
      total_err += p.error;
      total_abs += p.abs_value;
      queue.push(p);
    }
    ++panels;
  }
  res.value = total;
  res.est_error = total_err;
  res.converged = true;
  return res;
}

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         double scale, double tol) {
  if (!(scale > 0.0)) throw QuadratureError("integrate_semi_infinite: scale must be positive");
  auto g = [&f, scale](double theta) {
    const double c = std::cos(theta);
    const double t = scale * std::tan(theta);
    return f(t) * scale / (c * c);
  };
  return integrate_adaptive(g, 0.0, M_PI / 2.0, tol);
}

QuadratureResult integrate_sqrt_singular(const std::function<double(double)>& g,
                                         double lo, double hi, bool singular_lo,
                                         bool singular_hi, double tol) {
  if (!(lo < hi)) throw QuadratureError("integrate_sqrt_singular: requires lo < hi");
  if (!singular_lo && !singular_hi) {
    return integrate_adaptive(g, lo, hi, tol);
  }
  if (singular_lo && singular_hi) {
    // x = mid + h cos(theta):  dx * (x-lo)^{-1/2} (hi-x)^{-1/2} = dtheta.
    const double mid = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    auto sub = [&g, mid, h](double theta) { return g(mid + h * std::cos(theta)); };
    return integrate_adaptive(sub, 0.0, M_PI, tol);
  }

  // One singular endpoint: split at the midpoint, substitute on the singular
  // side, integrate the smooth side directly.
  const double mid = 0.5 * (lo + hi);
  QuadratureResult part, rest;
  if (singular_lo) {
    const double c = 0.5 * (lo + mid);
    const double h = 0.5 * (mid - lo);
    // dx (x-lo)^{-1/2} = sqrt(2h) sin(theta/2) dtheta under x = c + h cos(theta).
    auto sub = [&g, c, h](double theta) {
      return g(c + h * std::cos(theta)) * std::sqrt(2.0 * h) * std::sin(0.5 * theta);
    };
    part = integrate_adaptive(sub, 0.0, M_PI, tol);
    rest = integrate_adaptive([&g, lo](double x) { return g(x) / std::sqrt(x - lo); },
                              mid, hi, tol);
  } else {
    const double c = 0.5 * (mid + hi);
    const double h = 0.5 * (hi - mid);
    // dx (hi-x)^{-1/2} = sqrt(2h) cos(theta/2) dtheta under x = c + h cos(theta).
    auto sub = [&g, c, h](double theta) {
      return g(c + h * std::cos(theta)) * std::sqrt(2.0 * h) * std::cos(0.5 * theta);
    };
    part = integrate_adaptive(sub, 0.0, M_PI, tol);
    rest = integrate_adaptive([&g, hi](double x) { return g(x) / std::sqrt(hi - x); },
                              lo, mid, tol);
  }
  part.value += rest.value;
  part.est_error += rest.est_error;
  part.evaluations += rest.evaluations;
  part.converged = part.converged && rest.converged;
  return part;
}

}  // namespace gapline
