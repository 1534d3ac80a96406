#include "gapline/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "gapline/errors.hpp"
#include "gapline/quadrature.hpp"

namespace gapline {
namespace {

// q^e with the q -> 0 limits (0^0 = 1) that show up when an eigenvalue
// ladder collapses onto the gap radius.
double pow_rate(double q, double e) {
  if (q <= 0.0) {
    if (e > 0.0) return 0.0;
    if (e == 0.0) return 1.0;
    return std::numeric_limits<double>::infinity();
  }
  return std::exp(e * std::log(q));
}

// Demko parameters for 1/x on [a,b] shifted by t^2: the t-dependent data of
// the integral representation.
struct RateAt {
  double r, C, q;
};

RateAt demko_at(double a, double b, double t) {
  const double a2 = a * a + t * t;
  const double b2 = b * b + t * t;
  const double r = b2 / a2;
  const double sr = std::sqrt(r);
  return {r, (1.0 + sr) * (1.0 + sr) / (2.0 * b2), (sr - 1.0) / (sr + 1.0)};
}

// Spec'd optimizer: 64-point log-spaced grid over the open interval with the
// endpoints inset by 1e-6 of the interval length, then golden-section
// refinement to relative tolerance 1e-8.
OptBound minimize_on_interval(const std::function<double(double)>& f, double lo,
                              double hi) {
  constexpr int kGrid = 64;
  const double inset = 1e-6 * (hi - lo);
  const double glo = lo + inset;
  const double ghi = hi - inset;
  const double ratio = std::pow(ghi / glo, 1.0 / (kGrid - 1));
  int best_i = 0;
  double best_x = glo, best_v = std::numeric_limits<double>::infinity();
  double x = glo;
  std::vector<double> xs(kGrid), vs(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    xs[i] = x;
    vs[i] = f(x);
    if (vs[i] < best_v) {
      best_v = vs[i];
      best_x = x;
      best_i = i;
    }
    x *= ratio;
  }
  double left = best_i > 0 ? xs[best_i - 1] : glo;
  double right = best_i + 1 < kGrid ? xs[best_i + 1] : ghi;
  // Golden-section on [left,right].
  constexpr double kInvPhi = 0.6180339887498949;
  double c = right - kInvPhi * (right - left);
  double d = left + kInvPhi * (right - left);
  double fc = f(c), fd = f(d);
  while ((right - left) > 1e-8 * std::max(std::abs(left), std::abs(right))) {
    if (fc < fd) {
      right = d;
      d = c;
      fd = fc;
      c = right - kInvPhi * (right - left);
      fc = f(c);
    } else {
      left = c;
      c = d;
      fc = fd;
      d = left + kInvPhi * (right - left);
      fd = f(d);
    }
  }
  const double xm = 0.5 * (left + right);
  const double fm = f(xm);
  if (fm < best_v) return {fm, xm};
  return {best_v, best_x};
}

void require_gap(double a, double b) {
  if (!(a > 0.0) || !(a < b)) throw DomainError("requires 0 < a < b");
}

}  // namespace

double DemkoParams::poly_error(int k) const { return C * pow_rate(q, k + 1.0); }

DemkoParams demko_params(double a, double b) {
  require_gap(a, b);
  DemkoParams p;
  p.r = b / a;
  const double sr = std::sqrt(p.r);
  p.C = (1.0 + sr) * (1.0 + sr) / (2.0 * b);
  p.q = (sr - 1.0) / (sr + 1.0);
  return p;
}

double inverse_bound_demko(double a, double b, int m, int k) {
  if (k < 1) throw ParameterError("inverse_bound_demko: k >= 1 (i != j)");
  const DemkoParams p = demko_params(a, b);
  return p.C * pow_rate(p.q, static_cast<double>(k) / m);
}

double inverse_bound_frommer(std::span<const double> lambda_ascending, int m, int k,
                             int ell) {
  const int n = static_cast<int>(lambda_ascending.size());
  if (n < 1 || !(lambda_ascending[0] > 0.0)) {
    throw DomainError("inverse_bound_frommer: spectrum must be positive");
  }
  if (ell < 0 || ell > k / m || ell > n - 1) {
    throw ParameterError("inverse_bound_frommer: ell out of range");
  }
  const double lam1 = lambda_ascending[0];
  const double lam_top = lambda_ascending[static_cast<std::size_t>(n - 1 - ell)];
  const double sr = std::sqrt(lam_top / lam1);
  const double q = (sr - 1.0) / (sr + 1.0);
  return (2.0 / lam1) * pow_rate(q, static_cast<double>(k) / m - ell);
}

OptBound inverse_bound_frommer_opt(std::span<const double> lambda_ascending, int m,
                                   int k) {
  const int n = static_cast<int>(lambda_ascending.size());
  const int ell_max = std::min(k / m, n - 1);
  OptBound best{std::numeric_limits<double>::infinity(), 0};
  for (int ell = 0; ell <= ell_max; ++ell) {
    const double v = inverse_bound_frommer(lambda_ascending, m, k, ell);
    if (v < best.value) best = {v, static_cast<double>(ell)};
  }
  return best;
}

double inverse_bound_refined(std::span<const double> distinct_ascending, int m, int k,
                             int ell) {
  const int nu = static_cast<int>(distinct_ascending.size());
  if (nu < 1 || !(distinct_ascending[0] > 0.0)) {
    throw DomainError("inverse_bound_refined: spectrum must be positive");
  }
  if (ell < 0 || ell >= nu || ell > k / m) {
    throw ParameterError("inverse_bound_refined: ell out of range");
  }
  const double lam1 = distinct_ascending[0];
  const double lam_top = distinct_ascending[static_cast<std::size_t>(nu - 1 - ell)];
  const double r = lam_top / lam1;
  const double sr = std::sqrt(r);
  const double C = (1.0 + sr) * (1.0 + sr) / (2.0 * lam_top);
  const double q = (sr - 1.0) / (sr + 1.0);
  return C * pow_rate(q, static_cast<double>(k) / m - ell);
}

OptBound inverse_bound_refined_opt(std::span<const double> distinct_ascending, int m,
                                   int k) {
  const int nu = static_cast<int>(distinct_ascending.size());
  const int ell_max = std::min(k / m, nu - 1);
  OptBound best{std::numeric_limits<double>::infinity(), 0};
  for (int ell = 0; ell <= ell_max; ++ell) {
    const double v = inverse_bound_refined(distinct_ascending, m, k, ell);
    if (v < best.value) best = {v, static_cast<double>(ell)};
  }
  return best;
}

double proj_bound_bbr(double a, double b, int m, int k, double xi) {
  require_gap(a, b);
  const double xibar = (b + a) / (b - a);
  if (!(xi > 1.0) || !(xi < xibar)) {
    throw ParameterError("proj_bound_bbr: xi must lie in (1, (b+a)/(b-a))");
  }
  const double bb = b * b, aa = a * a;
  const double z0 = ((bb + aa) / (bb - aa) - (xi * xi + 1.0) / (2.0 * xi)) * (bb - aa) / 2.0;
  if (!(z0 > 0.0)) throw ParameterError("proj_bound_bbr: z0 <= 0 at this xi");
  const double M = 1.0 / std::sqrt(z0);
  return 2.0 * b * xi * M / (xi - 1.0) * pow_rate(1.0 / xi, k / (2.0 * m));
}

OptBound proj_bound_bbr_opt(double a, double b, int m, int k) {
  require_gap(a, b);
  const double xibar = (b + a) / (b - a);
  auto f = [&](double xi) { return proj_bound_bbr(a, b, m, k, xi); };
  return minimize_on_interval(f, 1.0, xibar);
}

double proj_bound_integral(double a, double b, int m, int k) {
  require_gap(a, b);
  const double sr = std::sqrt(b / a);
  const double Chat = 0.25 * (1.0 + sr) * (1.0 + sr);
  const double qhat = (b - a) / (b + a);
  return Chat * pow_rate(qhat, k / (2.0 * m) - 0.5);
}

double sign_bound_integral(double a, double b, int m, int k) {
  return 2.0 * proj_bound_integral(a, b, m, k);
}

double sign_bound_quadrature(double a, double b, int m, int k, double tol) {
  require_gap(a, b);
  if (k < m) throw ParameterError("sign_bound_quadrature: requires k >= m");
  const double alpha = k / (2.0 * m) - 0.5;
  auto integrand = [&](double t) {
    const RateAt d = demko_at(a, b, t);
    return d.C * pow_rate(d.q, alpha);
  };
  QuadratureResult res = integrate_semi_infinite(integrand, std::sqrt(a * b), tol);
  if (!res.converged) throw QuadratureError("sign_bound_quadrature: no convergence");
  return 2.0 * b / M_PI * res.value;
}

double tau_bar(double a, double b) {
  require_gap(a, b);
  const double C1 = 1.0 / (2.0 * a * b);
  const double C2 = (a * a + a * b + b * b) / (8.0 * a * a * a * b * b * b);
  return std::sqrt(C1 / C2);
}

double gaussian_majorant(double a, double b, double tau, double alpha, double t) {
  require_gap(a, b);
  const double C1 = 1.0 / (2.0 * a * b);
  const double C2 = (a * a + a * b + b * b) / (8.0 * a * a * a * b * b * b);
  if (!(tau >= 0.0) || !(tau < std::sqrt(C1 / C2))) {
    throw ParameterError("gaussian_majorant: tau must lie in [0, tau_bar)");
  }
  if (t < 0.0 || t > tau) {
    throw ParameterError("gaussian_majorant: t must lie in [0, tau]");
  }
  const double q0 = (b - a) / (b + a);
  return std::exp(-alpha * t * t * (C1 - tau * tau * C2)) * pow_rate(q0, alpha);
}

double sign_bound_tau(double a, double b, int m, int k, double tau, K2Variant k2) {
  require_gap(a, b);
  const double C1 = 1.0 / (2.0 * a * b);
  const double C2 = (a * a + a * b + b * b) / (8.0 * a * a * a * b * b * b);
  const double tbar = std::sqrt(C1 / C2);
  if (!(tau > 0.0) || !(tau < tbar)) {
    throw ParameterError("sign_bound_tau: tau must lie in (0, tau_bar)");
  }
  if (k <= m) {
    throw ParameterError("sign_bound_tau: defined for k > m (1/sqrt(k/m-1) term)");
  }
  const double alpha = k / (2.0 * m) - 0.5;
  const double K1 = std::sqrt(2.0 / M_PI) * std::pow(1.0 + b / a, 2.0) /
                    std::sqrt(C1 - tau * tau * C2);
  const double sqb = std::sqrt(b / a);
  const double K2 = (k2 == K2Variant::proof) ? 0.5 * (1.0 + sqb) * (1.0 + sqb)
                                             : 0.5 * std::sqrt(1.0 + sqb);
  const double q0 = (b - a) / (b + a);
  const RateAt at_tau = demko_at(a, b, tau);
  return K1 / std::sqrt(static_cast<double>(k) / m - 1.0) * pow_rate(q0, alpha) +
         K2 * pow_rate(at_tau.q, alpha);
}

double proj_bound_tau(double a, double b, int m, int k, double tau, K2Variant k2) {
  if (k <= m) return 1.0;  // bound exceeds the projector cap there
  return 0.5 * sign_bound_tau(a, b, m, k, tau, k2);
}

OptBound proj_bound_tau_opt(double a, double b, int m, int k, K2Variant k2) {
  require_gap(a, b);
  if (k <= m) return {1.0, 0.0};
  const double tbar = tau_bar(a, b);
  auto f = [&](double tau) { return proj_bound_tau(a, b, m, k, tau, k2); };
  return minimize_on_interval(f, 0.0, tbar);
}

double sign_bound_sl(const EigenvalueLadder& ladder, double a, int m, int k, int ell) {
  const int nu = ladder.nu();
  const int ell_max = static_cast<int>(std::floor(k / (2.0 * m) - 0.5));
  if (ell < 0 || ell > ell_max || ell >= nu) {
    throw ParameterError("sign_bound_sl: ell out of range");
  }
  const double bl = ladder.b_ell(ell);
  if (!(a > 0.0) || bl < a) throw DomainError("sign_bound_sl: requires 0 < a <= b_ell");
  const double qhat = (bl - a) / (bl + a);
  const double sr = std::sqrt(bl / a);
  const double Chat = 0.5 * (1.0 + sr) * (1.0 + sr);
  return Chat * pow_rate(qhat, k / (2.0 * m) - 0.5 - ell);
}

double proj_bound_sl(const EigenvalueLadder& ladder, double a, int m, int k, int ell) {
  return 0.5 * sign_bound_sl(ladder, a, m, k, ell);
}

OptBound proj_bound_sl_opt(const EigenvalueLadder& ladder, double a, int m, int k) {
  const int ell_max =
      std::min(static_cast<int>(std::floor(k / (2.0 * m) - 0.5)), ladder.nu() - 1);
  if (ell_max < 0) return {1.0, 0.0};  // no admissible ell below k = m
  OptBound best{std::numeric_limits<double>::infinity(), 0};
  for (int ell = 0; ell <= ell_max; ++ell) {
    const double v = proj_bound_sl(ladder, a, m, k, ell);
    if (v < best.value) best = {v, static_cast<double>(ell)};
  }
  return best;
}

double hasson_rate(double a, double b, int m, int k) {
  require_gap(a, b);
  if (k <= m) throw DomainError("hasson_rate: defined for k > m");
  const double qhat = (b - a) / (b + a);
  return pow_rate(qhat, k / (2.0 * m) - 0.5) / std::sqrt(static_cast<double>(k) / m - 1.0);
}

FuchsRate fuchs_rate(double a, double b1, double b2, double tol) {
  if (!(a > 0.0) || !(a < std::min(b1, b2))) {
    throw DomainError("fuchs_rate: requires 0 < a < min(b1,b2)");
  }
  const double c1 = b1 / a;
  const double c2 = b2 / a;
  // The product (1-x^2)(x+c1)(x-c2) is negative on (-1,1); the integrals use
  // its absolute value (1-x^2)(x+c1)(c2-x), validated by the symmetric case.
  auto smooth = [c1, c2](double x) { return 1.0 / std::sqrt((x + c1) * (c2 - x)); };

  const double qtol = tol / 10.0;
  QuadratureResult denom = integrate_sqrt_singular(smooth, -1.0, 1.0, true, true, qtol);
  QuadratureResult numer = integrate_sqrt_singular(
      [&smooth](double x) { return x * smooth(x); }, -1.0, 1.0, true, true, qtol);
  if (!denom.converged || !numer.converged) {
    throw QuadratureError("fuchs_rate: K integrals did not converge");
  }
  FuchsRate out;
  out.K = numer.value / denom.value;
  out.K_err = (numer.est_error + std::abs(out.K) * denom.est_error) / std::abs(denom.value);

  const double K = out.K;
  // eta = int_{-1}^{K} (K-x) w(x) dx, singular only at x = -1; the (1-x)
  // factor of the weight is smooth on [-1,K] and stays with the integrand.
  auto g_eta = [&, K](double x) {
    return (K - x) / std::sqrt((1.0 - x) * (x + c1) * (c2 - x));
  };
  QuadratureResult eta = integrate_sqrt_singular(g_eta, -1.0, K, true, false, qtol);
  if (!eta.converged) throw QuadratureError("fuchs_rate: eta integral did not converge");
  out.eta = eta.value;
  // d(eta)/dK = int_{-1}^{K} w dx propagates the K uncertainty.
  auto w_only = [&](double x) {
    return 1.0 / std::sqrt((1.0 - x) * (x + c1) * (c2 - x));
  };
  QuadratureResult deta = integrate_sqrt_singular(w_only, -1.0, K, true, false, 1e-8);
  out.eta_err = eta.est_error + std::abs(deta.value) * out.K_err;
  return out;
}

std::string family_name(BoundFamily f) {
  switch (f) {
    case BoundFamily::B1_bbr: return "B1_bbr";
    case BoundFamily::B2_integral: return "B2_integral";
    case BoundFamily::B3_tau: return "B3_tau";
    case BoundFamily::B_quadrature: return "B_quadrature";
    case BoundFamily::B_SL: return "B_SL";
    case BoundFamily::inv_demko: return "inv_demko";
    case BoundFamily::inv_frommer: return "inv_frommer";
    case BoundFamily::inv_refined: return "inv_refined";
    case BoundFamily::rate_hasson: return "rate_hasson";
    case BoundFamily::rate_fuchs: return "rate_fuchs";
  }
  return "unknown";
}

std::optional<BoundFamily> family_from_name(const std::string& name) {
  for (BoundFamily f :
       {BoundFamily::B1_bbr, BoundFamily::B2_integral, BoundFamily::B3_tau,
        BoundFamily::B_quadrature, BoundFamily::B_SL, BoundFamily::inv_demko,
        BoundFamily::inv_frommer, BoundFamily::inv_refined, BoundFamily::rate_hasson,
        BoundFamily::rate_fuchs}) {
    if (family_name(f) == name) return f;
  }
  // Short aliases used on the command line.
  if (name == "B1") return BoundFamily::B1_bbr;
  if (name == "B2") return BoundFamily::B2_integral;
  if (name == "B3") return BoundFamily::B3_tau;
  if (name == "Bq" || name == "quadrature") return BoundFamily::B_quadrature;
  if (name == "BSL" || name == "SL") return BoundFamily::B_SL;
  return std::nullopt;
}

namespace {

bool is_projector_family(BoundFamily f) {
  switch (f) {
    case BoundFamily::B1_bbr:
    case BoundFamily::B2_integral:
    case BoundFamily::B3_tau:
    case BoundFamily::B_SL:
      return true;
    default:
      return false;
  }
}

}  // namespace

BoundCurve evaluate_curve(BoundFamily family, const BoundContext& ctx, int k_lo,
                          int k_hi) {
  if (k_lo < 0 || k_hi < k_lo) throw ParameterError("evaluate_curve: bad k range");
  const double a = ctx.spec.a;
  const double b = ctx.spec.b;
  const int m = ctx.m;
  BoundCurve curve;
  curve.family = family;

  switch (family) {
    case BoundFamily::B2_integral: {
      const double sr = std::sqrt(b / a);
      curve.params["C_hat"] = 0.25 * (1.0 + sr) * (1.0 + sr);
      curve.params["q_hat"] = (b - a) / (b + a);
      break;
    }
    case BoundFamily::B1_bbr:
      curve.params["xi_bar"] = (b + a) / (b - a);
      break;
    case BoundFamily::B3_tau: {
      curve.params["C1"] = 1.0 / (2.0 * a * b);
      curve.params["C2"] = (a * a + a * b + b * b) / (8.0 * a * a * a * b * b * b);
      curve.params["tau_bar"] = tau_bar(a, b);
      curve.params["K2_proof_variant"] = ctx.k2 == K2Variant::proof ? 1.0 : 0.0;
      break;
    }
    case BoundFamily::inv_demko: {
      const DemkoParams p = demko_params(a, b);
      curve.params["r"] = p.r;
      curve.params["C"] = p.C;
      curve.params["q"] = p.q;
      break;
    }
    case BoundFamily::rate_fuchs: {
      const FuchsRate fr = fuchs_rate(a, ctx.spec.b1, ctx.spec.b2, ctx.tol);
      curve.params["eta"] = fr.eta;
      curve.params["K"] = fr.K;
      break;
    }
    default:
      break;
  }

  for (int k = k_lo; k <= k_hi; ++k) {
    BoundPoint pt;
    pt.k = k;
    switch (family) {
      case BoundFamily::B1_bbr: {
        OptBound ob = proj_bound_bbr_opt(a, b, m, k);
        pt.raw = ob.value;
        pt.param = ob.param;
        pt.has_param = true;
        break;
      }
      case BoundFamily::B2_integral:
        pt.raw = proj_bound_integral(a, b, m, k);
        break;
      case BoundFamily::B3_tau: {
        if (k <= m) {
          pt.raw = std::numeric_limits<double>::infinity();
        } else {
          OptBound ob = proj_bound_tau_opt(a, b, m, k, ctx.k2);
          pt.raw = ob.value;
          pt.param = ob.param;
          pt.has_param = true;
        }
        break;
      }
      case BoundFamily::B_quadrature:
        pt.raw = k < m ? std::numeric_limits<double>::infinity()
                       : sign_bound_quadrature(a, b, m, k, ctx.tol);
        break;
      case BoundFamily::B_SL: {
        if (!ctx.ladder) throw ParameterError("B_SL curve needs an eigenvalue ladder");
        OptBound ob = proj_bound_sl_opt(*ctx.ladder, a, m, k);
        pt.raw = ob.value;
        pt.param = ob.param;
        pt.has_param = k >= m;
        break;
      }
      case BoundFamily::inv_demko:
        pt.raw = k >= 1 ? inverse_bound_demko(a, b, m, k)
                        : std::numeric_limits<double>::infinity();
        break;
      case BoundFamily::inv_frommer: {
        if (!ctx.lambdas) throw ParameterError("inv_frommer curve needs eigenvalues");
        OptBound ob = inverse_bound_frommer_opt(*ctx.lambdas, m, k);
        pt.raw = ob.value;
        pt.param = ob.param;
        pt.has_param = true;
        break;
      }
      case BoundFamily::inv_refined: {
        if (!ctx.ladder) throw ParameterError("inv_refined curve needs a ladder");
        OptBound ob = inverse_bound_refined_opt(ctx.ladder->mags, m, k);
        pt.raw = ob.value;
        pt.param = ob.param;
        pt.has_param = true;
        break;
      }
      case BoundFamily::rate_hasson:
        pt.raw = k > m ? hasson_rate(a, b, m, k)
                       : std::numeric_limits<double>::infinity();
        break;
      case BoundFamily::rate_fuchs: {
        const double eta = curve.params["eta"];
        // Shape with constants normalized to 1: k^{-1/2} e^{-eta k / m} per
        // polynomial degree k/m (one matrix power spans m diagonals).
        const double deg = static_cast<double>(k) / m;
        pt.raw = deg > 0 ? std::exp(-eta * deg) / std::sqrt(deg)
                         : std::numeric_limits<double>::infinity();
        break;
      }
    }
    pt.capped = is_projector_family(family) ? std::min(1.0, pt.raw) : pt.raw;
    curve.points.push_back(pt);
  }
  return curve;
}

}  // namespace gapline
