#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gapline/spectrum.hpp"

namespace gapline {

// Chebyshev best-approximation data for 1/x on [a,b]:
// E_k(1/x,[a,b]) = C q^{k+1}.
struct DemkoParams {
  double r = 0.0;
  double C = 0.0;
  double q = 0.0;

  double poly_error(int k) const;  // C q^{k+1}
};

DemkoParams demko_params(double a, double b);

// |A^{-1}_ij| <= C q^{k/m} for SPD m-banded A with spectrum in [a,b], k=|i-j|.
double inverse_bound_demko(double a, double b, int m, int k);

// Result of a parameter-optimized bound evaluation; param is the chosen
// xi / tau / ell depending on the family.
struct OptBound {
  double value = 0.0;
  double param = 0.0;
};

// Effective-condition-number family for the inverse (full spectrum list,
// ascending, multiplicities allowed): C q_ell^{k/m - ell}, C = 2/lambda_1.
double inverse_bound_frommer(std::span<const double> lambda_ascending, int m, int k,
                             int ell);
OptBound inverse_bound_frommer_opt(std::span<const double> lambda_ascending, int m,
                                   int k);

// Refined family over distinct eigenvalues: C_ell q_ell^{k/m - ell} with
// C_ell = (1+sqrt(r_ell))^2 / (2 lambda_{nu-ell}).
double inverse_bound_refined(std::span<const double> distinct_ascending, int m, int k,
                             int ell);
OptBound inverse_bound_refined_opt(std::span<const double> distinct_ascending, int m,
                                   int k);

// B1: xi-parametrized projector bound, and its per-k optimization over
// xi in (1, (b+a)/(b-a)).
double proj_bound_bbr(double a, double b, int m, int k, double xi);
OptBound proj_bound_bbr_opt(double a, double b, int m, int k);

// B2: single closed-form projector bound C_hat q_hat^{k/(2m)-1/2}.
double proj_bound_integral(double a, double b, int m, int k);
double sign_bound_integral(double a, double b, int m, int k);  // 2x

// Integral-representation sign bound evaluated by quadrature,
// (2b/pi) * int_0^inf C(t) q(t)^{k/(2m)-1/2} dt, for k >= m.
double sign_bound_quadrature(double a, double b, int m, int k, double tol = 1e-10);

// Gaussian majorant of q(t)^alpha on [0,tau]; tau < tau_bar = sqrt(C1/C2).
double gaussian_majorant(double a, double b, double tau, double alpha, double t);
double tau_bar(double a, double b);

// K2 as printed in the theorem, 0.5*(1+sqrt(b/a))^{1/2}, or the larger value
// 0.5*(1+sqrt(b/a))^2 its proof actually derives. The proof version is the
// safe majorant and is the default.
enum class K2Variant { proof, printed };

// B3: two-term tau-parametrized projector bound and its optimization over
// tau in (0, tau_bar). k = m returns the cap 1; k < m returns 1.
double proj_bound_tau(double a, double b, int m, int k, double tau,
                      K2Variant k2 = K2Variant::proof);
OptBound proj_bound_tau_opt(double a, double b, int m, int k,
                            K2Variant k2 = K2Variant::proof);
double sign_bound_tau(double a, double b, int m, int k, double tau,
                      K2Variant k2 = K2Variant::proof);

// Spectrum-aware ell family: C_hat_ell q_hat_ell^{k/(2m)-1/2-ell} with
// b_ell = mu_{nu-ell}; optimizer is exhaustive over the admissible range
// ell <= floor(k/(2m)-1/2), ell < nu.
double proj_bound_sl(const EigenvalueLadder& ladder, double a, int m, int k, int ell);
OptBound proj_bound_sl_opt(const EigenvalueLadder& ladder, double a, int m, int k);
double sign_bound_sl(const EigenvalueLadder& ladder, double a, int m, int k, int ell);

// Asymptotic shape (k/m-1)^{-1/2} q_hat^{k/(2m)-1/2}; the unknown constant
// is normalized to 1. Defined for k > m.
double hasson_rate(double a, double b, int m, int k);

// Asymptotic rate of best sign approximation on [-b1,-a] u [a,b2].
struct FuchsRate {
  double eta = 0.0;
  double K = 0.0;
  double eta_err = 0.0;
  double K_err = 0.0;
};
FuchsRate fuchs_rate(double a, double b1, double b2, double tol = 1e-10);

// ---- Curve evaluation over a k grid ----

enum class BoundFamily {
  B1_bbr,
  B2_integral,
  B3_tau,
  B_quadrature,
  B_SL,
  inv_demko,
  inv_frommer,
  inv_refined,
  rate_hasson,
  rate_fuchs,
};

std::string family_name(BoundFamily f);
std::optional<BoundFamily> family_from_name(const std::string& name);

struct BoundPoint {
  int k = 0;
  double raw = 0.0;     // exact formula evaluation (pre-cap)
  double capped = 0.0;  // min(1, raw) for projector families, else raw
  double param = 0.0;   // xi* / tau* / ell* at this k
  bool has_param = false;
};

struct BoundCurve {
  BoundFamily family = BoundFamily::B2_integral;
  std::map<std::string, double> params;  // constants record (r, C, q, ...)
  std::vector<BoundPoint> points;
};

// Everything a family evaluation may need.
struct BoundContext {
  SpectrumSpec spec;                     // a, b (and b1/b2 for rate_fuchs)
  std::optional<EigenvalueLadder> ladder;  // for B_SL / inv_refined
  std::optional<std::vector<double>> lambdas;  // for inv_frommer
  int m = 1;
  double tol = 1e-10;
  K2Variant k2 = K2Variant::proof;
};

// Evaluate one family on k = k_lo .. k_hi. Projector families are capped at
// 1 (both values stored). B_quadrature is the sign-function bound; divide by
// 2 when comparing against a projector decay profile.
BoundCurve evaluate_curve(BoundFamily family, const BoundContext& ctx, int k_lo,
                          int k_hi);

}  // namespace gapline
