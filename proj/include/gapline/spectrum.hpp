#pragma once

#include <span>
#include <string>
#include <vector>

namespace gapline {

// x -> scale * x + shift, the normalization applied to a Hermitian matrix
// (H~ = scale * H + shift * I) so that the spectral gap is centered at 0.
struct AffineMap {
  double scale = 1.0;
  double shift = 0.0;

  double apply(double x) const { return scale * x + shift; }
  double invert(double y) const { return (y - shift) / scale; }
};

// Gap geometry of a Hermitian spectrum contained in [-b1,-a] u [a,b2] after
// normalization. b is the symmetric outer radius max(b1,b2).
struct SpectrumSpec {
  double a = 0.0;
  double b = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double mu = 0.0;  // 0 after normalization
  AffineMap affine;

  // Relative gap (a2-a1)/(b2-b1) of the original intervals; diagnostic only.
  double relative_gap() const { return 2.0 * a / (b1 + b2); }

  // Symmetric spectrum [-b,-a] u [a,b] with identity normalization.
  static SpectrumSpec symmetric(double a_in, double b_in);
};

// Normalize raw interval data [b1_raw,a1] u [a2,b2_raw] with Fermi level
// mu_raw inside the gap. The shift d = -(a2+a1)/2 centers the gap at 0;
// scale stays 1 unless scale_to_unit is set, in which case the outer radius
// is mapped to 1.
SpectrumSpec normalize_spectrum(double b1_raw, double a1, double a2, double b2_raw,
                                double mu_raw, bool scale_to_unit = false);

// Distinct magnitudes mu_1 < ... < mu_nu of a Hermitian spectrum with
// multiplicities; feeds the spectrum-aware bound families through
// b_ell = mu_{nu-ell}.
struct EigenvalueLadder {
  std::vector<double> mags;   // ascending, strictly separated
  std::vector<int> mults;     // multiplicity per magnitude
  int n_e = 0;                // number of negative eigenvalues
  double tol_cluster = 0.0;   // relative merge tolerance actually used
  bool merged_any = false;    // set when the tolerance merge collapsed values

  int nu() const { return static_cast<int>(mags.size()); }

  // b_ell = mu_{nu - ell}; valid for ell = 0 .. nu-1.
  double b_ell(int ell) const;
};

// Build the ladder from raw eigenvalues. Magnitudes closer than
// tol_cluster * max|lambda| are merged (the paper assumes exactly distinct
// values; floating point input needs a tolerance). The cluster
// representative is the cluster maximum so the induced bounds stay valid.
// If min_magnitude > 0, any |lambda| < min_magnitude*(1-1e-12) raises
// SpectrumViolationError.
EigenvalueLadder distinct_magnitudes(std::span<const double> eigenvalues,
                                     double tol_cluster = 1e-10,
                                     double min_magnitude = 0.0);

// Flat key/value block (keys a, b, b1, b2, mu, scale, shift) used inside the
// CLI config format.
std::string to_key_values(const SpectrumSpec& spec);
SpectrumSpec spectrum_from_key_values(const std::string& text);

}  // namespace gapline
