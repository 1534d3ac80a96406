#include "gapline/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "gapline/errors.hpp"

namespace gapline {

SpectrumSpec SpectrumSpec::symmetric(double a_in, double b_in) {
  if (!(a_in > 0.0) || !(a_in < b_in)) {
    throw GapGeometryError("symmetric spectrum requires 0 < a < b");
  }
  SpectrumSpec s;
  s.a = a_in;
  s.b = b_in;
  s.b1 = b_in;
  s.b2 = b_in;
  s.mu = 0.0;
  return s;
}

SpectrumSpec normalize_spectrum(double b1_raw, double a1, double a2, double b2_raw,
                                double mu_raw, bool scale_to_unit) {
  if (a2 == a1) {
    throw VanishingGapError("vanishing spectral gap: a2 == a1");
  }
  if (!(b1_raw < a1) || !(a1 < mu_raw) || !(mu_raw < a2) || !(a2 < b2_raw)) {
    throw GapGeometryError("spectrum endpoints must satisfy b1 < a1 < mu < a2 < b2");
  }
  const double shift = -(a2 + a1) / 2.0;
  double scale = 1.0;
  if (scale_to_unit) {
    const double radius = std::max(-(b1_raw + shift), b2_raw + shift);
    scale = 1.0 / radius;
  }
  SpectrumSpec s;
  s.affine.scale = scale;
  s.affine.shift = scale * shift;
  s.a = s.affine.apply(a2);
  s.b1 = -s.affine.apply(b1_raw);
  s.b2 = s.affine.apply(b2_raw);
  s.b = std::max(s.b1, s.b2);
  s.mu = 0.0;
  return s;
}

double EigenvalueLadder::b_ell(int ell) const {
  if (ell < 0 || ell >= nu()) {
    throw ParameterError("b_ell: ell must lie in 0..nu-1");
  }
  return mags[static_cast<std::size_t>(nu() - 1 - ell)];
}

EigenvalueLadder distinct_magnitudes(std::span<const double> eigenvalues,
                                     double tol_cluster, double min_magnitude) {
  if (eigenvalues.empty()) {
    throw SpectrumViolationError("distinct_magnitudes: empty eigenvalue list");
  }
  std::vector<double> mags(eigenvalues.size());
  int n_e = 0;
  double max_mag = 0.0;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    const double lam = eigenvalues[i];
    if (lam < 0.0) ++n_e;
    mags[i] = std::abs(lam);
    max_mag = std::max(max_mag, mags[i]);
  }
  if (min_magnitude > 0.0) {
    const double floor = min_magnitude * (1.0 - 1e-12);
    for (double m : mags) {
      if (m < floor) {
        throw SpectrumViolationError("eigenvalue magnitude below the inner gap radius");
      }
    }
  }
  if (max_mag == 0.0) {
    throw SpectrumViolationError("all eigenvalues are zero");
  }
  std::sort(mags.begin(), mags.end());

  EigenvalueLadder ladder;
  ladder.tol_cluster = tol_cluster;
  ladder.n_e = n_e;
  const double gap_tol = tol_cluster * max_mag;
  // One pass: a new cluster opens when the gap to the previous representative
  // exceeds the tolerance; the representative is the cluster maximum.
  for (double m : mags) {
    if (!ladder.mags.empty() && m - ladder.mags.back() <= gap_tol) {
      if (m != ladder.mags.back()) ladder.merged_any = true;
      ladder.mags.back() = m;  // keep the maximum
      ++ladder.mults.back();
    } else {
      ladder.mags.push_back(m);
      ladder.mults.push_back(1);
    }
  }
  return ladder;
}

std::string to_key_values(const SpectrumSpec& spec) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "a = %.17g\nb = %.17g\nb1 = %.17g\nb2 = %.17g\nmu = %.17g\n"
                "scale = %.17g\nshift = %.17g\n",
                spec.a, spec.b, spec.b1, spec.b2, spec.mu, spec.affine.scale,
                spec.affine.shift);
  return buf;
}

SpectrumSpec spectrum_from_key_values(const std::string& text) {
  std::map<std::string, double> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
    if (key.empty() || key[0] == '#') continue;
    kv[key] = std::strtod(line.c_str() + eq + 1, nullptr);
  }
  SpectrumSpec s;
  auto need = [&](const char* k) {
    auto it = kv.find(k);
    if (it == kv.end()) throw GapGeometryError(std::string("missing spectrum key: ") + k);
    return it->second;
  };
  s.a = need("a");
  s.b = need("b");
  s.b1 = kv.count("b1") ? kv["b1"] : s.b;
  s.b2 = kv.count("b2") ? kv["b2"] : s.b;
  s.mu = kv.count("mu") ? kv["mu"] : 0.0;
  s.affine.scale = kv.count("scale") ? kv["scale"] : 1.0;
  s.affine.shift = kv.count("shift") ? kv["shift"] : 0.0;
  if (!(s.a > 0.0) || !(s.a < std::min(s.b1, s.b2))) {
    throw GapGeometryError("spectrum block violates 0 < a < min(b1,b2)");
  }
  return s;
}

}  // namespace gapline
