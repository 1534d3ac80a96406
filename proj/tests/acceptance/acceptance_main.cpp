// Acceptance suite: runs every acceptance criterion end to end and prints
// one [PASS]/[FAIL] line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gapline/bounds.hpp"
#include "gapline/errors.hpp"
#include "gapline/quadrature.hpp"
#include "gapline/experiment.hpp"
#include "gapline/io.hpp"
#include "gapline/matrix_factory.hpp"
#include "gapline/projector.hpp"
#include "highprec.hpp"

using namespace gapline;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct TestMatrix {
  int n;
  int m;
  double a;
  std::uint64_t seed;
  BandedHermitian H;
  Matrix P;                    // double-precision projector
  DecayProfile decay;          // mp-measured for m = 1, double otherwise
  bool mp_measured = false;
};

std::vector<double> grid_spectrum(int n, double a) {
  ExperimentConfig cfg;
  cfg.intervals = {{-1.0, -a, n / 2}, {a, 1.0, n - n / 2}};
  return build_eigenvalues(cfg);
}

// The 20 seeded acceptance matrices: every (n, m, a) combination of the
// criterion grid once, plus extra seeds on the first eight combinations.
std::vector<TestMatrix> build_fixtures() {
  std::vector<TestMatrix> fixtures;
  const int ns[] = {100, 300};
  const int ms[] = {1, 5, 20};
  const double as[] = {0.1, 0.3};
  int index = 0;
  for (int n : ns) {
    for (int m : ms) {
      for (double a : as) {
        TestMatrix t;
        t.n = n;
        t.m = m;
        t.a = a;
        t.seed = 1000 + static_cast<std::uint64_t>(index++);
        fixtures.push_back(std::move(t));
      }
    }
  }
  for (int i = 0; i < 8; ++i) {
    TestMatrix t = fixtures[static_cast<std::size_t>(i)];
    t.seed += 100;
    fixtures.push_back(std::move(t));
  }
  for (TestMatrix& t : fixtures) {
    std::vector<double> eigs = grid_spectrum(t.n, t.a);
    Vector lam = Eigen::Map<const Vector>(eigs.data(), t.n);
    t.H = generate<double>(lam, t.m, t.seed);
    t.P = spectral_projector(t.H, 0.0);
  }
  return fixtures;
}

// Decay measurement for criterion 2: multiprecision for the tridiagonal
// fixtures (their bounds decay below the double-precision roundoff floor of
// a computed projector), double for the rest.
void measure_decay(std::vector<TestMatrix>& fixtures) {
  for (TestMatrix& t : fixtures) {
    if (t.m == 1) {
      t.decay = testing::mp_tridiag_projector_decay(t.H.data, 0.0);
      t.mp_measured = true;
    } else {
      t.decay = decay_profile(t.P, "projector");
    }
  }
}

void criterion1(const std::vector<TestMatrix>& fixtures, double build_seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream detail;
  bool pass = fixtures.size() == 20;
  for (const TestMatrix& t : fixtures) {
    const double idem = (t.P * t.P - t.P).norm();
    const double herm = (t.P - t.P.transpose()).cwiseAbs().maxCoeff();
    const long trace = std::llround(t.P.trace());
    const bool ok = idem <= 1e-10 * t.n && herm == 0.0 && trace == t.n / 2;
    if (!ok) {
      pass = false;
      detail << " violation at (n=" << t.n << ",m=" << t.m << ",a=" << t.a
             << "): idem=" << idem << " herm=" << herm << " trace=" << trace;
    }
  }
  const double elapsed = build_seconds + seconds_since(t0);
  if (elapsed >= 60.0) {
    pass = false;
    detail << " runtime " << elapsed << "s >= 60s";
  }
  std::ostringstream msg;
  msg << "projector correctness on 20 seeded matrices (" << elapsed << " s)"
      << detail.str();
  report(1, pass, msg.str());
}

void criterion2(const std::vector<TestMatrix>& fixtures) {
  // Bound tables per (n, m, a) combination; fixtures sharing a combination
  // share spectra (only the orthogonal basis depends on the seed).
  struct ComboKey {
    int n, m;
    double a;
    bool operator<(const ComboKey& o) const {
      return std::tie(n, m, a) < std::tie(o.n, o.m, o.a);
    }
  };
  struct ComboBounds {
    std::vector<double> min_bound;  // per k: min over the five capped families
  };
  std::map<ComboKey, ComboBounds> cache;
  for (const TestMatrix& t : fixtures) {
    const ComboKey key{t.n, t.m, t.a};
    if (cache.count(key)) continue;
    std::vector<double> eigs(t.H.eigenvalues->data(), t.H.eigenvalues->data() + t.n);
    const EigenvalueLadder ladder = distinct_magnitudes(eigs, 1e-10, t.a);
    ComboBounds cb;
    cb.min_bound.assign(static_cast<std::size_t>(t.n), 1.0);
    for (int k = t.m; k < t.n; ++k) {
      const double b1 = proj_bound_bbr_opt(t.a, 1.0, t.m, k).value;
      const double b2 = proj_bound_integral(t.a, 1.0, t.m, k);
      const double b3 = proj_bound_tau_opt(t.a, 1.0, t.m, k).value;
      const double bq = 0.5 * sign_bound_quadrature(t.a, 1.0, t.m, k, 1e-10);
      const double bsl = proj_bound_sl_opt(ladder, t.a, t.m, k).value;
      cb.min_bound[static_cast<std::size_t>(k)] =
          std::min(1.0, std::min({b1, b2, b3, bq, bsl}));
    }
    cache.emplace(key, std::move(cb));
  }

  long violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  std::ostringstream first;
  for (const TestMatrix& t : fixtures) {
    const ComboBounds& cb = cache.at(ComboKey{t.n, t.m, t.a});
    for (int k = t.m; k < t.n; ++k) {
      const double d = t.decay.values[static_cast<std::size_t>(k)];
      const double b = cb.min_bound[static_cast<std::size_t>(k)];
      if (d > b) {
        if (violations == 0) {
          first << " first: (n=" << t.n << ",m=" << t.m << ",a=" << t.a
                << ") k=" << k << " D=" << d << " bound=" << b;
        }
        ++violations;
      } else if (d > 0.0) {
        min_margin = std::min(min_margin, b / d);
      }
    }
  }
  std::ostringstream msg;
  msg << "bound validity D_P(k) <= min(1,B(k)) for all five families, all k >= m: "
      << violations << " violations, min bound/decay margin " << min_margin << "x"
      << first.str() << " (m=1 profiles measured at 100 digits)";
  report(2, violations == 0, msg.str());
}

void criterion3() {
  const double a = 0.3, b = 1.0;
  const int m = 20;
  int bad32 = 0, bad21 = 0, first32 = -1, last32 = -1;
  double worst_ratio = 1.0;
  for (int k = 2 * m; k <= 2000; ++k) {
    const double c1 = std::min(1.0, proj_bound_bbr_opt(a, b, m, k).value);
    const double c2 = std::min(1.0, proj_bound_integral(a, b, m, k));
    const double c3 = std::min(1.0, proj_bound_tau_opt(a, b, m, k).value);
    if (c3 > c2 * (1.0 + 1e-12)) {
      if (first32 < 0) first32 = k;
      last32 = k;
      ++bad32;
      worst_ratio = std::max(worst_ratio, c3 / c2);
    }
    if (c2 > c1 * (1.0 + 1e-12)) ++bad21;
  }
  std::ostringstream msg;
  msg << "bound ordering B3_opt <= B2 <= B1_opt for k in [2m,2000]: ";
  if (bad32 == 0 && bad21 == 0) {
    msg << "holds";
  } else {
    msg << "B3_opt>B2 at " << bad32 << " k values";
    if (bad32 > 0) {
      msg << " (k in [" << first32 << "," << last32 << "], worst B3/B2 = "
          << worst_ratio << ")";
    }
    msg << ", B2>B1_opt at " << bad21
        << "; the printed two-term constants exceed the single closed form near "
           "the cap crossover, so the figure's strict ordering is unattainable "
           "there (see ledger)";
  }
  report(3, bad32 == 0 && bad21 == 0, msg.str());
}

void criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  const double a = 0.3, b = 1.0;
  const int m = 20;
  BoundContext ctx;
  ctx.spec = SpectrumSpec::symmetric(a, b);
  ctx.m = m;
  const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};

  auto thresholds = [&](BoundFamily f) {
    BoundCurve c = evaluate_curve(f, ctx, 0, 1400);
    std::vector<double> capped;
    for (const BoundPoint& p : c.points) capped.push_back(p.capped);
    std::vector<int> out;
    for (double e : eps) out.push_back(first_below(capped, e));
    return out;
  };
  const std::vector<int> m1 = thresholds(BoundFamily::B1_bbr);
  const std::vector<int> m2 = thresholds(BoundFamily::B2_integral);
  const std::vector<int> m3 = thresholds(BoundFamily::B3_tau);

  const int table1_m1[] = {419, 577, 733, 887, 1041};
  const int table1_m2[] = {270, 419, 568, 717, 865};
  const int table1_m3[] = {218, 347, 483, 623, 764};
  bool pass = true;
  std::ostringstream detail;
  auto check_increments = [&](const char* name, const std::vector<int>& ours,
                              const int (&table)[5]) {
    detail << " " << name << "=(";
    for (std::size_t i = 0; i < ours.size(); ++i) detail << (i ? "," : "") << ours[i];
    detail << ")";
    for (int i = 0; i < 4; ++i) {
      const int inc = ours[static_cast<std::size_t>(i + 1)] - ours[static_cast<std::size_t>(i)];
      const int ref = table[i + 1] - table[i];
      if (std::abs(inc - ref) > 10) {
        pass = false;
        detail << " [" << name << " decade " << i + 1 << ": " << inc << " vs table "
               << ref << "]";
      }
    }
  };
  check_increments("m1", m1, table1_m1);
  check_increments("m2", m2, table1_m2);
  check_increments("m3", m3, table1_m3);
  const double elapsed = seconds_since(t0);
  if (elapsed >= 10.0) {
    pass = false;
    detail << " runtime " << elapsed << "s >= 10s";
  }
  std::ostringstream msg;
  msg << "table-1 per-decade increments within +-10 (absolute offsets reported, "
         "not asserted):"
      << detail.str() << " (" << elapsed << " s)";
  report(4, pass, msg.str());
}

void criterion5() {
  // fig1 preset scaled to n = 600 (bounds are n-independent).
  const int n = 600, m = 20;
  std::vector<double> eigs = grid_spectrum(n, 0.3);
  Vector lam = Eigen::Map<const Vector>(eigs.data(), n);
  BandedHermitian H = generate<double>(lam, m, 1);
  Matrix P = spectral_projector(H, 0.0);
  DecayProfile d = decay_profile(P, "projector");

  bool pass = true;
  std::ostringstream detail;
  detail << " m_P = (";
  const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  for (std::size_t i = 0; i < eps.size(); ++i) {
    int mp = -1;
    try {
      mp = truncation_bandwidth(d.values, eps[i]);
    } catch (const ThresholdNotReachedError&) {
      pass = false;
      detail << (i ? "," : "") << "unreached";
      continue;
    }
    detail << (i ? "," : "") << mp;
    if (mp % m != 0) {
      pass = false;
      detail << "[not a multiple of " << m << "]";
    }
    const double err = truncation_errors(P, mp, false).max;
    if (err > eps[i]) {
      pass = false;
      detail << "[trunc err " << err << " > " << eps[i] << "]";
    }
  }
  detail << ")";
  report(5, pass, "m_P structure on the scaled fig1 preset (n=600, m=20, seed 1):" +
                      detail.str());
}

void criterion6() {
  const int n = 200, m = 2;
  std::vector<double> eigs;
  for (int i = 0; i < n - 1; ++i) eigs.push_back(1.0 + i / (n - 2.0));
  eigs.push_back(100.0);
  Vector lam = Eigen::Map<const Vector>(eigs.data(), n);
  BandedHermitian A = generate<double>(lam, m, 7);
  Matrix inv_abs = testing::mp_banded_inverse_abs(A.data, m);

  long violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int k = 1; k < n; ++k) {
    double measured = 0.0;
    for (int i = 0; i + k < n; ++i) measured = std::max(measured, inv_abs(i + k, i));
    const double bf = inverse_bound_frommer_opt(eigs, m, k).value;
    const double br = inverse_bound_refined_opt(eigs, m, k).value;
    if (measured > bf || measured > br) ++violations;
    if (measured > 0.0) {
      worst_margin = std::min(worst_margin, std::min(bf, br) / measured);
    }
  }
  const int k20 = 20 * m;
  const double demko = inverse_bound_demko(1.0, 100.0, m, k20);
  const double bf20 = inverse_bound_frommer_opt(eigs, m, k20).value;
  const double br20 = inverse_bound_refined_opt(eigs, m, k20).value;
  const bool tight = bf20 * 10.0 <= demko && br20 * 10.0 <= demko;
  std::ostringstream msg;
  msg << "superlinear inverse bounds dominate the 100-digit inverse oracle ("
      << violations << " violations, min margin " << worst_margin
      << "x) and beat the ell=0 Demko bound at k=20m by "
      << demko / std::max(bf20, br20) << "x";
  report(6, violations == 0 && tight, msg.str());
}

void criterion7() {
  ExperimentConfig cfg = preset_config("fig3", 3);
  std::vector<double> eigs = build_eigenvalues(cfg);
  Vector lam = Eigen::Map<const Vector>(eigs.data(), 300);
  BandedHermitian H = generate<double>(lam, 1, 3);
  DecayProfile d = testing::mp_tridiag_projector_decay(H.data, 0.0);
  EigenvalueLadder ladder = distinct_magnitudes(eigs, 1e-10);
  const double a = ladder.mags.front();  // 1 - 0.9 rounds just below 0.1

  bool convex = true;
  std::vector<double> logs;
  for (int k = 10; k <= 250; k += 10) {
    logs.push_back(std::log(proj_bound_sl_opt(ladder, a, 1, k).value));
  }
  for (std::size_t i = 2; i < logs.size(); ++i) {
    if (logs[i] - 2.0 * logs[i - 1] + logs[i - 2] >= 0.0) convex = false;
  }
  long violations = 0;
  for (int k = 1; k < 300; ++k) {
    const double bound = std::min(1.0, proj_bound_sl_opt(ladder, a, 1, k).value);
    if (d.values[static_cast<std::size_t>(k)] > bound) ++violations;
  }
  std::ostringstream msg;
  msg << "clustered-spectrum ell-family is superexponential (negative log "
         "second differences over k=10..250) and dominates the 100-digit decay "
         "profile: convex="
      << (convex ? "yes" : "no") << ", violations=" << violations;
  report(7, convex && violations == 0, msg.str());
}

void criterion8() {
  const FuchsRate sym = fuchs_rate(0.1, 1.0, 1.0, 1e-10);
  const double closed = 0.5 * std::log(11.0 / 9.0);
  const bool sym_ok = std::abs(sym.eta - closed) <= 1e-6;
  const FuchsRate lo = fuchs_rate(0.1, 0.5, 0.5, 1e-10);
  const FuchsRate mid = fuchs_rate(0.1, 0.5, 1.0, 1e-10);
  const bool mid_ok = mid.eta_err <= 1e-8 && mid.eta > sym.eta && mid.eta < lo.eta;
  std::ostringstream msg;
  msg << "fuchs rates: eta(0.1,1,1)=" << sym.eta << " vs 0.5 ln(11/9)=" << closed
      << "; eta(0.1,0.5,1)=" << mid.eta << " (est err " << mid.eta_err
      << ") between " << sym.eta << " and " << lo.eta;
  report(8, sym_ok && mid_ok, msg.str());
}

void criterion9() {
  const double a = 0.3, b = 1.0;
  const int m = 20;
  long violations = 0;
  for (int k = m; k <= 100 * m; ++k) {
    const double quad = sign_bound_quadrature(a, b, m, k, 1e-10);
    if (quad > 2.0 * proj_bound_integral(a, b, m, k) * (1.0 + 1e-9)) ++violations;
  }
  QuadratureResult r = integrate_semi_infinite(
      [a, b](double t) {
        const double sr = std::sqrt((b * b + t * t) / (a * a + t * t));
        return (1.0 + sr) * (1.0 + sr) / (2.0 * (b * b + t * t));
      },
      std::sqrt(a * b), 1e-11);
  const double slack = 0.5 * std::pow(1.0 + std::sqrt(b / a), 2.0) -
                       2.0 * b / M_PI * r.value;
  std::ostringstream msg;
  msg << "quadrature bound <= closed form on k in [m,100m] (" << violations
      << " violations); integral inequality slack = " << slack;
  report(9, violations == 0 && slack >= 0.0, msg.str());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion10(const std::string& cli) {
  if (cli.empty()) {
    report(10, false, "determinism: CLI binary path not supplied");
    return;
  }
  const fs::path base = fs::temp_directory_path() / "gapline_acceptance_c10";
  fs::remove_all(base);
  fs::create_directories(base);
  const fs::path dir_a = base / "a";
  const fs::path dir_b = base / "b";
  const std::string cmd_a = cli + " reproduce table1 --seed 42 --out " +
                            dir_a.string() + " > " + (base / "a.log").string() + " 2>&1";
  const std::string cmd_b = cli + " reproduce table1 --seed 42 --out " +
                            dir_b.string() + " > " + (base / "b.log").string() + " 2>&1";
  const int rc_a = std::system(cmd_a.c_str());
  const int rc_b = std::system(cmd_b.c_str());
  bool pass = rc_a == 0 && rc_b == 0;
  std::string mismatch;
  if (pass) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir_a)) {
      files.push_back(entry.path().filename());
    }
    pass = !files.empty();
    for (const fs::path& f : files) {
      if (!fs::exists(dir_b / f) || slurp(dir_a / f) != slurp(dir_b / f)) {
        pass = false;
        mismatch = " mismatch: " + f.string();
        break;
      }
    }
  }
  std::ostringstream msg;
  msg << "reproduce table1 --seed 42 twice is byte-identical (exit " << rc_a << "/"
      << rc_b << ")" << mismatch;
  report(10, pass, msg.str());
  fs::remove_all(base);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  int only = 0;  // 0 = run everything
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--criterion") only = std::atoi(argv[i + 1]);
  }
  if (only == 0) std::printf("gapline acceptance suite\n");

  auto wants = [only](int c) { return only == 0 || only == c; };

  std::vector<TestMatrix> fixtures;
  double build_seconds = 0.0;
  if (wants(1) || wants(2)) {
    const auto t0 = std::chrono::steady_clock::now();
    fixtures = build_fixtures();
    build_seconds = seconds_since(t0);
  }

  if (wants(1)) criterion1(fixtures, build_seconds);
  if (wants(2)) {
    measure_decay(fixtures);
    criterion2(fixtures);
  }
  if (wants(3)) criterion3();
  if (wants(4)) criterion4();
  if (wants(5)) criterion5();
  if (wants(6)) criterion6();
  if (wants(7)) criterion7();
  if (wants(8)) criterion8();
  if (wants(9)) criterion9();
  if (wants(10)) criterion10(cli);

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  if (only == 0) std::printf("all criteria passed\n");
  return 0;
}
