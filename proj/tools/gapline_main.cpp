// Command-line front end: generate test matrices, measure projector decay,
// evaluate decay-bound families and compare them, with reproducible presets.

#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "gapline/errors.hpp"
#include "gapline/experiment.hpp"
#include "gapline/io.hpp"

namespace {

using namespace gapline;

std::vector<BoundFamily> parse_families(const std::vector<std::string>& names) {
  if (names.empty()) return default_families();
  std::vector<BoundFamily> out;
  for (const std::string& name : names) {
    auto f = family_from_name(name);
    if (!f) throw Error("unknown bound family: " + name);
    out.push_back(*f);
  }
  return out;
}

K2Variant parse_k2(const std::string& v) {
  if (v == "proof") return K2Variant::proof;
  if (v == "printed") return K2Variant::printed;
  throw Error("--k2 must be 'proof' or 'printed'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decay bounds for spectral projectors of banded Hermitian matrices"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "generate a banded Hermitian test matrix");
  std::string gen_preset, gen_config, gen_out = ".", gen_name = "matrix", gen_eigs_file;
  std::vector<std::string> gen_intervals;
  std::uint64_t gen_seed = 1;
  int gen_m = 1;
  bool gen_allow_large = false;
  gen->add_option("--preset", gen_preset, "fig1|fig2|fig3|fig4|table1");
  gen->add_option("--config", gen_config, "config file");
  gen->add_option("--intervals", gen_intervals,
                  "lo:hi:count spectrum pieces (evenly spaced)");
  gen->add_option("--eigs-file", gen_eigs_file, "explicit eigenvalue list file");
  gen->add_option("--m", gen_m, "target bandwidth");
  gen->add_option("--seed", gen_seed, "rng seed for the orthogonal basis");
  gen->add_option("--out", gen_out, "output directory");
  gen->add_option("--name", gen_name, "output file stem");
  gen->add_flag("--allow-large", gen_allow_large, "lift the n <= 3000 desk-scale guard");

  // analyze
  auto* ana = app.add_subcommand("analyze", "projector decay profile of a matrix file");
  std::string ana_matrix, ana_out = ".";
  double ana_mu = 0.0;
  ana->add_option("matrix", ana_matrix, "matrix file (.mat)")->required();
  ana->add_option("--mu", ana_mu, "Fermi level");
  ana->add_option("--out", ana_out, "output directory");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "evaluate decay bound curves");
  std::string bnd_eigs, bnd_config, bnd_out = ".";
  std::vector<std::string> bnd_families;
  double bnd_a = 0.0, bnd_b = 0.0, bnd_b1 = 0.0, bnd_b2 = 0.0, bnd_tol = 1e-10;
  int bnd_m = 1, bnd_kmax = -1;
  std::string bnd_k2 = "proof";
  bnd->add_option("--a", bnd_a, "inner gap radius");
  bnd->add_option("--b", bnd_b, "outer radius (symmetric)");
  bnd->add_option("--b1", bnd_b1, "negative-side outer radius");
  bnd->add_option("--b2", bnd_b2, "positive-side outer radius");
  bnd->add_option("--eigs", bnd_eigs, "eigenvalue list file (enables SL families)");
  bnd->add_option("--config", bnd_config, "config file with a [spectrum] block");
  bnd->add_option("--m", bnd_m, "bandwidth");
  bnd->add_option("--k-max", bnd_kmax, "largest k (default 100 m)");
  bnd->add_option("--families", bnd_families, "bound families");
  bnd->add_option("--tol", bnd_tol, "quadrature tolerance");
  bnd->add_option("--k2", bnd_k2, "K2 constant variant: proof|printed");
  bnd->add_option("--out", bnd_out, "output directory");

  // compare
  auto* cmp = app.add_subcommand("compare", "decay profile vs bound curves");
  std::string cmp_decay, cmp_out = ".";
  std::vector<std::string> cmp_bounds;
  std::vector<double> cmp_eps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  int cmp_m = 1;
  double cmp_floor = 0.0;
  cmp->add_option("decay", cmp_decay, "decay csv")->required();
  cmp->add_option("bounds", cmp_bounds, "bound csv files")->required();
  cmp->add_option("--eps", cmp_eps, "thresholds");
  cmp->add_option("--m", cmp_m, "bandwidth of the analyzed matrix");
  cmp->add_option("--floor", cmp_floor,
                  "measurement floor; smaller decay values are not checked");
  cmp->add_option("--out", cmp_out, "output directory");

  // reproduce
  auto* rep = app.add_subcommand("reproduce", "run a full preset pipeline");
  std::string rep_what, rep_out = ".", rep_k2 = "proof";
  std::uint64_t rep_seed = 1;
  double rep_tol = 1e-10;
  rep->add_option("what", rep_what, "fig1|fig2|fig3|fig4|table1")->required();
  rep->add_option("--seed", rep_seed, "rng seed");
  rep->add_option("--out", rep_out, "output directory");
  rep->add_option("--tol", rep_tol, "quadrature tolerance");
  rep->add_option("--k2", rep_k2, "K2 constant variant: proof|printed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      ExperimentConfig config;
      if (!gen_config.empty()) load_config_file(gen_config, config);
      if (!gen_preset.empty()) config = preset_config(gen_preset, gen_seed);
      if (gen->count("--m")) config.m = gen_m;
      if (gen->count("--seed")) config.seed = gen_seed;
      if (gen->count("--name")) config.name = gen_name;
      config.out_dir = gen_out;
      config.allow_large = gen_allow_large || config.allow_large;
      if (!gen_eigs_file.empty()) {
        Vector lam = read_eigs_file(gen_eigs_file);
        config.explicit_eigenvalues.assign(lam.data(), lam.data() + lam.size());
        config.intervals.clear();
      }
      for (const std::string& spec : gen_intervals) {
        IntervalCount iv;
        if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &iv.lo, &iv.hi, &iv.count) != 3) {
          throw Error("bad --intervals entry: " + spec);
        }
        config.intervals.push_back(iv);
      }
      return cmd_generate(config, std::cout);
    }
    if (ana->parsed()) {
      return cmd_analyze(ana_matrix, ana_mu, ana_out, std::cout);
    }
    if (bnd->parsed()) {
      BoundContext ctx;
      ctx.m = bnd_m;
      ctx.tol = bnd_tol;
      ctx.k2 = parse_k2(bnd_k2);
      if (!bnd_eigs.empty()) {
        Vector lam = read_eigs_file(bnd_eigs);
        std::vector<double> eigs(lam.data(), lam.data() + lam.size());
        std::sort(eigs.begin(), eigs.end());
        ctx.spec = spectrum_of(eigs);
        ctx.ladder = distinct_magnitudes(eigs, 1e-10, ctx.spec.a);
        ctx.lambdas = eigs;
        if (ctx.ladder->merged_any) {
          std::cout << "note: numerically coincident magnitudes merged at relative "
                       "tolerance " << ctx.ladder->tol_cluster << "\n";
        }
      } else if (!bnd_config.empty()) {
        auto spec = spectrum_block_from_config(bnd_config);
        if (!spec) throw Error("config file has no [spectrum] block");
        ctx.spec = *spec;
      } else if (bnd_a > 0.0) {
        const double b1 = bnd_b1 > 0.0 ? bnd_b1 : bnd_b;
        const double b2 = bnd_b2 > 0.0 ? bnd_b2 : bnd_b;
        if (!(b1 > 0.0) || !(b2 > 0.0)) throw Error("bounds: need --b or --b1/--b2");
        ctx.spec.a = bnd_a;
        ctx.spec.b1 = b1;
        ctx.spec.b2 = b2;
        ctx.spec.b = std::max(b1, b2);
      } else {
        throw Error("bounds: need --a/--b, --eigs or --config");
      }
      const int k_hi = bnd_kmax > 0 ? bnd_kmax : 100 * bnd_m;
      return cmd_bounds(ctx, parse_families(bnd_families), 0, k_hi, bnd_out, std::cout);
    }
    if (cmp->parsed()) {
      return cmd_compare(cmp_decay, cmp_bounds, cmp_eps, cmp_m, cmp_out, cmp_floor,
                         std::cout);
    }
    if (rep->parsed()) {
      return cmd_reproduce(rep_what, rep_seed, rep_out, rep_tol, parse_k2(rep_k2),
                           std::cout);
    }
  } catch (const QuadratureError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
