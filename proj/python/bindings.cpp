// Python bindings for the main operations: matrix generation, spectral
// projectors and decay profiles, every bound family, and the quadrature
// services backing them.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gapline/bounds.hpp"
#include "gapline/errors.hpp"
#include "gapline/experiment.hpp"
#include "gapline/io.hpp"
#include "gapline/matrix_factory.hpp"
#include "gapline/projector.hpp"
#include "gapline/quadrature.hpp"
#include "gapline/spectrum.hpp"

namespace py = pybind11;
using namespace gapline;

namespace {

BandedHermitian make_banded(const Matrix& data, int m,
                            std::optional<Matrix> basis,
                            std::optional<Vector> eigenvalues) {
  BandedHermitian H;
  H.n = static_cast<int>(data.rows());
  H.m = m;
  H.data = data;
  if (basis) H.basis = std::move(*basis);
  if (eigenvalues) H.eigenvalues = std::move(*eigenvalues);
  return H;
}

K2Variant k2_from_string(const std::string& v) {
  if (v == "proof") return K2Variant::proof;
  if (v == "printed") return K2Variant::printed;
  throw ParameterError("k2 must be 'proof' or 'printed'");
}

}  // namespace

PYBIND11_MODULE(_gapline, mod) {
  mod.doc() = "decay bounds for spectral projectors of banded Hermitian matrices";

  py::register_exception<Error>(mod, "GaplineError");

  // ---- spectrum model ----
  py::class_<AffineMap>(mod, "AffineMap")
      .def_readonly("scale", &AffineMap::scale)
      .def_readonly("shift", &AffineMap::shift)
      .def("apply", &AffineMap::apply)
      .def("invert", &AffineMap::invert);

  py::class_<SpectrumSpec>(mod, "SpectrumSpec")
      .def_readonly("a", &SpectrumSpec::a)
      .def_readonly("b", &SpectrumSpec::b)
      .def_readonly("b1", &SpectrumSpec::b1)
      .def_readonly("b2", &SpectrumSpec::b2)
      .def_readonly("mu", &SpectrumSpec::mu)
      .def_readonly("affine", &SpectrumSpec::affine)
      .def("relative_gap", &SpectrumSpec::relative_gap)
      .def_static("symmetric", &SpectrumSpec::symmetric, py::arg("a"), py::arg("b"));

  mod.def("normalize_spectrum", &normalize_spectrum, py::arg("b1"), py::arg("a1"),
          py::arg("a2"), py::arg("b2"), py::arg("mu"), py::arg("scale_to_unit") = false);

  py::class_<EigenvalueLadder>(mod, "EigenvalueLadder")
      .def_readonly("mags", &EigenvalueLadder::mags)
      .def_readonly("mults", &EigenvalueLadder::mults)
      .def_readonly("n_e", &EigenvalueLadder::n_e)
      .def_readonly("tol_cluster", &EigenvalueLadder::tol_cluster)
      .def_readonly("merged_any", &EigenvalueLadder::merged_any)
      .def("nu", &EigenvalueLadder::nu)
      .def("b_ell", &EigenvalueLadder::b_ell, py::arg("ell"));

  mod.def(
      "distinct_magnitudes",
      [](const std::vector<double>& eigs, double tol, double min_magnitude) {
        return distinct_magnitudes(eigs, tol, min_magnitude);
      },
      py::arg("eigenvalues"), py::arg("tol_cluster") = 1e-10,
      py::arg("min_magnitude") = 0.0);

  // ---- matrix factory ----
  py::class_<BandedHermitian>(mod, "BandedHermitian")
      .def(py::init(&make_banded), py::arg("data"), py::arg("m"),
           py::arg("basis") = std::nullopt, py::arg("eigenvalues") = std::nullopt)
      .def_readonly("n", &BandedHermitian::n)
      .def_readonly("m", &BandedHermitian::m)
      .def_readonly("data", &BandedHermitian::data)
      .def_property_readonly(
          "basis",
          [](const BandedHermitian& H) {
            return H.basis ? py::cast(*H.basis) : py::none().cast<py::object>();
          })
      .def_property_readonly(
          "eigenvalues",
          [](const BandedHermitian& H) {
            return H.eigenvalues ? py::cast(*H.eigenvalues)
                                 : py::none().cast<py::object>();
          })
      .def_readonly("band_zeroed_max", &BandedHermitian::band_zeroed_max)
      .def("has_provenance", &BandedHermitian::has_provenance);

  mod.def(
      "random_orthogonal",
      [](int n, std::uint64_t seed) {
        SeededRng rng(seed);
        return random_orthogonal<double>(n, rng);
      },
      py::arg("n"), py::arg("seed"));
  mod.def("assemble_dense", &assemble_dense<double>, py::arg("Q"), py::arg("lam"));
  mod.def(
      "band_reduce",
      [](const Matrix& A, int m) {
        BandReductionT<double> red = band_reduce<double>(A, m);
        return py::make_tuple(red.banded, red.transform);
      },
      py::arg("A"), py::arg("m"), "returns (banded, W) with H = W.T @ A @ W");
  mod.def(
      "generate",
      [](const Vector& lam, int m, std::uint64_t seed) {
        return generate<double>(lam, m, seed);
      },
      py::arg("eigenvalues"), py::arg("m"), py::arg("seed"));
  mod.def(
      "jacobi_eigh",
      [](const Matrix& H, int max_sweeps) {
        auto [lam, V] = jacobi_eigh<double>(H, max_sweeps);
        return py::make_tuple(lam, V);
      },
      py::arg("H"), py::arg("max_sweeps") = 100);
  mod.def("max_outside_band", &max_outside_band<double>, py::arg("A"), py::arg("m"));

  // ---- projector lab ----
  py::class_<DecayProfile>(mod, "DecayProfile")
      .def_readonly("values", &DecayProfile::values)
      .def_readonly("source", &DecayProfile::source);

  mod.def("spectral_projector", &spectral_projector<double>, py::arg("H"),
          py::arg("mu") = 0.0);
  mod.def("sign_matrix", &sign_matrix<double>, py::arg("H"));
  mod.def(
      "decay_profile",
      [](const Matrix& M, const std::string& source) {
        return decay_profile(M, source);
      },
      py::arg("M"), py::arg("source") = "");
  mod.def("truncate_band", &truncate_band<double>, py::arg("M"), py::arg("m"));
  mod.def(
      "first_below",
      [](const std::vector<double>& curve, double eps) {
        return first_below(curve, eps);
      },
      py::arg("curve"), py::arg("epsilon"));
  mod.def(
      "truncation_errors",
      [](const Matrix& M, int m, bool exact_two_norm) {
        const TruncationErrors e = truncation_errors(M, m, exact_two_norm);
        py::dict d;
        d["max"] = e.max;
        d["one"] = e.one;
        d["inf"] = e.inf;
        d["two"] = e.two;
        d["two_is_exact"] = e.two_is_exact;
        return d;
      },
      py::arg("M"), py::arg("m"), py::arg("exact_two_norm") = false);

  // ---- bound engine ----
  py::class_<DemkoParams>(mod, "DemkoParams")
      .def_readonly("r", &DemkoParams::r)
      .def_readonly("C", &DemkoParams::C)
      .def_readonly("q", &DemkoParams::q)
      .def("poly_error", &DemkoParams::poly_error, py::arg("k"));

  py::class_<OptBound>(mod, "OptBound")
      .def_readonly("value", &OptBound::value)
      .def_readonly("param", &OptBound::param);

  py::class_<FuchsRate>(mod, "FuchsRate")
      .def_readonly("eta", &FuchsRate::eta)
      .def_readonly("K", &FuchsRate::K)
      .def_readonly("eta_err", &FuchsRate::eta_err)
      .def_readonly("K_err", &FuchsRate::K_err);

  mod.def("demko_params", &demko_params, py::arg("a"), py::arg("b"));
  mod.def("inverse_bound_demko", &inverse_bound_demko, py::arg("a"), py::arg("b"),
          py::arg("m"), py::arg("k"));
  mod.def(
      "inverse_bound_frommer",
      [](const std::vector<double>& lam, int m, int k, int ell) {
        return inverse_bound_frommer(lam, m, k, ell);
      },
      py::arg("lambdas"), py::arg("m"), py::arg("k"), py::arg("ell"));
  mod.def(
      "inverse_bound_frommer_opt",
      [](const std::vector<double>& lam, int m, int k) {
        return inverse_bound_frommer_opt(lam, m, k);
      },
      py::arg("lambdas"), py::arg("m"), py::arg("k"));
  mod.def(
      "inverse_bound_refined",
      [](const std::vector<double>& lam, int m, int k, int ell) {
        return inverse_bound_refined(lam, m, k, ell);
      },
      py::arg("distinct_lambdas"), py::arg("m"), py::arg("k"), py::arg("ell"));
  mod.def(
      "inverse_bound_refined_opt",
      [](const std::vector<double>& lam, int m, int k) {
        return inverse_bound_refined_opt(lam, m, k);
      },
      py::arg("distinct_lambdas"), py::arg("m"), py::arg("k"));
  mod.def("proj_bound_bbr", &proj_bound_bbr, py::arg("a"), py::arg("b"), py::arg("m"),
          py::arg("k"), py::arg("xi"));
  mod.def("proj_bound_bbr_opt", &proj_bound_bbr_opt, py::arg("a"), py::arg("b"),
          py::arg("m"), py::arg("k"));
  mod.def("proj_bound_integral", &proj_bound_integral, py::arg("a"), py::arg("b"),
          py::arg("m"), py::arg("k"));
  mod.def("sign_bound_integral", &sign_bound_integral, py::arg("a"), py::arg("b"),
          py::arg("m"), py::arg("k"));
  mod.def("sign_bound_quadrature", &sign_bound_quadrature, py::arg("a"), py::arg("b"),
          py::arg("m"), py::arg("k"), py::arg("tol") = 1e-10);
  mod.def("gaussian_majorant", &gaussian_majorant, py::arg("a"), py::arg("b"),
          py::arg("tau"), py::arg("alpha"), py::arg("t"));
  mod.def("tau_bar", &tau_bar, py::arg("a"), py::arg("b"));
  mod.def(
      "proj_bound_tau",
      [](double a, double b, int m, int k, double tau, const std::string& k2) {
        return proj_bound_tau(a, b, m, k, tau, k2_from_string(k2));
      },
      py::arg("a"), py::arg("b"), py::arg("m"), py::arg("k"), py::arg("tau"),
      py::arg("k2") = "proof");
  mod.def(
      "proj_bound_tau_opt",
      [](double a, double b, int m, int k, const std::string& k2) {
        return proj_bound_tau_opt(a, b, m, k, k2_from_string(k2));
      },
      py::arg("a"), py::arg("b"), py::arg("m"), py::arg("k"), py::arg("k2") = "proof");
  mod.def("proj_bound_sl", &proj_bound_sl, py::arg("ladder"), py::arg("a"), py::arg("m"),
          py::arg("k"), py::arg("ell"));
  mod.def("proj_bound_sl_opt", &proj_bound_sl_opt, py::arg("ladder"), py::arg("a"),
          py::arg("m"), py::arg("k"));
  mod.def("hasson_rate", &hasson_rate, py::arg("a"), py::arg("b"), py::arg("m"),
          py::arg("k"));
  mod.def("fuchs_rate", &fuchs_rate, py::arg("a"), py::arg("b1"), py::arg("b2"),
          py::arg("tol") = 1e-10);

  // ---- quadrature ----
  py::class_<QuadratureResult>(mod, "QuadratureResult")
      .def_readonly("value", &QuadratureResult::value)
      .def_readonly("est_error", &QuadratureResult::est_error)
      .def_readonly("evaluations", &QuadratureResult::evaluations)
      .def_readonly("converged", &QuadratureResult::converged);

  mod.def(
      "integrate_adaptive",
      [](const std::function<double(double)>& f, double lo, double hi, double tol) {
        return integrate_adaptive(f, lo, hi, tol);
      },
      py::arg("f"), py::arg("lo"), py::arg("hi"), py::arg("tol") = 1e-10);
  mod.def(
      "integrate_semi_infinite",
      [](const std::function<double(double)>& f, double scale, double tol) {
        return integrate_semi_infinite(f, scale, tol);
      },
      py::arg("f"), py::arg("scale"), py::arg("tol") = 1e-10);
  mod.def(
      "integrate_sqrt_singular",
      [](const std::function<double(double)>& g, double lo, double hi, bool slo,
         bool shi, double tol) {
        return integrate_sqrt_singular(g, lo, hi, slo, shi, tol);
      },
      py::arg("g"), py::arg("lo"), py::arg("hi"), py::arg("singular_lo"),
      py::arg("singular_hi"), py::arg("tol") = 1e-10);

  // ---- experiment presets and file formats ----
  mod.def(
      "preset_eigenvalues",
      [](const std::string& name) {
        ExperimentConfig cfg = preset_config(name);
        return build_eigenvalues(cfg);
      },
      py::arg("preset"), "eigenvalue list of a named figure preset");
  mod.def(
      "preset_bandwidth",
      [](const std::string& name) { return preset_config(name).m; },
      py::arg("preset"));
  mod.def("write_matrix_file", &write_matrix_file, py::arg("path"), py::arg("H"));
  mod.def("read_matrix_file", &read_matrix_file, py::arg("path"));
}
