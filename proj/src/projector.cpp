#include "gapline/projector.hpp"

#include <algorithm>
#include <cmath>

#include "gapline/errors.hpp"

namespace gapline {
namespace {

template <class Scalar>
void mirror_lower_to_upper(DenseMatrix<Scalar>& P) {
  const Eigen::Index n = P.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    if constexpr (!std::is_same_v<Scalar, double>) {
      P(j, j) = Scalar(std::real(P(j, j)), 0.0);
    }
    for (Eigen::Index i = j + 1; i < n; ++i) {
      if constexpr (std::is_same_v<Scalar, double>) {
        P(j, i) = P(i, j);
      } else {
        P(j, i) = std::conj(P(i, j));
      }
    }
  }
}

}  // namespace

template <class Scalar>
DenseMatrix<Scalar> spectral_projector(const BandedHermitianT<Scalar>& H, double mu) {
  DenseMatrix<Scalar> V;
  Vector lam;
  if (H.has_provenance()) {
    V = *H.basis;
    lam = *H.eigenvalues;
  } else {
    std::tie(lam, V) = jacobi_eigh<Scalar>(H.data);
  }
  const double scale = std::max(std::abs(lam(0)), std::abs(lam(lam.size() - 1)));
  int n_e = 0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (std::abs(lam(i) - mu) <= 1e-12 * scale) {
      throw GapViolationError("spectral_projector: eigenvalue at the Fermi level");
    }
    if (lam(i) < mu) ++n_e;
  }
  const int n = H.n;
  DenseMatrix<Scalar> P = DenseMatrix<Scalar>::Zero(n, n);
  if (n_e > 0) {
    P.template selfadjointView<Eigen::Lower>().rankUpdate(V.leftCols(n_e), 1.0);
  }
  mirror_lower_to_upper(P);
  return P;
}

template <class Scalar>
DenseMatrix<Scalar> sign_matrix(const BandedHermitianT<Scalar>& H) {
  DenseMatrix<Scalar> S = spectral_projector(H, 0.0);
  S *= Scalar(-2.0);
  S.diagonal().array() += Scalar(1.0);
  return S;
}

template <class Scalar>
DecayProfile decay_profile(const DenseMatrix<Scalar>& M, std::string source) {
  if (M.rows() != M.cols()) throw DimensionError("decay_profile: matrix must be square");
  const int n = static_cast<int>(M.rows());
  DecayProfile d;
  d.source = std::move(source);
  d.values.assign(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    double best = 0.0;
    for (int i = 0; i + k < n; ++i) {
      best = std::max({best, std::abs(M(i + k, i)), std::abs(M(i, i + k))});
    }
    d.values[static_cast<std::size_t>(k)] = best;
  }
  return d;
}

template <class Scalar>
DenseMatrix<Scalar> truncate_band(const DenseMatrix<Scalar>& M, int m) {
  if (m < 0) throw DimensionError("truncate_band: m must be >= 0");
  DenseMatrix<Scalar> T = DenseMatrix<Scalar>::Zero(M.rows(), M.cols());
  for (Eigen::Index j = 0; j < M.cols(); ++j) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, j - m);
    const Eigen::Index hi = std::min<Eigen::Index>(M.rows() - 1, j + m);
    for (Eigen::Index i = lo; i <= hi; ++i) T(i, j) = M(i, j);
  }
  return T;
}

int first_below(std::span<const double> curve, double epsilon) {
  if (curve.empty()) throw ThresholdNotReachedError("first_below: empty curve");
  int k = static_cast<int>(curve.size());
  if (curve[static_cast<std::size_t>(k - 1)] > epsilon) {
    throw ThresholdNotReachedError("first_below: curve never definitively below epsilon");
  }
  while (k > 0 && curve[static_cast<std::size_t>(k - 1)] <= epsilon) --k;
  return k;
}

int truncation_bandwidth(std::span<const double> curve, double epsilon) {
  return std::max(first_below(curve, epsilon) - 1, 0);
}

template <class Scalar>
TruncationErrors truncation_errors(const DenseMatrix<Scalar>& M, int m,
                                   bool exact_two_norm) {
  const Eigen::Index n = M.rows();
  TruncationErrors e;
  Eigen::VectorXd col_sums = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(static_cast<long>(i - j)) <= m) continue;
      const double v = std::abs(M(i, j));
      e.max = std::max(e.max, v);
      col_sums(j) += v;
      row_sums(i) += v;
    }
  }
  e.one = col_sums.maxCoeff();
  e.inf = row_sums.maxCoeff();
  e.two = std::sqrt(e.one * e.inf);
  if (exact_two_norm && e.max > 0.0) {
    // Power iteration on E^* E; E = M - M^(m).
    DenseMatrix<Scalar> E = M - truncate_band(M, m);
    Eigen::Vector<Scalar, Eigen::Dynamic> v =
        Eigen::Vector<Scalar, Eigen::Dynamic>::Constant(n, Scalar(1.0 / std::sqrt(double(n))));
    double sigma = 0.0;
    for (int it = 0; it < 200; ++it) {
      Eigen::Vector<Scalar, Eigen::Dynamic> w = E * v;
      v = E.adjoint() * w;
      const double norm = v.norm();
      if (norm == 0.0) break;
      v /= norm;
      const double next = std::sqrt(norm);
      if (it > 4 && std::abs(next - sigma) <= 1e-9 * next) {
        sigma = next;
        break;
      }
      sigma = next;
    }
    e.two = sigma;
    e.two_is_exact = true;
  }
  return e;
}

template Matrix spectral_projector<double>(const BandedHermitian&, double);
template MatrixC spectral_projector<std::complex<double>>(const BandedHermitianC&, double);
template Matrix sign_matrix<double>(const BandedHermitian&);
template MatrixC sign_matrix<std::complex<double>>(const BandedHermitianC&);
template DecayProfile decay_profile<double>(const Matrix&, std::string);
template DecayProfile decay_profile<std::complex<double>>(const MatrixC&, std::string);
template Matrix truncate_band<double>(const Matrix&, int);
template MatrixC truncate_band<std::complex<double>>(const MatrixC&, int);
template TruncationErrors truncation_errors<double>(const Matrix&, int, bool);
template TruncationErrors truncation_errors<std::complex<double>>(const MatrixC&, int, bool);

}  // namespace gapline
