#include "gapline/matrix_factory.hpp"

#include <Eigen/Jacobi>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gapline/errors.hpp"

namespace gapline {
namespace {

template <class Scalar>
Scalar draw_normal(SeededRng& rng) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return rng.normal();
  } else {
    const double re = rng.normal();
    const double im = rng.normal();
    return Scalar(re * M_SQRT1_2, im * M_SQRT1_2);
  }
}

template <class Scalar>
Scalar unit_phase(Scalar z) {
  const double mag = std::abs(z);
  if (mag == 0.0) return Scalar(1);
  return z / Scalar(mag);
}

// Householder reflector I - beta v v^* sending x to (-phase(x0)*||x||, 0..).
template <class Scalar>
struct Reflector {
  Eigen::Vector<Scalar, Eigen::Dynamic> v;
  double beta = 0.0;  // 0 means identity
};

template <class Scalar>
Reflector<Scalar> make_reflector(const Eigen::Vector<Scalar, Eigen::Dynamic>& x) {
  Reflector<Scalar> h;
  const double tail = x.size() > 1 ? x.tail(x.size() - 1).norm() : 0.0;
  if (tail == 0.0) return h;  // already in the required form
  const double alpha_abs = std::abs(x(0));
  const double norm = std::hypot(alpha_abs, tail);
  const Scalar phase = unit_phase(x(0));
  h.v = x;
  h.v(0) = x(0) + phase * Scalar(norm);
  h.beta = 1.0 / (norm * (norm + alpha_abs));  // = 2 / ||v||^2
  return h;
}

// B <- (I - beta v v^*) B
template <class Scalar, class Block>
void apply_left(const Reflector<Scalar>& h, Block B) {
  if (h.beta == 0.0) return;
  Eigen::RowVector<Scalar, Eigen::Dynamic> w = h.v.adjoint() * B;
  B.noalias() -= (h.beta * h.v) * w;
}

// B <- B (I - beta v v^*)
template <class Scalar, class Block>
void apply_right(const Reflector<Scalar>& h, Block B) {
  if (h.beta == 0.0) return;
  Eigen::Vector<Scalar, Eigen::Dynamic> w = B * h.v;
  B.noalias() -= w * (h.beta * h.v).adjoint();
}

template <class Scalar>
void hermitian_symmetrize(DenseMatrix<Scalar>& A) {
  const Eigen::Index n = A.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    if constexpr (!std::is_same_v<Scalar, double>) {
      A(j, j) = Scalar(std::real(A(j, j)), 0.0);
    }
    for (Eigen::Index i = j + 1; i < n; ++i) {
      if constexpr (std::is_same_v<Scalar, double>) {
        const double avg = 0.5 * (A(i, j) + A(j, i));
        A(i, j) = avg;
        A(j, i) = avg;
      } else {
        const Scalar avg = 0.5 * (A(i, j) + std::conj(A(j, i)));
        A(i, j) = avg;
        A(j, i) = std::conj(avg);
      }
    }
  }
}

}  // namespace

template <class Scalar>
DenseMatrix<Scalar> random_orthogonal(int n, SeededRng& rng) {
  if (n < 1) throw DimensionError("random_orthogonal: n must be >= 1");
  DenseMatrix<Scalar> G(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      G(i, j) = draw_normal<Scalar>(rng);
    }
  }
  Eigen::HouseholderQR<DenseMatrix<Scalar>> qr(G);
  DenseMatrix<Scalar> Q = qr.householderQ();
  // Fix the R diagonal positive so Q is unique given the seed.
  const auto& QR = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    Q.col(j) *= unit_phase(QR(j, j));
  }
  return Q;
}

template <class Scalar>
DenseMatrix<Scalar> assemble_dense(const DenseMatrix<Scalar>& Q, const Vector& lambda) {
  if (Q.rows() != Q.cols() || Q.rows() != lambda.size()) {
    throw DimensionError("assemble_dense: dim(Q) must equal len(lambda)");
  }
  DenseMatrix<Scalar> A = Q * lambda.asDiagonal() * Q.adjoint();
  hermitian_symmetrize(A);
  return A;
}

template <class Scalar>
double max_outside_band(const DenseMatrix<Scalar>& A, int m) {
  double worst = 0.0;
  const Eigen::Index n = A.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + m + 1; i < n; ++i) {
      worst = std::max({worst, std::abs(A(i, j)), std::abs(A(j, i))});
    }
  }
  return worst;
}

namespace {

// Core reduction. Either accumulates W (H = W^* A W, right-applied) or
// applies every reflector to a tracked eigenbasis (V <- H_j V) so that
// provenance composes; both pointers may be null.
template <class Scalar>
void band_reduce_in_place(DenseMatrix<Scalar>& A, int m, DenseMatrix<Scalar>* W,
                          DenseMatrix<Scalar>* tracked_basis) {
  const int n = static_cast<int>(A.rows());
  for (int j = 0; j + m + 1 < n; ++j) {
    const int r0 = j + m;
    const int len = n - r0;
    if (len <= 1) break;
    Eigen::Vector<Scalar, Eigen::Dynamic> x = A.col(j).segment(r0, len);
    Reflector<Scalar> h = make_reflector<Scalar>(x);
    if (h.beta == 0.0) continue;
    // Rows r0.. are zero in columns < j, so the two-sided application only
    // touches the trailing block.
    apply_left(h, A.block(r0, j, len, n - j));
    apply_right(h, A.block(j, r0, n - j, len));
    if (W) apply_right(h, W->middleCols(r0, len));
    if (tracked_basis) apply_left(h, tracked_basis->middleRows(r0, len));
  }
}

template <class Scalar>
BandedHermitianT<Scalar> finalize_banded(DenseMatrix<Scalar>&& A, int m) {
  BandedHermitianT<Scalar> out;
  out.n = static_cast<int>(A.rows());
  out.m = std::min(m, out.n - 1);
  hermitian_symmetrize(A);
  out.band_zeroed_max = max_outside_band(A, m);
  for (int j = 0; j < out.n; ++j) {
    for (int i = j + m + 1; i < out.n; ++i) {
      A(i, j) = Scalar(0);
      A(j, i) = Scalar(0);
    }
  }
  out.data = std::move(A);
  return out;
}

}  // namespace

template <class Scalar>
BandReductionT<Scalar> band_reduce(DenseMatrix<Scalar> A, int m) {
  if (m < 1) throw DimensionError("band_reduce: m must be >= 1");
  if (A.rows() != A.cols()) throw DimensionError("band_reduce: matrix must be square");
  const int n = static_cast<int>(A.rows());
  BandReductionT<Scalar> out;
  out.transform = DenseMatrix<Scalar>::Identity(n, n);
  if (m < n - 1) {
    band_reduce_in_place(A, m, &out.transform, static_cast<DenseMatrix<Scalar>*>(nullptr));
  }
  out.banded = finalize_banded(std::move(A), m);
  return out;
}

template <class Scalar>
BandedHermitianT<Scalar> band_reduce(DenseMatrix<Scalar> A, int m,
                                     const DenseMatrix<Scalar>& prior_basis,
                                     const Vector& lambda_ascending) {
  if (m < 1) throw DimensionError("band_reduce: m must be >= 1");
  if (A.rows() != A.cols() || prior_basis.rows() != A.rows() ||
      lambda_ascending.size() != A.rows()) {
    throw DimensionError("band_reduce: inconsistent dimensions");
  }
  const int n = static_cast<int>(A.rows());
  DenseMatrix<Scalar> V = prior_basis;
  if (m < n - 1) {
    band_reduce_in_place(A, m, static_cast<DenseMatrix<Scalar>*>(nullptr), &V);
  }
  BandedHermitianT<Scalar> out = finalize_banded(std::move(A), m);
  out.basis = std::move(V);
  out.eigenvalues = lambda_ascending;
  return out;
}

template <class Scalar>
BandedHermitianT<Scalar> generate(Vector lambda, int m, SeededRng& rng) {
  if (lambda.size() < 2) throw DimensionError("generate: need at least 2 eigenvalues");
  if (m < 1) throw DimensionError("generate: m must be >= 1");
  std::sort(lambda.data(), lambda.data() + lambda.size());
  const int n = static_cast<int>(lambda.size());
  DenseMatrix<Scalar> Q = random_orthogonal<Scalar>(n, rng);
  DenseMatrix<Scalar> A = assemble_dense<Scalar>(Q, lambda);
  return band_reduce<Scalar>(std::move(A), m, Q, lambda);
}

template <class Scalar>
BandedHermitianT<Scalar> generate(Vector lambda, int m, std::uint64_t seed) {
  SeededRng rng(seed);
  return generate<Scalar>(std::move(lambda), m, rng);
}

template <class Scalar>
std::pair<Vector, DenseMatrix<Scalar>> jacobi_eigh(DenseMatrix<Scalar> A,
                                                   int max_sweeps) {
  if (A.rows() != A.cols()) throw DimensionError("jacobi_eigh: matrix must be square");
  const int n = static_cast<int>(A.rows());
  DenseMatrix<Scalar> V = DenseMatrix<Scalar>::Identity(n, n);
  if (n == 1) {
    Vector lam(1);
    lam(0) = std::real(A(0, 0));
    return {lam, V};
  }

  double scale = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(A(i, j)));
  if (scale == 0.0) scale = 1.0;
  const double tol = 100.0 * std::numeric_limits<double>::epsilon() * scale;

  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    double off_max = 0.0;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        off_max = std::max(off_max, std::abs(A(p, q)));
        if (std::abs(A(p, q)) <= tol * 1e-3) continue;
        Eigen::JacobiRotation<Scalar> rot;
        rot.makeJacobi(A, p, q);
        A.applyOnTheLeft(p, q, rot.adjoint());
        A.applyOnTheRight(p, q, rot);
        A(p, q) = Scalar(0);
        A(q, p) = Scalar(0);
        V.applyOnTheRight(p, q, rot);
      }
    }
    converged = off_max <= tol;
  }
  if (!converged) {
    // One more scan: accept if the remaining off-diagonal mass is small.
    double off_max = 0.0;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) off_max = std::max(off_max, std::abs(A(p, q)));
    if (off_max > tol) {
      throw ConvergenceError("jacobi_eigh: no convergence within sweep limit");
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return std::real(A(i, i)) < std::real(A(j, j));
  });
  Vector lam(n);
  DenseMatrix<Scalar> Vs(n, n);
  for (int j = 0; j < n; ++j) {
    lam(j) = std::real(A(order[j], order[j]));
    Vs.col(j) = V.col(order[j]);
  }
  return {lam, Vs};
}

// Explicit instantiations for the real default path and the complex path.
template Matrix random_orthogonal<double>(int, SeededRng&);
template MatrixC random_orthogonal<std::complex<double>>(int, SeededRng&);
template Matrix assemble_dense<double>(const Matrix&, const Vector&);
template MatrixC assemble_dense<std::complex<double>>(const MatrixC&, const Vector&);
template double max_outside_band<double>(const Matrix&, int);
template double max_outside_band<std::complex<double>>(const MatrixC&, int);
template BandReductionT<double> band_reduce<double>(Matrix, int);
template BandReductionT<std::complex<double>> band_reduce<std::complex<double>>(MatrixC, int);
template BandedHermitian band_reduce<double>(Matrix, int, const Matrix&, const Vector&);
template BandedHermitianC band_reduce<std::complex<double>>(MatrixC, int, const MatrixC&,
                                                            const Vector&);
template BandedHermitian generate<double>(Vector, int, SeededRng&);
template BandedHermitianC generate<std::complex<double>>(Vector, int, SeededRng&);
template BandedHermitian generate<double>(Vector, int, std::uint64_t);
template BandedHermitianC generate<std::complex<double>>(Vector, int, std::uint64_t);
template std::pair<Vector, Matrix> jacobi_eigh<double>(Matrix, int);
template std::pair<Vector, MatrixC> jacobi_eigh<std::complex<double>>(MatrixC, int);

}  // namespace gapline
