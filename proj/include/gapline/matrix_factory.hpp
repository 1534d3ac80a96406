#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <utility>

#include "gapline/rng.hpp"

namespace gapline {

using Vector = Eigen::VectorXd;
template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Matrix = DenseMatrix<double>;
using MatrixC = DenseMatrix<std::complex<double>>;

// Dense-stored Hermitian matrix with a certified bandwidth m (entries with
// |i-j| > m are exactly zero) and, when the matrix was built from prescribed
// spectral data, the orthogonal eigenbasis that produced it.
template <class Scalar>
struct BandedHermitianT {
  int n = 0;
  int m = 0;
  DenseMatrix<Scalar> data;
  std::optional<DenseMatrix<Scalar>> basis;  // V with H V = V diag(lambda)
  std::optional<Vector> eigenvalues;         // ascending
  double band_zeroed_max = 0.0;  // largest |entry| removed by the hard zeroing

  bool has_provenance() const { return basis.has_value() && eigenvalues.has_value(); }
};

using BandedHermitian = BandedHermitianT<double>;
using BandedHermitianC = BandedHermitianT<std::complex<double>>;

// Result of a similarity band reduction H = W^* A W.
template <class Scalar>
struct BandReductionT {
  BandedHermitianT<Scalar> banded;
  DenseMatrix<Scalar> transform;  // accumulated W
};

// Orthogonal (unitary for complex Scalar) factor of the QR factorization of
// a matrix with independent standard-normal entries, with the R diagonal
// fixed positive so the result is a deterministic function of the seed.
template <class Scalar = double>
DenseMatrix<Scalar> random_orthogonal(int n, SeededRng& rng);

// A = Q diag(lambda) Q^*, explicitly Hermitian-symmetrized.
template <class Scalar>
DenseMatrix<Scalar> assemble_dense(const DenseMatrix<Scalar>& Q, const Vector& lambda);

// Successive Householder similarity transformations reducing a dense
// Hermitian matrix to bandwidth m. Entries outside the band are hard-zeroed
// afterwards; the largest removed magnitude is recorded as a diagnostic.
// m >= n-1 returns the input unchanged with W = I.
template <class Scalar>
BandReductionT<Scalar> band_reduce(DenseMatrix<Scalar> A, int m);

// Same, composing provenance: A must equal Q diag(lambda) Q^* so the output
// carries basis W^* Q and the prescribed eigenvalues.
template <class Scalar>
BandedHermitianT<Scalar> band_reduce(DenseMatrix<Scalar> A, int m,
                                     const DenseMatrix<Scalar>& prior_basis,
                                     const Vector& lambda_ascending);

// random_orthogonal -> assemble_dense -> band_reduce, provenance populated.
template <class Scalar = double>
BandedHermitianT<Scalar> generate(Vector lambda, int m, SeededRng& rng);

template <class Scalar = double>
BandedHermitianT<Scalar> generate(Vector lambda, int m, std::uint64_t seed);

// Cyclic Jacobi eigendecomposition (independent verification oracle).
// Returns ascending eigenvalues and the matching eigenvector columns.
// Throws ConvergenceError after max_sweeps sweeps.
template <class Scalar>
std::pair<Vector, DenseMatrix<Scalar>> jacobi_eigh(DenseMatrix<Scalar> H,
                                                   int max_sweeps = 100);

// Largest |entry| outside the band of width m; 0 for a certified bandwidth.
template <class Scalar>
double max_outside_band(const DenseMatrix<Scalar>& A, int m);

}  // namespace gapline
