#pragma once

#include <span>
#include <string>
#include <vector>

#include "gapline/matrix_factory.hpp"

namespace gapline {

// k -> max_{|i-j|=k} |M_ij|, the exact entry decay of a matrix.
struct DecayProfile {
  std::vector<double> values;  // index k = 0 .. n-1
  std::string source;          // "projector" | "sign" | "inverse" | free label

  int size() const { return static_cast<int>(values.size()); }
};

// Spectral projector onto the eigenvalues below mu. Uses the tracked
// eigenbasis when present, otherwise falls back to the jacobi_eigh oracle.
// The result is exactly Hermitian by construction.
template <class Scalar>
DenseMatrix<Scalar> spectral_projector(const BandedHermitianT<Scalar>& H, double mu = 0.0);

// sign(H) = I - 2P for mu = 0.
template <class Scalar>
DenseMatrix<Scalar> sign_matrix(const BandedHermitianT<Scalar>& H);

template <class Scalar>
DecayProfile decay_profile(const DenseMatrix<Scalar>& M, std::string source = "");

template <class Scalar>
DenseMatrix<Scalar> truncate_band(const DenseMatrix<Scalar>& M, int m);

// Smallest k_bar such that curve(k) <= epsilon for ALL k >= k_bar (the
// "definitively smaller" crossing; the curve may oscillate). Throws
// ThresholdNotReachedError when the final value still exceeds epsilon.
int first_below(std::span<const double> curve, double epsilon);

// Truncation bandwidth: the largest k with curve(k) > epsilon, i.e. the
// smallest bandwidth whose band truncation drops only entries <= epsilon
// (first_below - 1, or 0 when the whole curve already sits below epsilon).
// Measured profiles peak at multiples of the matrix bandwidth, so this is
// the quantity whose multiple-of-m structure the truncation tables show.
int truncation_bandwidth(std::span<const double> curve, double epsilon);

// Norms of M - M^(m).
struct TruncationErrors {
  double max = 0.0;   // entrywise max
  double one = 0.0;   // max column sum
  double inf = 0.0;   // max row sum
  double two = 0.0;   // sqrt(one*inf) bound, or power-iteration value
  bool two_is_exact = false;
};

template <class Scalar>
TruncationErrors truncation_errors(const DenseMatrix<Scalar>& M, int m,
                                   bool exact_two_norm = false);

// One row of the truncation report: threshold bandwidths of each bound
// family next to the measured one, plus the truncation error at m_exact.
struct TruncationReport {
  double epsilon = 0.0;
  int m1 = -1;   // B1 (optimized xi family)
  int m2 = -1;   // B2 (integral closed form)
  int m3 = -1;   // B3 (optimized tau family)
  int mSL = -1;  // optimized ell family
  int m_exact = -1;  // from the measured decay profile
  TruncationErrors errors;
};

}  // namespace gapline
