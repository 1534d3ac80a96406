#include "highprec.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace gapline::testing {
namespace {

using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>>;

// Banded Cholesky A = L L^T with bandwidth m, stored as columns of the band.
struct BandChol {
  int n, m;
  std::vector<std::vector<Real>> col;  // col[j][0] = L(j,j), col[j][d] = L(j+d,j)

  explicit BandChol(const Matrix& A, int m_in) : n(static_cast<int>(A.rows())), m(m_in) {
    col.assign(static_cast<std::size_t>(n), {});
    for (int j = 0; j < n; ++j) {
      col[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(m + 1), Real(0));
      for (int d = 0; d <= m && j + d < n; ++d) {
        Real s(A(j + d, j));
        const int klo = std::max(0, j - m);
        for (int k = klo; k < j; ++k) {
          if (j + d - k > m) continue;
          s -= at(j + d, k) * at(j, k);
        }
        if (d == 0) {
          if (s <= 0) throw std::runtime_error("mp cholesky: matrix not positive definite");
          col[static_cast<std::size_t>(j)][0] = sqrt(s);
        } else {
          col[static_cast<std::size_t>(j)][static_cast<std::size_t>(d)] =
              s / col[static_cast<std::size_t>(j)][0];
        }
      }
    }
  }

  Real at(int i, int j) const {  // L(i,j) for i >= j within the band
    const int d = i - j;
    if (d < 0 || d > m) return Real(0);
    return col[static_cast<std::size_t>(j)][static_cast<std::size_t>(d)];
  }

  // Solve A x = e_idx.
  std::vector<Real> solve_unit(int idx) const {
    std::vector<Real> y(static_cast<std::size_t>(n), Real(0));
    for (int i = 0; i < n; ++i) {
      Real s = (i == idx) ? Real(1) : Real(0);
      for (int k = std::max(0, i - m); k < i; ++k) s -= at(i, k) * y[static_cast<std::size_t>(k)];
      y[static_cast<std::size_t>(i)] = s / at(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
      Real s = y[static_cast<std::size_t>(i)];
      for (int k = i + 1; k <= std::min(n - 1, i + m); ++k) {
        s -= at(k, i) * y[static_cast<std::size_t>(k)];
      }
      y[static_cast<std::size_t>(i)] = s / at(i, i);
    }
    return y;
  }
};

// Tridiagonal T - sigma I solve with partial pivoting (one fill diagonal).
struct ShiftedTridiagSolver {
  int n;
  std::vector<Real> dl, d, du, du2;  // subdiag, diag, superdiag, fill
  std::vector<int> pivot;            // 1 if rows swapped at step i

  ShiftedTridiagSolver(const Matrix& T, const Real& sigma)
      : n(static_cast<int>(T.rows())),
        dl(static_cast<std::size_t>(n), Real(0)),
        d(static_cast<std::size_t>(n), Real(0)),
        du(static_cast<std::size_t>(n), Real(0)),
        du2(static_cast<std::size_t>(n), Real(0)),
        pivot(static_cast<std::size_t>(n), 0) {
    for (int i = 0; i < n; ++i) {
      d[static_cast<std::size_t>(i)] = Real(T(i, i)) - sigma;
      if (i + 1 < n) {
        dl[static_cast<std::size_t>(i + 1)] = Real(T(i + 1, i));
        du[static_cast<std::size_t>(i)] = Real(T(i, i + 1));
      }
    }
    for (int i = 0; i + 1 < n; ++i) {
      auto I = static_cast<std::size_t>(i);
      if (abs(dl[I + 1]) > abs(d[I])) {
        pivot[I] = 1;
        std::swap(d[I], dl[I + 1]);
        std::swap(du[I], d[I + 1]);
        if (i + 2 < n) std::swap(du2[I], du[I + 1]);
      }
      if (d[I] == 0) {
        d[I] = Real(1e-300);  // exactly singular shift; keep the solve finite
      }
      const Real l = dl[I + 1] / d[I];
      dl[I + 1] = l;  // store the multiplier
      d[I + 1] -= l * du[I];
      if (i + 2 < n) du[I + 1] -= l * du2[I];
    }
  }

  void solve(std::vector<Real>& x) const {
    for (int i = 0; i + 1 < n; ++i) {
      auto I = static_cast<std::size_t>(i);
      if (pivot[I]) std::swap(x[I], x[I + 1]);
      x[I + 1] -= dl[I + 1] * x[I];
    }
    for (int i = n - 1; i >= 0; --i) {
      auto I = static_cast<std::size_t>(i);
      Real s = x[I];
      if (i + 1 < n) s -= du[I] * x[I + 1];
      if (i + 2 < n) s -= du2[I] * x[I + 2];
      x[I] = s / (d[I] == 0 ? Real(1e-300) : d[I]);
    }
  }
};

}  // namespace

Matrix mp_banded_inverse_abs(const Matrix& A, int m) {
  const int n = static_cast<int>(A.rows());
  BandChol chol(A, m);
  Matrix out(n, n);
  for (int j = 0; j < n; ++j) {
    std::vector<Real> x = chol.solve_unit(j);
    for (int i = 0; i < n; ++i) {
      out(i, j) = static_cast<double>(abs(x[static_cast<std::size_t>(i)]));
    }
  }
  return out;
}

DecayProfile mp_tridiag_projector_decay(const Matrix& H, double mu) {
  const int n = static_cast<int>(H.rows());
  for (int j = 0; j < n; ++j) {
    for (int i = j + 2; i < n; ++i) {
      if (H(i, j) != 0.0) {
        throw std::runtime_error("mp_tridiag_projector_decay: matrix is not tridiagonal");
      }
    }
  }
  auto [lam, V] = jacobi_eigh<double>(H);

  // Refine every eigenpair below mu with Rayleigh-quotient iteration.
  std::vector<std::vector<Real>> vectors;
  for (int idx = 0; idx < n; ++idx) {
    if (!(lam(idx) < mu)) continue;
    std::vector<Real> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = Real(V(i, idx));
    Real sigma(lam(idx));
    for (int iter = 0; iter < 4; ++iter) {
      ShiftedTridiagSolver solver(H, sigma);
      solver.solve(x);
      Real norm(0);
      for (const Real& v : x) norm += v * v;
      norm = sqrt(norm);
      for (Real& v : x) v /= norm;
      // Rayleigh quotient of the tridiagonal matrix.
      Real rq(0);
      for (int i = 0; i < n; ++i) {
        Real hv = Real(H(i, i)) * x[static_cast<std::size_t>(i)];
        if (i > 0) hv += Real(H(i, i - 1)) * x[static_cast<std::size_t>(i - 1)];
        if (i + 1 < n) hv += Real(H(i, i + 1)) * x[static_cast<std::size_t>(i + 1)];
        rq += x[static_cast<std::size_t>(i)] * hv;
      }
      sigma = rq;
    }
    vectors.push_back(std::move(x));
  }

  // P = sum v v^T accumulated per diagonal; only the max per diagonal is kept.
  DecayProfile d;
  d.source = "projector";
  d.values.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<Real> diag_entries;
  for (int k = 0; k < n; ++k) {
    Real best(0);
    for (int i = 0; i + k < n; ++i) {
      Real entry(0);
      for (const std::vector<Real>& v : vectors) {
        entry += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i + k)];
      }
      if (abs(entry) > best) best = abs(entry);
    }
    d.values[static_cast<std::size_t>(k)] = static_cast<double>(best);
  }
  return d;
}

}  // namespace gapline::testing
