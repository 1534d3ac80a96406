#pragma once

#include <string>
#include <vector>

#include "gapline/bounds.hpp"
#include "gapline/matrix_factory.hpp"
#include "gapline/projector.hpp"

namespace gapline {

// Matrix file format: header `gapline-matrix v1 n=<n> m=<m>`, then n rows of
// n space-separated values at 17 significant digits. Companion files:
// <stem>.eigs (one eigenvalue per line) and <stem>.basis (V, same layout as
// the matrix body, no header).
void write_matrix_file(const std::string& path, const BandedHermitian& H);
void write_eigs_file(const std::string& path, const Vector& lambda);
void write_basis_file(const std::string& path, const Matrix& V);

// Loads the matrix; picks up <stem>.eigs / <stem>.basis next to it when
// present and attaches them as provenance.
BandedHermitian read_matrix_file(const std::string& path);
Vector read_eigs_file(const std::string& path);
Matrix read_basis_file(const std::string& path, int n);

// CSV: decay profiles serialize as `k,value` rows.
void write_decay_csv(const std::string& path, const DecayProfile& profile);
DecayProfile read_decay_csv(const std::string& path);

// CSV: bound curves serialize as `k,raw,capped,param` (param empty for
// non-optimized families).
void write_bound_csv(const std::string& path, const BoundCurve& curve);
BoundCurve read_bound_csv(const std::string& path);

// CSV: truncation report, one row per epsilon.
void write_report_csv(const std::string& path, const std::vector<TruncationReport>& rows);

std::string format_double(double v);  // %.17g

}  // namespace gapline
