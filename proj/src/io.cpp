#include "gapline/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gapline/errors.hpp"

namespace gapline {
namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open for reading: " + path);
  return in;
}

void write_matrix_body(std::ofstream& out, const Matrix& M) {
  char buf[32];
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", M(i, j));
      if (j) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

Matrix read_matrix_body(std::ifstream& in, int n, const std::string& what) {
  Matrix M(n, n);
  for (int i = 0; i < n; ++i) {
    std::string line;
    if (!std::getline(in, line)) throw Error(what + ": truncated body");
    const char* p = line.c_str();
    char* end = nullptr;
    for (int j = 0; j < n; ++j) {
      M(i, j) = std::strtod(p, &end);
      if (end == p) throw Error(what + ": malformed row");
      p = end;
    }
  }
  return M;
}

std::string stem_of(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
  return path.substr(0, dot);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix_file(const std::string& path, const BandedHermitian& H) {
  auto out = open_out(path);
  out << "gapline-matrix v1 n=" << H.n << " m=" << H.m << '\n';
  write_matrix_body(out, H.data);
}

void write_eigs_file(const std::string& path, const Vector& lambda) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < lambda.size(); ++i) out << format_double(lambda(i)) << '\n';
}

void write_basis_file(const std::string& path, const Matrix& V) {
  auto out = open_out(path);
  write_matrix_body(out, V);
}

BandedHermitian read_matrix_file(const std::string& path) {
  auto in = open_in(path);
  std::string header;
  if (!std::getline(in, header)) throw Error("empty matrix file: " + path);
  int n = -1, m = -1;
  if (std::sscanf(header.c_str(), "gapline-matrix v1 n=%d m=%d", &n, &m) != 2 ||
      n <= 0 || m < 0) {
    throw Error("bad matrix header in " + path);
  }
  BandedHermitian H;
  H.n = n;
  H.m = m;
  H.data = read_matrix_body(in, n, path);

  const std::string stem = stem_of(path);
  const std::string eigs_path = stem + ".eigs";
  const std::string basis_path = stem + ".basis";
  if (std::filesystem::exists(eigs_path) && std::filesystem::exists(basis_path)) {
    H.eigenvalues = read_eigs_file(eigs_path);
    H.basis = read_basis_file(basis_path, n);
  }
  return H;
}

Vector read_eigs_file(const std::string& path) {
  auto in = open_in(path);
  std::vector<double> vals;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    vals.push_back(std::strtod(line.c_str(), nullptr));
  }
  Vector v(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) v(static_cast<Eigen::Index>(i)) = vals[i];
  return v;
}

Matrix read_basis_file(const std::string& path, int n) {
  auto in = open_in(path);
  return read_matrix_body(in, n, path);
}

void write_decay_csv(const std::string& path, const DecayProfile& profile) {
  auto out = open_out(path);
  out << "k,value\n";
  for (int k = 0; k < profile.size(); ++k) {
    out << k << ',' << format_double(profile.values[static_cast<std::size_t>(k)]) << '\n';
  }
}

DecayProfile read_decay_csv(const std::string& path) {
  auto in = open_in(path);
  DecayProfile d;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error("bad decay csv row in " + path);
    d.values.push_back(std::strtod(line.c_str() + comma + 1, nullptr));
  }
  return d;
}

void write_bound_csv(const std::string& path, const BoundCurve& curve) {
  auto out = open_out(path);
  out << "# family=" << family_name(curve.family);
  for (const auto& [key, val] : curve.params) out << ' ' << key << '=' << format_double(val);
  out << '\n';
  out << "k,raw,capped,param\n";
  for (const BoundPoint& p : curve.points) {
    out << p.k << ',' << format_double(p.raw) << ',' << format_double(p.capped) << ',';
    if (p.has_param) out << format_double(p.param);
    out << '\n';
  }
}

BoundCurve read_bound_csv(const std::string& path) {
  auto in = open_in(path);
  BoundCurve curve;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string tok;
      while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "family") {
          if (auto f = family_from_name(val)) curve.family = *f;
        } else {
          curve.params[key] = std::strtod(val.c_str(), nullptr);
        }
      }
      continue;
    }
    if (line.rfind("k,", 0) == 0) continue;  // column header
    BoundPoint p;
    const char* s = line.c_str();
    char* end = nullptr;
    p.k = static_cast<int>(std::strtol(s, &end, 10));
    if (*end != ',') throw Error("bad bound csv row in " + path);
    s = end + 1;
    p.raw = std::strtod(s, &end);
    if (*end != ',') throw Error("bad bound csv row in " + path);
    s = end + 1;
    p.capped = std::strtod(s, &end);
    if (*end == ',') {
      s = end + 1;
      if (*s != '\0') {
        p.param = std::strtod(s, nullptr);
        p.has_param = true;
      }
    }
    curve.points.push_back(p);
  }
  return curve;
}

void write_report_csv(const std::string& path, const std::vector<TruncationReport>& rows) {
  auto out = open_out(path);
  out << "epsilon,m1,m2,m3,mSL,mP,err_max,err_1,err_inf,err_2\n";
  for (const TruncationReport& r : rows) {
    out << format_double(r.epsilon) << ',' << r.m1 << ',' << r.m2 << ',' << r.m3 << ','
        << r.mSL << ',' << r.m_exact << ',' << format_double(r.errors.max) << ','
        << format_double(r.errors.one) << ',' << format_double(r.errors.inf) << ','
        << format_double(r.errors.two) << '\n';
  }
}

}  // namespace gapline
