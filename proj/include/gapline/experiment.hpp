#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gapline/bounds.hpp"
#include "gapline/matrix_factory.hpp"
#include "gapline/projector.hpp"

namespace gapline {

// Exit codes shared by the CLI commands.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitBoundViolation = 3,
  kExitNumerical = 4,
};

struct IntervalCount {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
};

// One experiment: a spectrum recipe plus bandwidth, seed, bound families,
// thresholds and output location.
struct ExperimentConfig {
  std::string name = "matrix";
  std::optional<std::string> preset;           // fig1|fig2|fig3|fig4|table1
  std::vector<double> explicit_eigenvalues;    // explicit list, or
  std::vector<IntervalCount> intervals;        // evenly spaced on intervals
  int m = 1;
  std::uint64_t seed = 1;
  std::vector<BoundFamily> families;
  std::vector<double> epsilons{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  std::string out_dir = ".";
  double tol = 1e-10;
  bool allow_large = false;
  bool scale_to_unit = false;    // opt-in rescaling to b = 1
  K2Variant k2 = K2Variant::proof;
  double compare_floor = 0.0;    // measurement floor for violation checks

  int n() const;
};

// The paper's experiment configurations. `table1` is the fig1 matrix plus
// the five-threshold truncation report.
ExperimentConfig preset_config(const std::string& name, std::uint64_t seed = 1);

// Eigenvalues described by the recipe (sorted ascending). Evenly spaced
// inclusive grids realize "uniformly distributed on intervals"
// deterministically; the seed only randomizes the orthogonal basis.
std::vector<double> build_eigenvalues(const ExperimentConfig& config);

// Gap geometry derived from an eigenvalue list (a = min|lambda| etc).
SpectrumSpec spectrum_of(std::span<const double> eigenvalues);

// Default projector bound families: B1, B2, B3, quadrature, SL.
std::vector<BoundFamily> default_families();

// Commands. Each returns an ExitCode and logs human-readable progress.
int cmd_generate(const ExperimentConfig& config, std::ostream& log);
int cmd_analyze(const std::string& matrix_path, double mu, const std::string& out_dir,
                std::ostream& log);
int cmd_bounds(const BoundContext& ctx, const std::vector<BoundFamily>& families,
               int k_lo, int k_hi, const std::string& out_dir, std::ostream& log);
// When the projector itself is supplied the report's error norms are exact;
// otherwise they are certified profile-derived bounds (max norm still exact).
int cmd_compare(const std::string& decay_csv, const std::vector<std::string>& bound_csvs,
                const std::vector<double>& epsilons, int m, const std::string& out_dir,
                double floor, std::ostream& log, const Matrix* projector = nullptr);
int cmd_reproduce(const std::string& what, std::uint64_t seed, const std::string& out_dir,
                  double tol, K2Variant k2, std::ostream& log);

// Flat key/value config file ([experiment] / [spectrum] sections); parsed
// keys overwrite the corresponding config fields. See docs/config.md.
void load_config_file(const std::string& path, ExperimentConfig& config);

// The embedded SpectrumSpec block (keys a, b, b1, b2, mu, scale, shift) of a
// config file's [spectrum] section, when one is present.
std::optional<SpectrumSpec> spectrum_block_from_config(const std::string& path);

}  // namespace gapline
