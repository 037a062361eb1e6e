#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "sdlab/analysis.hpp"
#include "sdlab/solve.hpp"

namespace sdlab {

enum class Suite {
  Convergence,
  Nonuniqueness,
  PinningEquivalence,
  Oscillation,
  EnergyStability,
  DriftNorms,
  EpsilonContinuation,
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string name;
  Suite suite = Suite::Convergence;
  double alpha = 0.0;
  double beta = 0.0;  // swirl strength where a divergence-free part is used
  std::vector<std::pair<int, int>> grids;  // (n_r, n_theta)
  Scheme scheme = Scheme::Centered;
  double tol = 1e-8;
  double q = 4.0;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
};

struct GridReport {
  int n_r = 0;
  int n_theta = 0;
  EstimateReport estimate;
  SolveReport solve;
};

struct RunRecord {
  ExperimentConfig config;
  std::vector<GridReport> reports;
  std::map<std::string, double> metrics;
  double wall_clock_ms = 0.0;
  std::vector<std::string> artifacts;
};

std::string suite_name(Suite s);
Suite suite_from_name(const std::string& name);  // throws ConfigError

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Executes the suite deterministically, writes CSV + JSON + SVG artifacts
// under output_dir/name/, and returns the record. All measurement values are
// reproducible bit-for-bit; wall_clock_ms is timing metadata and is not.
RunRecord run(const ExperimentConfig& config);

// Writes the suite CSV for a completed record; byte-identical on re-emission.
// Returns the file path.
std::string emit_table(const RunRecord& record);

std::string record_to_json_text(const RunRecord& record);
RunRecord record_from_json_text(const std::string& text);
// exact (bitwise on numbers) equality, for round-trip checks
bool record_equal(const RunRecord& a, const RunRecord& b);

// --- source profiles used by the suites -----------------------------------

// smooth bump supported in the annulus 0.4 < r < 0.6
ScalarFn annulus_bump(double amplitude = 10.0);
// smooth bump of radius rho centered at (cx, cy)
ScalarFn disk_bump(double cx, double cy, double rho, double amplitude);
// seeded family of bump sources with centers in the annulus 0.3 < r < 0.7
std::vector<ScalarFn> seeded_bump_sources(std::uint64_t seed, int count);

}  // namespace sdlab
