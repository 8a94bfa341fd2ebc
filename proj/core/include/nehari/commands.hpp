#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nehari/io.hpp"
#include "nehari/optimizer.hpp"
#include "nehari/scenarios.hpp"

namespace nehari {

/// Builds the problem and initial guess for a config and runs the solver.
/// Nothing is written to disk.
SolveResult solve_config(const RunConfig& config);

/// Runs solve_config and writes history.csv, field_<i>.bin + field_meta.json
/// and run_meta.json into config.output_dir (subject to the output toggles).
/// Returns the process exit code: 0 unless the configuration is invalid or
/// the line search failed; a run that does not converge still returns 0.
int solve_command(const RunConfig& config, std::ostream& log);

struct CompareRow {
  Algorithm algorithm = Algorithm::rsd;
  bool ok = false;
  std::string error;
  SolveStatus status = SolveStatus::max_iterations;
  int iterations = 0;
  double wall_time = 0.0;
  double final_residual = 0.0;
  double final_energy = 0.0;
  std::vector<IterationRecord> history;
};

/// Every algorithm in config.compare_algorithms from the same starting point.
std::vector<CompareRow> compare_algorithms(const RunConfig& config);

/// Writes compare.csv (one row per algorithm), residuals.csv (aligned residual
/// histories) and history_<ALG>.csv. Per-algorithm failures are recorded.
int compare_command(const RunConfig& config, std::ostream& log);

/// Expands config.sweep into points (one per parameter row and seed) and runs
/// them. Parameters of each row override the scenario parameters.
std::vector<SweepRow> run_sweep(const RunConfig& config);

/// run_sweep followed by sweep.csv.
int sweep_command(const RunConfig& config, std::ostream& log);

struct PropertyCheck {
  enum class Status { pass, fail, skipped };
  std::string name;
  Status status = Status::pass;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string note;
};

std::string to_string(PropertyCheck::Status s);

struct VerifyOptions {
  double half_width = 1.0;
  int subdivisions = 64;
  /// Replaces the grid (fault injection).
  std::optional<Grid> grid;
  InteractionScaling scaling = InteractionScaling::quadrature;
  std::uint64_t seed = 20240607;
  int gradient_pairs = 20;
  int manifold_points = 100;
};

/// Runtime oracle suite: direct-sum DST, transform round-trip, manufactured
/// Poisson problem, finite-difference gradients, manifold invariants and
/// quadrature consistency of I_h.
std::vector<PropertyCheck> run_verification(const VerifyOptions& options);

/// Prints the report as JSON; returns 1 if any property failed.
int verify_command(const VerifyOptions& options, std::ostream& out);

/// Library version string.
std::string version();

}  // namespace nehari
