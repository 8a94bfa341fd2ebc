#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nehari/field.hpp"
#include "nehari/optimizer.hpp"
#include "nehari/scenarios.hpp"

namespace nehari {

/// Malformed or invalid configuration. `line()` is set for syntax errors,
/// `field()` (a JSON pointer such as "/solver/sigma") for semantic ones.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::optional<int> line,
              std::string field);
  std::optional<int> line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::optional<int> line_;
  std::string field_;
};

struct OutputToggles {
  bool history = true;
  bool fields = true;
  bool metadata = true;
};

struct SweepConfig {
  std::vector<ParamMap> points;       ///< builder overrides, one per row
  std::vector<std::uint64_t> seeds;   ///< each point is solved once per seed
  double classify_threshold = 1e-4;
  int threads = 0;
};

/// Fully resolved run description; every default is explicit.
struct RunConfig {
  /// Builder name, or "inline" when the scenario was spelled out.
  std::string scenario_name;
  ParamMap scenario_params;
  ScenarioSpec scenario;  ///< resolved spec, grid included
  SolverOptions solver;
  std::filesystem::path output_dir = "out";
  OutputToggles outputs;
  bool compat_unscaled_ih = false;
  std::vector<Algorithm> compare_algorithms{Algorithm::rsd, Algorithm::rag,
                                            Algorithm::nmrag};
  SweepConfig sweep;

  InteractionScaling scaling() const noexcept {
    return compat_unscaled_ih ? InteractionScaling::unscaled
                              : InteractionScaling::quadrature;
  }
};

/// Parses the JSON configuration format documented in the README.
/// Unknown keys are rejected. Throws ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Re-validates after command-line overrides (names resolve, options valid).
void validate_config(const RunConfig& config);

/// Full effective configuration as pretty-printed JSON. Parsing the result
/// gives back an equivalent RunConfig.
std::string config_to_json(const RunConfig& config);

/// Solver starting point for a config: the scenario's initial guess, or a
/// randomized start when solver.rng_seed is set.
Field config_initial_guess(const RunConfig& config, const Problem& p);

// history.csv: '#' comment lines, then the header
//   n,energy,residual,step_kind,alpha_used,backtracks,C,t,grad_norm_sq,armijo_alpha
// and one row per record. Absent optional values are empty cells.
void write_history_csv(const std::filesystem::path& path,
                       const std::vector<IterationRecord>& history,
                       const std::vector<std::string>& comments = {});
std::vector<IterationRecord> read_history_csv(const std::filesystem::path& path);

/// "%.17g"
std::string format_double(double x);

/// field_<i>.bin (raw little-endian float64, (M-1) x (M-1) row-major with the
/// x index slow) for every component plus field_meta.json.
void write_field(const std::filesystem::path& dir, const Field& u);
Field read_field(const std::filesystem::path& dir);

/// sweep.csv with a header row; rows in input order.
void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepRow>& rows);

}  // namespace nehari
