#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nehari/field.hpp"
#include "nehari/optimizer.hpp"
#include "nehari/problem.hpp"

namespace nehari {

/// External potential a_i(x, y) in closed form.
struct PotentialSpec {
  enum class Kind { constant, harmonic, harmonic_plus_one, gaussian_stirrer, custom };

  Kind kind = Kind::constant;
  double scale = 1.0;   ///< multiplies the harmonic kinds
  double omega = 0.0;   ///< constant value
  double height = 0.0;  ///< stirrer height w
  double width = 1.0;   ///< stirrer decay rate delta
  double center_x = 0.0;
  double center_y = 0.0;
  std::vector<double> samples;  ///< custom nodal values, row-major interior

  static PotentialSpec constant(double omega);
  /// scale * (x^2 + y^2)
  static PotentialSpec harmonic(double scale = 1.0);
  /// scale * (x^2 + y^2 + 1)
  static PotentialSpec harmonic_plus_one(double scale = 1.0);
  /// x^2 + y^2 + w exp(-delta ((x - xc)^2 + (y - yc)^2))
  static PotentialSpec gaussian_stirrer(double w, double delta, double xc, double yc);
  static PotentialSpec custom(std::vector<double> samples);

  ScalarField sample(const Grid& grid) const;
};

std::string to_string(PotentialSpec::Kind kind);
std::optional<PotentialSpec::Kind> parse_potential_kind(const std::string& name);

struct InitialGuessSpec {
  enum class Kind { gaussian, randomized };
  Kind kind = Kind::gaussian;
  std::uint64_t seed = 0;
};

/// Everything needed to build a Problem and its starting point.
struct ScenarioSpec {
  std::string name;
  int m = 1;
  std::vector<double> eps;
  std::vector<PotentialSpec> potentials;
  std::vector<double> coupling;  ///< row-major m x m
  double half_width = 1.0;
  int subdivisions = 64;
  InitialGuessSpec initial;
};

/// Throws std::invalid_argument when the spec is inconsistent or the resulting
/// problem is inadmissible.
Problem build_problem(const ScenarioSpec& spec,
                      InteractionScaling scaling = InteractionScaling::quadrature);

/// exp(-16 (x^2 + y^2)) in every component, pulled back onto the manifold.
Field gaussian_initial(const Problem& p);
/// The Gaussian profile times independent uniform(0,1) factors drawn from a
/// counter-based generator keyed by (seed, component, node), pulled back.
Field randomized_initial(const Problem& p, std::uint64_t seed);
/// Same factors before the pullback; exposed for testing.
Field randomized_profile(const Grid& grid, int m, std::uint64_t seed);
Field initial_guess(const ScenarioSpec& spec, const Problem& p);

/// Uniform (0,1) value for the given counter; a pure function of its inputs.
double counter_uniform(std::uint64_t seed, std::uint64_t counter) noexcept;

/// m = 3, eps = 1, a = 2(x^2 + y^2 + 1), g11 = 2, g22 = 4, g33 = 6,
/// g12 = g13 = 4, g23 given.
ScenarioSpec example1(double g23 = 6.0);
/// m = 4, eps = 1, a = 2(x^2 + y^2 + 1), diag (2, 4, 6, 8), the other
/// couplings 4 except g34.
ScenarioSpec example2(double g34 = 8.0);
/// m = 4 with g13 = g14 = 2 and g34 = 8.
ScenarioSpec example3();
/// m = 2, eps = 1, constant potentials omega_i.
ScenarioSpec two_component_semitrivial(double omega1, double omega2, double g11,
                                       double g22, double g12);
/// m = 2, eps = 1, g = [[1, 10], [10, 3]], harmonic trap plus a Gaussian
/// stirrer per component; randomized start.
ScenarioSpec gaussian_stirrer(double w, double delta, double xc1, double yc1,
                              double xc2, double yc2);
/// m = 2, small eps, a = x^2 + y^2 + 1, g = [[1, 10], [10, 3]], M = 128.
ScenarioSpec singular_diffusion(double eps);

using ParamMap = std::map<std::string, double>;

struct ScenarioBuilder {
  std::string name;
  std::string description;
  ParamMap defaults;
  std::function<ScenarioSpec(const ParamMap&)> build;
};

const std::vector<ScenarioBuilder>& scenario_builders();
/// Looks up a builder and applies `overrides` to its defaults. Throws
/// std::invalid_argument listing the available names (or parameters) when
/// something does not resolve.
ScenarioSpec build_named(const std::string& name, const ParamMap& overrides = {});
const ScenarioBuilder& find_builder(const std::string& name);

enum class ComponentClass { trivial, nontrivial };
enum class SolutionClass { semi_trivial, fully_nontrivial, degenerate };
std::string to_string(SolutionClass c);

struct Classification {
  std::vector<ComponentClass> components;
  SolutionClass overall = SolutionClass::degenerate;
};

/// Component i is trivial iff ||u_i||_inf < rel_threshold * max_j ||u_j||_inf.
Classification classify_solution(const Field& u, double rel_threshold = 1e-4);

/// Largest relative sup-norm defect of u under the reflections x -> -x,
/// y -> -y and the diagonal swap (x, y) -> (y, x). Zero for a fully symmetric
/// state.
double symmetry_defect(const Field& u);

struct SweepPoint {
  ParamMap params;
  std::optional<std::uint64_t> seed;  ///< randomized start when set
};

struct SweepRow {
  ParamMap params;
  std::optional<std::uint64_t> seed;
  bool ok = false;
  std::string error;
  Classification classification;
  SolveStatus status = SolveStatus::max_iterations;
  bool converged = false;
  double energy = 0.0;
  double residual = 0.0;
  int iterations = 0;
  double symmetry_defect = 0.0;
  std::vector<double> component_max;
};

struct SweepSettings {
  SolverOptions solver;
  double classify_threshold = 1e-4;
  InteractionScaling scaling = InteractionScaling::quadrature;
  int threads = 0;  ///< 0: default_thread_count()
  /// Grid override applied to every built spec when set.
  std::optional<double> half_width;
  std::optional<int> subdivisions;
};

/// One independent solve per point; rows come back in input order. A failing
/// row is recorded (ok = false) and the sweep continues.
std::vector<SweepRow> sweep_coupling(
    const std::function<ScenarioSpec(const ParamMap&)>& builder,
    const std::vector<SweepPoint>& points, const SweepSettings& settings);

/// Thread count from NEHARI_NUM_THREADS, else the hardware concurrency.
int default_thread_count();

}  // namespace nehari
