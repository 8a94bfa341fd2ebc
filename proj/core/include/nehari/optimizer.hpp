#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nehari/field.hpp"
#include "nehari/model.hpp"
#include "nehari/problem.hpp"

namespace nehari {

enum class Algorithm {
  rsd,    ///< Riemannian steepest descent with a fixed step
  rag,    ///< accelerated: nonlinear extrapolation + Nesterov momentum
  nmrag,  ///< accelerated step safeguarded by a nonmonotone Armijo search
};

std::string_view to_string(Algorithm a) noexcept;
/// Case-insensitive; accepts "rsd", "rag", "nmrag" (also with a "-n" suffix).
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct SolverOptions {
  Algorithm algorithm = Algorithm::rag;
  double alpha = 0.1;       ///< fixed step
  double alpha0 = 0.1;      ///< initial Armijo trial step
  double sigma = 1e-3;      ///< Armijo slope
  double varrho = 0.85;     ///< weight of the running reference value
  double beta = 0.25;       ///< backtracking factor
  double tol = 1e-6;        ///< residual tolerance
  int max_iter = 20000;
  int max_backtracks = 50;
  std::optional<std::uint64_t> rng_seed;
  /// Reset the momentum schedule whenever the energy increases. Off by default.
  bool restart_momentum = false;
  /// Use this constant extrapolation coefficient instead of the schedule
  /// (0 turns the accelerated schemes into their non-extrapolated versions).
  std::optional<double> fixed_momentum;
  /// Divergence guards: E(u_n) > energy_blowup * |E(u_0)| or r_n > residual_blowup.
  double energy_blowup = 1e3;
  double residual_blowup = 1e6;
};

/// Throws std::invalid_argument naming the first offending option.
void validate_options(const SolverOptions& opts);

/// theta_0 = 0, theta_n = (1 + sqrt(1 + 4 theta_{n-1}^2)) / 2,
/// t_n = (theta_{n-1} - 1) / theta_n.
struct MomentumState {
  double theta_prev = 0.0;
  double theta = 0.0;
  double t = 0.0;
  int n = 0;
};

MomentumState momentum_next(const MomentumState& s) noexcept;

/// Running reference value of the nonmonotone search: Q_n = varrho Q_{n-1} + 1,
/// C_n = (varrho Q_{n-1} C_{n-1} + E_n) / Q_n, starting at Q_0 = 1, C_0 = E(u_0).
struct NonmonotoneState {
  double C = 0.0;
  double Q = 1.0;
};

NonmonotoneState nonmonotone_update(const NonmonotoneState& s, double energy_new,
                                    double varrho) noexcept;

enum class StepKind { initial, rsd, rag_extrapolated, armijo_fallback };
std::string_view to_string(StepKind k) noexcept;

struct IterationRecord {
  int n = 0;
  double energy = 0.0;
  double residual = 0.0;
  StepKind step_kind = StepKind::initial;
  double alpha_used = 0.0;
  int backtracks = 0;
  std::optional<double> C;  ///< reference value the Armijo test compared against
  std::optional<double> t;  ///< momentum coefficient used for extrapolation
  /// ||grad_N E(u_{n-1})||_h^2 and the accepted Armijo step at u_{n-1}
  /// (nmRAG only); together with C they certify the sufficient decrease.
  std::optional<double> grad_norm_sq;
  std::optional<double> armijo_alpha;
};

enum class SolveStatus { converged, max_iterations, diverged, line_search_failed, breakdown };
std::string_view to_string(SolveStatus s) noexcept;

struct SolveResult {
  Field final;
  std::vector<IterationRecord> history;
  SolveStatus status = SolveStatus::max_iterations;
  bool converged = false;
  bool diverged = false;
  int iterations = 0;
  double wall_time = 0.0;  ///< seconds spent in the iteration loop
  std::string message;     ///< diagnostic for non-converged endings
};

/// w = pullback(u_n + t (u_n - u_prev)); returns u_n unchanged when t == 0 or
/// u_n == u_prev.
Field extrapolate(const Field& u_n, const Field& u_prev, double t,
                  const Problem& p);

/// retract(u, -alpha grad_N E(u))
Field rsd_step(const Field& u, double alpha, const Problem& p);

struct RagStep {
  Field next;
  MomentumState momentum;
};

/// Advances the momentum, extrapolates, then takes an RSD step from the
/// extrapolated point.
RagStep rag_step(const Field& u_n, const Field& u_prev, const MomentumState& mom,
                 double alpha, const Problem& p);
/// Same with an explicit extrapolation coefficient; the schedule still advances.
RagStep rag_step(const Field& u_n, const Field& u_prev, const MomentumState& mom,
                 double alpha, std::optional<double> fixed_t, const Problem& p);

struct ArmijoResult {
  Field v;
  double alpha_used = 0.0;
  int backtracks = 0;
  double energy = 0.0;
};

/// Smallest j in [0, max_backtracks] with
///   E(R_u(-alpha0 beta^j grad_N E(u))) <= C - sigma alpha0 beta^j ||grad_N E(u)||^2.
/// Throws LineSearchFailedError otherwise.
ArmijoResult armijo_search(const Field& u, double C, const SolverOptions& opts,
                           const Problem& p);
/// Same, reusing a direction already computed at u.
ArmijoResult armijo_search(const Field& u, const DescentDirection& dir, double C,
                           const SolverOptions& opts, const Problem& p);

struct NmragStep {
  Field next;
  MomentumState momentum;
  NonmonotoneState nonmonotone;
  IterationRecord record;  ///< energy/residual of `next` are left for the caller
};

/// One pass of the safeguarded accelerated scheme. `nm` holds (C_{n-1}, Q_{n-1});
/// `energy_n` is E(u_n).
NmragStep nmrag_step(const Field& u_n, const Field& u_prev,
                     const MomentumState& mom, const NonmonotoneState& nm,
                     double energy_n, const SolverOptions& opts, const Problem& p);

/// Iterates from u0 (expected on the manifold) until the residual drops to
/// opts.tol or opts.max_iter steps were taken. history[0] describes u0.
SolveResult run(const Problem& p, const Field& u0, const SolverOptions& opts);

}  // namespace nehari
