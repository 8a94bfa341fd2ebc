#include "nehari/optimizer.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "nehari/errors.hpp"

#if defined(__SSE2__)
#include <xmmintrin.h>
#endif

namespace nehari {

namespace {

// Spectral tails of converging iterates decay into the subnormal range, where
// x86 arithmetic is several times slower. Flush them to zero for the duration
// of a run and restore the caller's mode afterwards.
class FlushSubnormals {
 public:
#if defined(__SSE2__)
  FlushSubnormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }
  ~FlushSubnormals() { _mm_setcsr(saved_); }

 private:
  unsigned int saved_;
#endif
};

}  // namespace

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::rsd: return "RSD";
    case Algorithm::rag: return "RAG";
    case Algorithm::nmrag: return "NMRAG";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  std::string s;
  for (char c : name) {
    if (c != '-' && c != '_') {
      s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (s.size() > 1 && s.back() == 'n') s.pop_back();
  if (s == "rsd") return Algorithm::rsd;
  if (s == "rag") return Algorithm::rag;
  if (s == "nmrag") return Algorithm::nmrag;
  return std::nullopt;
}

std::string_view to_string(StepKind k) noexcept {
  switch (k) {
    case StepKind::initial: return "initial";
    case StepKind::rsd: return "rsd";
    case StepKind::rag_extrapolated: return "rag_extrapolated";
    case StepKind::armijo_fallback: return "armijo_fallback";
  }
  return "?";
}

std::string_view to_string(SolveStatus s) noexcept {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::diverged: return "diverged";
    case SolveStatus::line_search_failed: return "line_search_failed";
    case SolveStatus::breakdown: return "breakdown";
  }
  return "?";
}

void validate_options(const SolverOptions& o) {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  auto open_unit = [](double x) { return x > 0.0 && x < 1.0; };
  if (!(o.alpha > 0.0) || !std::isfinite(o.alpha)) fail("alpha must be positive");
  if (!(o.alpha0 > 0.0) || !std::isfinite(o.alpha0)) fail("alpha0 must be positive");
  if (!open_unit(o.sigma)) fail("sigma must lie in (0,1)");
  if (!open_unit(o.varrho)) fail("varrho must lie in (0,1)");
  if (!open_unit(o.beta)) fail("beta must lie in (0,1)");
  if (!(o.tol > 0.0)) fail("tol must be positive");
  if (o.max_iter < 1) fail("max_iter must be >= 1");
  if (o.max_backtracks < 1) fail("max_backtracks must be >= 1");
  if (!(o.energy_blowup > 0.0) || !(o.residual_blowup > 0.0)) {
    fail("divergence thresholds must be positive");
  }
}

MomentumState momentum_next(const MomentumState& s) noexcept {
  MomentumState next;
  next.theta_prev = s.theta;
  next.theta = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * s.theta * s.theta));
  next.t = (s.theta - 1.0) / next.theta;
  next.n = s.n + 1;
  return next;
}

NonmonotoneState nonmonotone_update(const NonmonotoneState& s, double energy_new,
                                    double varrho) noexcept {
  NonmonotoneState next;
  next.Q = varrho * s.Q + 1.0;
  next.C = (varrho * s.Q * s.C + energy_new) / next.Q;
  return next;
}

Field extrapolate(const Field& u_n, const Field& u_prev, double t,
                  const Problem& p) {
  if (t == 0.0 || u_n == u_prev) return u_n;
  Field w = u_n;
  w *= 1.0 + t;
  w.axpy(-t, u_prev);
  return pullback(w, p);
}

namespace {
Field step_along(const Field& u, const Field& eta, double alpha, const Problem& p) {
  Field v = u;
  v.axpy(alpha, eta);
  return pullback(v, p);
}
}  // namespace

Field rsd_step(const Field& u, double alpha, const Problem& p) {
  const DescentDirection dir = descent_direction(u, p);
  return step_along(u, dir.eta, alpha, p);
}

RagStep rag_step(const Field& u_n, const Field& u_prev, const MomentumState& mom,
                 double alpha, std::optional<double> fixed_t, const Problem& p) {
  const MomentumState next = momentum_next(mom);
  const double t = fixed_t.value_or(next.t);
  const Field w = extrapolate(u_n, u_prev, t, p);
  return RagStep{rsd_step(w, alpha, p), next};
}

RagStep rag_step(const Field& u_n, const Field& u_prev, const MomentumState& mom,
                 double alpha, const Problem& p) {
  return rag_step(u_n, u_prev, mom, alpha, std::nullopt, p);
}

ArmijoResult armijo_search(const Field& u, const DescentDirection& dir, double C,
                           const SolverOptions& opts, const Problem& p) {
  double step = opts.alpha0;
  double best_energy = 0.0;
  for (int j = 0; j <= opts.max_backtracks; ++j) {
    Field v = step_along(u, dir.eta, step, p);
    const double e = energy(v, p);
    if (e <= C - opts.sigma * step * dir.eta_norm_sq) {
      return ArmijoResult{std::move(v), step, j, e};
    }
    best_energy = e;
    step *= opts.beta;
  }
  std::ostringstream msg;
  msg << "nonmonotone Armijo search failed after " << opts.max_backtracks
      << " backtracks: ||grad_N E||_h^2 = " << dir.eta_norm_sq << ", C = " << C
      << ", E(u) = " << energy(u, p) << ", last trial E = " << best_energy;
  throw LineSearchFailedError(msg.str());
}

ArmijoResult armijo_search(const Field& u, double C, const SolverOptions& opts,
                           const Problem& p) {
  return armijo_search(u, descent_direction(u, p), C, opts, p);
}

NmragStep nmrag_step(const Field& u_n, const Field& u_prev,
                     const MomentumState& mom, const NonmonotoneState& nm,
                     double energy_n, const SolverOptions& opts, const Problem& p) {
  RagStep accelerated =
      rag_step(u_n, u_prev, mom, opts.alpha, opts.fixed_momentum, p);
  const double energy_z = energy(accelerated.next, p);

  const NonmonotoneState reference = nonmonotone_update(nm, energy_n, opts.varrho);
  const DescentDirection dir = descent_direction(u_n, p);
  ArmijoResult safeguarded = armijo_search(u_n, dir, reference.C, opts, p);

  IterationRecord rec;
  rec.n = mom.n + 1;
  rec.backtracks = safeguarded.backtracks;
  rec.C = reference.C;
  rec.t = opts.fixed_momentum.value_or(accelerated.momentum.t);
  rec.grad_norm_sq = dir.eta_norm_sq;
  rec.armijo_alpha = safeguarded.alpha_used;

  if (energy_z <= safeguarded.energy) {
    rec.step_kind = StepKind::rag_extrapolated;
    rec.alpha_used = opts.alpha;
    rec.energy = energy_z;
    return NmragStep{std::move(accelerated.next), accelerated.momentum, reference,
                     rec};
  }
  rec.step_kind = StepKind::armijo_fallback;
  rec.alpha_used = safeguarded.alpha_used;
  rec.energy = safeguarded.energy;
  return NmragStep{std::move(safeguarded.v), accelerated.momentum, reference, rec};
}

SolveResult run(const Problem& p, const Field& u0, const SolverOptions& opts) {
  const FlushSubnormals flush;
  validate_options(opts);
  if (auto violation = validate_problem(p)) {
    throw std::invalid_argument("inadmissible problem (" + violation->clause +
                                "): " + violation->detail);
  }

  SolveResult result{u0, {}, SolveStatus::max_iterations, false, false, 0, 0.0, {}};
  const double energy0 = energy(u0, p);
  {
    IterationRecord rec;
    rec.energy = energy0;
    rec.residual = residual(u0, p);
    result.history.push_back(rec);
    if (rec.residual <= opts.tol) {
      result.status = SolveStatus::converged;
      result.converged = true;
      return result;
    }
  }

  Field u_prev = u0;
  Field u = u0;
  double energy_u = energy0;
  MomentumState momentum;
  NonmonotoneState reference{energy0, 1.0};

  const auto start = std::chrono::steady_clock::now();
  int n = 0;
  try {
    while (n < opts.max_iter) {
      IterationRecord rec;
      Field next(p.grid(), p.components());
      switch (opts.algorithm) {
        case Algorithm::rsd:
          next = rsd_step(u, opts.alpha, p);
          rec.step_kind = StepKind::rsd;
          rec.alpha_used = opts.alpha;
          rec.energy = energy(next, p);
          break;
        case Algorithm::rag: {
          RagStep step = rag_step(u, u_prev, momentum, opts.alpha,
                                  opts.fixed_momentum, p);
          rec.t = opts.fixed_momentum.value_or(step.momentum.t);
          momentum = step.momentum;
          next = std::move(step.next);
          rec.step_kind = StepKind::rag_extrapolated;
          rec.alpha_used = opts.alpha;
          rec.energy = energy(next, p);
          break;
        }
        case Algorithm::nmrag: {
          NmragStep step =
              nmrag_step(u, u_prev, momentum, reference, energy_u, opts, p);
          momentum = step.momentum;
          reference = step.nonmonotone;
          rec = step.record;
          next = std::move(step.next);
          break;
        }
      }
      ++n;
      rec.n = n;
      rec.residual = residual(next, p);

      const bool energy_up = rec.energy > energy_u;
      u_prev = std::move(u);
      u = std::move(next);
      energy_u = rec.energy;
      result.history.push_back(rec);

      if (!std::isfinite(rec.energy) || !std::isfinite(rec.residual) ||
          rec.energy > opts.energy_blowup * std::abs(energy0) ||
          rec.residual > opts.residual_blowup) {
        result.status = SolveStatus::diverged;
        result.diverged = true;
        std::ostringstream msg;
        msg << "divergence guard tripped at n = " << n << ": E = " << rec.energy
            << ", r = " << rec.residual;
        result.message = msg.str();
        break;
      }
      if (rec.residual <= opts.tol) {
        result.status = SolveStatus::converged;
        result.converged = true;
        break;
      }
      if (opts.restart_momentum && energy_up && opts.algorithm != Algorithm::rsd) {
        momentum = MomentumState{};
        u_prev = u;
      }
    }
  } catch (const LineSearchFailedError& e) {
    result.status = SolveStatus::line_search_failed;
    result.message = e.what();
  } catch (const Error& e) {
    result.status = SolveStatus::breakdown;
    result.diverged = true;
    result.message = e.what();
  }
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  result.iterations = n;
  result.final = std::move(u);
  if (result.status == SolveStatus::max_iterations) {
    std::ostringstream msg;
    msg << "iteration cap " << opts.max_iter << " reached with r = "
        << result.history.back().residual;
    result.message = msg.str();
  }
  return result;
}

}  // namespace nehari
