#include <gtest/gtest.h>

#if defined(__SSE2__)
#include <xmmintrin.h>
#endif

#include <cmath>

#include "nehari/errors.hpp"
#include "nehari/optimizer.hpp"
#include "nehari/spectral.hpp"
#include "nehari/scenarios.hpp"
#include "oracles.hpp"

using nehari::Algorithm;
using nehari::Field;
using nehari::MomentumState;
using nehari::Problem;
using nehari::SolverOptions;

namespace {

struct Small {
  nehari::ScenarioSpec spec;
  Problem problem;
  Field u0;
};

Small example1_small(double g23 = 8.0, int M = 16) {
  nehari::ScenarioSpec s = nehari::example1(g23);
  s.subdivisions = M;
  Problem p = nehari::build_problem(s);
  Field u0 = nehari::gaussian_initial(p);
  return {s, std::move(p), std::move(u0)};
}

}  // namespace

TEST(Momentum, FirstTerms) {
  MomentumState s;
  s = nehari::momentum_next(s);
  EXPECT_EQ(s.n, 1);
  EXPECT_DOUBLE_EQ(s.theta, 1.0);
  EXPECT_DOUBLE_EQ(s.t, -1.0);
  s = nehari::momentum_next(s);
  EXPECT_DOUBLE_EQ(s.theta, 0.5 * (1 + std::sqrt(5.0)));
  EXPECT_EQ(s.t, 0.0);
  s = nehari::momentum_next(s);
  EXPECT_GT(s.t, 0.0);
  EXPECT_LT(s.t, 1.0);
}

TEST(Momentum, MatchesExtendedPrecisionRecurrence) {
  const int N = 10000;
  const oracle::Momentum ref = oracle::momentum(N);
  MomentumState s;
  double worst_t = 0.0;
  double worst_theta = 0.0;
  for (int n = 1; n <= N; ++n) {
    s = nehari::momentum_next(s);
    worst_t = std::max(worst_t, static_cast<double>(std::abs(s.t - ref.t[n])));
    worst_theta = std::max(
        worst_theta, static_cast<double>(std::abs(s.theta - ref.theta[n]) / ref.theta[n]));
    if (n >= 3) {
      ASSERT_GT(s.t, 0.0) << n;
      ASSERT_LT(s.t, 1.0) << n;
    }
  }
  EXPECT_LE(worst_t, 1e-14);
  EXPECT_LE(worst_theta, 1e-14);
}

TEST(Nonmonotone, ConstantEnergyIsAFixedPoint) {
  nehari::NonmonotoneState s{3.0, 1.0};
  for (int n = 0; n < 50; ++n) {
    s = nehari::nonmonotone_update(s, 3.0, 0.85);
    EXPECT_DOUBLE_EQ(s.C, 3.0);
  }
  // Q_50 = sum_{k <= 50} varrho^k
  EXPECT_NEAR(s.Q, (1.0 - std::pow(0.85, 51)) / 0.15, 1e-12);
}

TEST(Nonmonotone, WeightedAverage) {
  const nehari::NonmonotoneState s0{2.0, 1.0};
  const auto s1 = nehari::nonmonotone_update(s0, 1.0, 0.5);
  EXPECT_DOUBLE_EQ(s1.Q, 1.5);
  EXPECT_DOUBLE_EQ(s1.C, (0.5 * 2.0 + 1.0) / 1.5);
  // decreasing energies keep C between the newest value and the old C
  const auto s2 = nehari::nonmonotone_update(s1, 0.5, 0.5);
  EXPECT_LT(s2.C, s1.C);
  EXPECT_GT(s2.C, 0.5);
}

TEST(Algorithm, ParseNames) {
  EXPECT_EQ(nehari::parse_algorithm("RSD"), Algorithm::rsd);
  EXPECT_EQ(nehari::parse_algorithm("rsd-n"), Algorithm::rsd);
  EXPECT_EQ(nehari::parse_algorithm("RAG-N"), Algorithm::rag);
  EXPECT_EQ(nehari::parse_algorithm("nmRAG"), Algorithm::nmrag);
  EXPECT_EQ(nehari::parse_algorithm("nm_rag_n"), Algorithm::nmrag);
  EXPECT_FALSE(nehari::parse_algorithm("newton"));
  EXPECT_EQ(nehari::to_string(Algorithm::nmrag), "NMRAG");
}

TEST(Options, Validation) {
  SolverOptions o;
  EXPECT_NO_THROW(nehari::validate_options(o));
  auto bad = [](auto mutate) {
    SolverOptions x;
    mutate(x);
    EXPECT_THROW(nehari::validate_options(x), std::invalid_argument);
  };
  bad([](SolverOptions& x) { x.alpha = 0; });
  bad([](SolverOptions& x) { x.alpha0 = -1; });
  bad([](SolverOptions& x) { x.sigma = 1.5; });
  bad([](SolverOptions& x) { x.varrho = 1.0; });
  bad([](SolverOptions& x) { x.beta = 0.0; });
  bad([](SolverOptions& x) { x.tol = 0.0; });
  bad([](SolverOptions& x) { x.max_iter = 0; });
}

TEST(Extrapolate, TrivialCases) {
  const Small s = example1_small();
  EXPECT_TRUE(nehari::extrapolate(s.u0, s.u0, 0.7, s.problem) == s.u0);
  const Field other = nehari::rsd_step(s.u0, 0.1, s.problem);
  EXPECT_TRUE(nehari::extrapolate(other, s.u0, 0.0, s.problem) == other);
}

TEST(Extrapolate, LandsOnTheManifold) {
  const Small s = example1_small();
  const Field u1 = nehari::rsd_step(s.u0, 0.1, s.problem);
  const Field w = nehari::extrapolate(u1, s.u0, 0.5, s.problem);
  const double K = nehari::quadratic_functional(w, s.problem);
  EXPECT_LE(std::abs(nehari::nehari_constraint(w, s.problem)), 1e-12 * K);
}

TEST(RsdStep, DecreasesEnergyForSmallSteps) {
  const Small s = example1_small();
  const double e0 = nehari::energy(s.u0, s.problem);
  const Field u1 = nehari::rsd_step(s.u0, 0.05, s.problem);
  EXPECT_LT(nehari::energy(u1, s.problem), e0);
}

TEST(RsdStep, DisplacementIsLinearInTheStep) {
  const Small s = example1_small();
  const nehari::Problem& p = s.problem;
  const Field& u = s.u0;
  std::vector<double> lx, ly;
  for (double alpha : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const Field d = nehari::rsd_step(u, alpha, p) - u;
    lx.push_back(std::log(alpha));
    ly.push_back(0.5 * std::log(nehari::h_inner(d, d, p.eps())));
  }
  EXPECT_NEAR(oracle::slope(lx, ly), 1.0, 0.05);
}

TEST(RagStep, FirstStepEqualsRsdStep) {
  // t_1 = -1 but u_1 = u_0, so the first accelerated step is a plain RSD step.
  const Small s = example1_small();
  const nehari::RagStep r = nehari::rag_step(s.u0, s.u0, MomentumState{}, 0.1, s.problem);
  EXPECT_DOUBLE_EQ(r.momentum.t, -1.0);
  EXPECT_TRUE(r.next == nehari::rsd_step(s.u0, 0.1, s.problem));
}

TEST(Run, RagWithZeroMomentumReproducesRsd) {
  const Small s = example1_small();
  SolverOptions o;
  o.max_iter = 40;
  o.algorithm = Algorithm::rsd;
  const auto a = nehari::run(s.problem, s.u0, o);
  o.algorithm = Algorithm::rag;
  o.fixed_momentum = 0.0;
  const auto b = nehari::run(s.problem, s.u0, o);
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t n = 0; n < a.history.size(); ++n) {
    EXPECT_EQ(a.history[n].energy, b.history[n].energy);
    EXPECT_EQ(a.history[n].residual, b.history[n].residual);
  }
  EXPECT_TRUE(a.final == b.final);
}

TEST(Run, ConvergesOnACoarseGrid) {
  const Small s = example1_small(8.0, 16);
  for (Algorithm alg : {Algorithm::rsd, Algorithm::rag, Algorithm::nmrag}) {
    SolverOptions o;
    o.algorithm = alg;
    const auto r = nehari::run(s.problem, s.u0, o);
    EXPECT_TRUE(r.converged) << nehari::to_string(alg);
    EXPECT_EQ(r.status, nehari::SolveStatus::converged);
    EXPECT_LE(r.history.back().residual, o.tol);
    EXPECT_EQ(static_cast<int>(r.history.size()), r.iterations + 1);
    for (std::size_t n = 0; n < r.history.size(); ++n) EXPECT_EQ(r.history[n].n, static_cast<int>(n));
  }
}

TEST(Run, EnergyEqualsQuarterKAlongTheIterates) {
  const Small s = example1_small(8.0, 16);
  SolverOptions o;
  o.algorithm = Algorithm::rsd;
  o.max_iter = 30;
  Field u = s.u0;
  for (int n = 0; n < 30; ++n) {
    u = nehari::rsd_step(u, o.alpha, s.problem);
    const double K = nehari::quadratic_functional(u, s.problem);
    EXPECT_LE(std::abs(nehari::energy(u, s.problem) - K / 4), 1e-12 * K);
  }
}

TEST(Run, RsdEnergyIsMonotoneForSmallSteps) {
  const Small s = example1_small(8.0, 16);
  SolverOptions o;
  o.algorithm = Algorithm::rsd;
  o.max_iter = 200;
  const auto r = nehari::run(s.problem, s.u0, o);
  for (std::size_t n = 1; n < r.history.size(); ++n) {
    EXPECT_LE(r.history[n].energy, r.history[n - 1].energy + 1e-14);
  }
}

TEST(Run, NmragControlSequence) {
  for (double alpha : {0.1, 1.0, 1.1}) {
    const Small s = example1_small(6.0, 16);
    SolverOptions o;
    o.algorithm = Algorithm::nmrag;
    o.alpha = alpha;
    o.max_iter = 400;
    const auto r = nehari::run(s.problem, s.u0, o);
    double c_prev = r.history[0].energy;  // C_0 = E(u_0)
    for (std::size_t n = 1; n < r.history.size(); ++n) {
      const auto& rec = r.history[n];
      ASSERT_TRUE(rec.C && rec.grad_norm_sq && rec.armijo_alpha);
      const double E_prev = r.history[n - 1].energy;
      const double slack = 1e-12 * std::abs(*rec.C);
      // C_{n-1} holds E(u_{n-1}); the new reference is computed from it.
      EXPECT_LE(E_prev, *rec.C + slack) << n;
      EXPECT_LE(*rec.C, c_prev + slack) << n;
      EXPECT_LE(rec.energy, *rec.C - o.sigma * *rec.armijo_alpha * *rec.grad_norm_sq + slack) << n;
      c_prev = *rec.C;
    }
  }
}

TEST(Run, DeterministicHistories) {
  const Small s = example1_small(8.0, 16);
  SolverOptions o;
  o.algorithm = Algorithm::nmrag;
  const auto a = nehari::run(s.problem, s.u0, o);
  const auto b = nehari::run(s.problem, s.u0, o);
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t n = 0; n < a.history.size(); ++n) {
    EXPECT_EQ(a.history[n].energy, b.history[n].energy);
    EXPECT_EQ(a.history[n].residual, b.history[n].residual);
    EXPECT_EQ(a.history[n].C, b.history[n].C);
  }
  EXPECT_TRUE(a.final == b.final);
}

TEST(Run, IterationCapIsHonest) {
  const Small s = example1_small();
  SolverOptions o;
  o.max_iter = 5;
  const auto r = nehari::run(s.problem, s.u0, o);
  EXPECT_EQ(r.status, nehari::SolveStatus::max_iterations);
  EXPECT_FALSE(r.converged);
  EXPECT_FALSE(r.diverged);
  EXPECT_EQ(r.iterations, 5);
  EXPECT_EQ(r.history.size(), 6u);
  EXPECT_FALSE(r.message.empty());
}

TEST(Run, DivergenceGuardKeepsPartialHistory) {
  const Small s = example1_small();
  SolverOptions o;
  o.residual_blowup = 1e-3;  // trips on the first step
  const auto r = nehari::run(s.problem, s.u0, o);
  EXPECT_EQ(r.status, nehari::SolveStatus::diverged);
  EXPECT_TRUE(r.diverged);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.history.size(), 2u);
}

TEST(Run, LineSearchFailureIsReported) {
  const Small s = example1_small();
  SolverOptions o;
  o.algorithm = Algorithm::nmrag;
  o.alpha0 = 1e6;
  o.beta = 0.99;
  o.sigma = 0.999;
  o.max_backtracks = 2;
  const auto r = nehari::run(s.problem, s.u0, o);
  EXPECT_EQ(r.status, nehari::SolveStatus::line_search_failed);
  EXPECT_NE(r.message.find("Armijo"), std::string::npos);
}

TEST(Run, ArmijoSearchThrowsWithDiagnostics) {
  const Small s = example1_small();
  SolverOptions o;
  o.alpha0 = 1e6;
  o.beta = 0.99;
  o.sigma = 0.999;
  o.max_backtracks = 1;
  EXPECT_THROW(nehari::armijo_search(s.u0, nehari::energy(s.u0, s.problem), o, s.problem),
               nehari::LineSearchFailedError);
}

TEST(Run, ArmijoAcceptsFirstTrialWhenItDecreasesEnough) {
  const Small s = example1_small();
  SolverOptions o;
  o.alpha0 = 0.01;
  const auto res = nehari::armijo_search(s.u0, nehari::energy(s.u0, s.problem), o, s.problem);
  EXPECT_EQ(res.backtracks, 0);
  EXPECT_DOUBLE_EQ(res.alpha_used, 0.01);
}

#if defined(__SSE2__)
TEST(Run, RestoresTheFloatingPointMode) {
  const Small s = example1_small(8.0, 16);
  SolverOptions o;
  o.max_iter = 5;
  const unsigned int before = _mm_getcsr();
  nehari::run(s.problem, s.u0, o);
  EXPECT_EQ(_mm_getcsr(), before);
}
#endif

TEST(Run, AlreadyConvergedStartStopsImmediately) {
  const Small s = example1_small();
  SolverOptions o;
  o.tol = 1e6;
  const auto r = nehari::run(s.problem, s.u0, o);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.history.size(), 1u);
}
