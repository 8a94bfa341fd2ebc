#include <gtest/gtest.h>

#include <cmath>

#include "nehari/errors.hpp"
#include "nehari/model.hpp"
#include "nehari/spectral.hpp"
#include "oracles.hpp"

using nehari::Field;
using nehari::Grid;
using nehari::Problem;
using nehari::ScalarField;

namespace {

Problem two_component(const Grid& g,
                      nehari::InteractionScaling s = nehari::InteractionScaling::quadrature) {
  std::vector<ScalarField> a{
      ScalarField::sample(g, [](double x, double y) { return x * x + y * y + 1; }),
      ScalarField::sample(g, [](double x, double y) {
        return 0.5 + std::exp(-3 * ((x - 0.2) * (x - 0.2) + y * y));
      })};
  return Problem(g, {1.0, 0.4}, std::move(a), nehari::CouplingMatrix{{1.0, 3.0}, {3.0, 2.0}}, s);
}

Problem three_component(const Grid& g) {
  std::vector<ScalarField> a(3, ScalarField::sample(g, [](double x, double y) {
    return 2 * (x * x + y * y + 1);
  }));
  return Problem(g, {1, 1, 1}, std::move(a),
                 nehari::CouplingMatrix{{2, 4, 4}, {4, 4, 8}, {4, 8, 6}});
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST(Functionals, MatchPhysicalSpaceFormulas) {
  const Grid g(1.0, 12);
  const Problem p = two_component(g);
  const Field u = oracle::smooth_random_state(g, 2, 3);
  EXPECT_LE(rel(nehari::quadratic_functional(u, p), oracle::quadratic(u, p)), 1e-12);
  EXPECT_LE(rel(nehari::interaction_functional(u, p), oracle::interaction(u, p)), 1e-12);
  const double K = oracle::quadratic(u, p);
  const double I = oracle::interaction(u, p);
  EXPECT_NEAR(nehari::energy(u, p), K / 2 - I / 4, 1e-12 * K);
  EXPECT_NEAR(nehari::nehari_constraint(u, p), K - I, 1e-12 * K);
  EXPECT_NEAR(nehari::second_variation_along_ray(u, p), K - 3 * I, 1e-12 * K);
}

TEST(Functionals, UnscaledInteractionDropsTheMeshWeight) {
  const Grid g(1.0, 12);
  const Problem q = two_component(g);
  const Problem u = two_component(g, nehari::InteractionScaling::unscaled);
  const Field v = oracle::smooth_random_state(g, 2, 8);
  const double h = g.mesh();
  EXPECT_LE(rel(nehari::interaction_functional(v, u), oracle::interaction(v, q, false)), 1e-12);
  EXPECT_LE(rel(nehari::interaction_functional(v, u) * h * h,
                nehari::interaction_functional(v, q)), 1e-13);
}

TEST(Functionals, QuadraticIsPositive) {
  const Grid g(1.0, 16);
  const Problem p = two_component(g);
  for (std::uint32_t s = 0; s < 10; ++s) {
    EXPECT_GT(nehari::quadratic_functional(oracle::smooth_random_state(g, 2, s), p), 0.0);
  }
}

TEST(Functionals, ShapeMismatchThrows) {
  const Grid g(1.0, 8);
  const Problem p = two_component(g);
  EXPECT_THROW(nehari::energy(Field(g, 3), p), std::invalid_argument);
  EXPECT_THROW(nehari::energy(Field(Grid(1.0, 16), 2), p), std::invalid_argument);
}

TEST(Pullback, LandsOnTheManifold) {
  const Grid g(1.0, 32);
  const Problem p = two_component(g);
  for (std::uint32_t s = 0; s < 20; ++s) {
    const Field u = nehari::pullback(oracle::smooth_random_state(g, 2, s), p);
    const double K = nehari::quadratic_functional(u, p);
    EXPECT_LE(std::abs(nehari::nehari_constraint(u, p)), 1e-12 * K);
    EXPECT_NEAR(nehari::energy(u, p), K / 4, 1e-12 * K);
    EXPECT_NEAR(nehari::second_variation_along_ray(u, p),
                -2 * nehari::interaction_functional(u, p), 1e-11 * K);
    EXPECT_NEAR(nehari::ray_scale(u, p), 1.0, 1e-12);
  }
}

TEST(Pullback, IsInvariantAlongRays) {
  const Grid g(1.0, 16);
  const Problem p = two_component(g);
  const Field v = oracle::smooth_random_state(g, 2, 4);
  const Field a = nehari::pullback(v, p);
  const Field b = nehari::pullback(7.5 * v, p);
  for (std::size_t n = 0; n < a.data().size(); ++n) {
    EXPECT_NEAR(a.data()[n], b.data()[n], 1e-13 * a.max_abs());
  }
  const double s = nehari::ray_scale(v, p);
  EXPECT_NEAR(nehari::ray_scale(2 * v, p), s / 2, 1e-14 * s);
}

TEST(Pullback, Errors) {
  const Grid g(1.0, 8);
  const Problem p = two_component(g);
  EXPECT_THROW(nehari::pullback(Field(g, 2), p), nehari::ZeroFieldError);
  const Field huge = 1e200 * oracle::smooth_random_state(g, 2, 1);
  EXPECT_THROW(nehari::pullback(huge, p), nehari::DegenerateInteractionError);
}

TEST(Pullback, UnscaledAmplitudeIsSmallerByTheMesh) {
  const Grid g(1.0, 32);
  const Problem q = two_component(g);
  const Problem u = two_component(g, nehari::InteractionScaling::unscaled);
  const Field v = oracle::smooth_random_state(g, 2, 2);
  EXPECT_NEAR(nehari::ray_scale(v, u) / nehari::ray_scale(v, q), g.mesh(), 1e-14);
}

TEST(Retract, LandsOnTheManifold) {
  const Grid g(1.0, 16);
  const Problem p = two_component(g);
  const Field u = nehari::pullback(oracle::smooth_random_state(g, 2, 10), p);
  const Field xi = 0.3 * oracle::smooth_random_state(g, 2, 11);
  const Field r = nehari::retract(u, xi, p);
  EXPECT_LE(std::abs(nehari::nehari_constraint(r, p)), 1e-12 * nehari::quadratic_functional(r, p));
  EXPECT_TRUE(nehari::retract(u, Field(g, 2), p) == nehari::pullback(u, p));
}

TEST(Retract, RayInvariance) {
  const Grid g(1.0, 16);
  const Problem p = two_component(g);
  const Field u = nehari::pullback(oracle::smooth_random_state(g, 2, 12), p);
  const Field r = nehari::retract(u, -0.5 * u, p);
  for (std::size_t n = 0; n < u.data().size(); ++n) {
    EXPECT_NEAR(r.data()[n], u.data()[n], 1e-13 * u.max_abs());
  }
}

TEST(Retract, FirstOrderAlongTangents) {
  const Grid g(1.0, 24);
  const Problem p = two_component(g);
  const Field u = nehari::pullback(oracle::smooth_random_state(g, 2, 13), p);
  const Field xi = nehari::descent_direction(u, p).eta;
  std::vector<double> lx, ly;
  for (double t : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const Field d = nehari::retract(u, t * xi, p) - (u + t * xi);
    lx.push_back(std::log(t));
    ly.push_back(0.5 * std::log(nehari::h_inner(d, d, p.eps())));
  }
  EXPECT_GE(oracle::slope(lx, ly), 1.9);
}

namespace {

void expect_gradients_match_differences(const Problem& p, int pairs) {
  const Grid& g = p.grid();
  for (int k = 0; k < pairs; ++k) {
    Field u = oracle::smooth_random_state(g, p.components(), 100 + 2 * k);
    Field v = oracle::smooth_random_state(g, p.components(), 101 + 2 * k);
    u *= 1.0 / u.max_abs();
    v *= 1.0 / v.max_abs();
    const nehari::HGradients grads = nehari::h_gradients(u, p);
    const double tau = 1e-5;
    const Field up = u + tau * v;
    const Field um = u - tau * v;
    const double fd_e = (nehari::energy(up, p) - nehari::energy(um, p)) / (2 * tau);
    const double fd_g =
        (nehari::nehari_constraint(up, p) - nehari::nehari_constraint(um, p)) / (2 * tau);
    EXPECT_LE(rel(nehari::h_inner(grads.psi, v, p.eps()), fd_e), 1e-6) << "pair " << k;
    EXPECT_LE(rel(nehari::h_inner(grads.phi, v, p.eps()), fd_g), 1e-6) << "pair " << k;
  }
}

}  // namespace

TEST(Gradients, MatchFiniteDifferences) {
  expect_gradients_match_differences(two_component(Grid(1.0, 24)), 20);
}

TEST(Gradients, MatchFiniteDifferencesThreeComponents) {
  expect_gradients_match_differences(three_component(Grid(1.0, 16)), 5);
}

TEST(Gradients, MatchFiniteDifferencesUnscaled) {
  expect_gradients_match_differences(
      two_component(Grid(1.0, 16), nehari::InteractionScaling::unscaled), 5);
}

TEST(Gradients, ClosedFormAtZeroCoupling) {
  // g = 0, constant a and a single mode u: psi = (1 + a / (eps lambda)) u, phi = 2 psi.
  const Grid g(1.0, 16);
  std::vector<ScalarField> a{ScalarField::sample(g, [](double, double) { return 2.0; })};
  const Problem p(g, {0.5}, a, nehari::CouplingMatrix{{0.0}});
  const Field u({oracle::mode(g, 2, 1)});
  const double lambda = oracle::symbol(g, 2, 1);
  const nehari::HGradients grads = nehari::h_gradients(u, p);
  for (std::size_t n = 0; n < g.size(); ++n) {
    EXPECT_NEAR(grads.psi.data()[n], (1 + 2.0 / (0.5 * lambda)) * u.data()[n], 1e-13);
    EXPECT_NEAR(grads.phi.data()[n], 2 * (1 + 2.0 / (0.5 * lambda)) * u.data()[n], 1e-13);
  }
}

TEST(DescentDirection, TangentAndContracting) {
  const Grid g(1.0, 32);
  const Problem p = two_component(g);
  for (std::uint32_t s = 0; s < 100; ++s) {
    const Field u = nehari::pullback(oracle::smooth_random_state(g, 2, 500 + s), p);
    const nehari::DescentDirection d = nehari::descent_direction(u, p);
    const nehari::HGradients grads = nehari::h_gradients(u, p);
    const double eta_phi = nehari::h_inner(d.eta, grads.phi, p.eps());
    EXPECT_LE(std::abs(eta_phi), 1e-10 * std::sqrt(d.eta_norm_sq * d.phi_norm_sq));
    EXPECT_LE(d.eta_norm_sq, d.psi_norm_sq * (1 + 1e-14));
    EXPECT_NEAR(d.eta_norm_sq, nehari::h_inner(d.eta, d.eta, p.eps()), 1e-12 * d.eta_norm_sq);
    EXPECT_NEAR(d.psi_norm_sq, nehari::h_inner(grads.psi, grads.psi, p.eps()),
                1e-12 * d.psi_norm_sq);
  }
}

TEST(DescentDirection, IsMinusProjectedGradient) {
  const Grid g(1.0, 16);
  const Problem p = two_component(g);
  const Field u = nehari::pullback(oracle::smooth_random_state(g, 2, 42), p);
  const nehari::HGradients grads = nehari::h_gradients(u, p);
  const double c = nehari::h_inner(grads.psi, grads.phi, p.eps()) /
                   nehari::h_inner(grads.phi, grads.phi, p.eps());
  const Field expected = c * grads.phi - grads.psi;
  const Field eta = nehari::riemannian_descent_dir(u, p);
  for (std::size_t n = 0; n < eta.data().size(); ++n) {
    EXPECT_NEAR(eta.data()[n], expected.data()[n], 1e-12 * expected.max_abs());
  }
}

TEST(DescentDirection, DegenerateConstraintGradient) {
  const Grid g(1.0, 8);
  const Problem p = two_component(g);
  EXPECT_THROW(nehari::descent_direction(Field(g, 2), p),
               nehari::DegenerateConstraintGradientError);
}

TEST(Residual, MatchesPhysicalFormula) {
  const Grid g(1.0, 12);
  const Problem p = two_component(g);
  const Field u = oracle::smooth_random_state(g, 2, 77);
  double expected = 0.0;
  for (int i = 0; i < 2; ++i) {
    const std::vector<double> lap = oracle::neg_laplacian(u.component_field(i));
    for (std::size_t n = 0; n < g.size(); ++n) {
      double b = 0.0;
      for (int j = 0; j < 2; ++j) b += p.coupling()(i, j) * u.component(j)[n] * u.component(j)[n];
      const double ui = u.component(i)[n];
      expected = std::max(expected,
                          std::abs(p.eps()[i] * lap[n] + p.potential(i).values()[n] * ui - b * ui));
    }
  }
  EXPECT_NEAR(nehari::residual(u, p), expected, 1e-12 * expected);
}

TEST(Residual, VanishesForAnExactSingleModeSolution) {
  // One component, g = 0: -eps Laplace u + a u = 0 has no nonzero solution,
  // but with a = -eps lambda_pq the mode (p, q) is one.
  const Grid g(1.0, 16);
  const double eps = 0.5;
  const double a = -eps * oracle::symbol(g, 1, 1);
  const Problem p(g, {eps}, {ScalarField::sample(g, [&](double, double) { return a; })},
                  nehari::CouplingMatrix{{0.0}});
  EXPECT_LE(nehari::residual(Field({oracle::mode(g, 1, 1)}), p), 1e-13);
}

TEST(Residual, CriticalPointsOnTheManifoldHaveZeroGradient) {
  const Grid g(1.0, 16);
  const double a = -0.5 * oracle::symbol(g, 1, 1);
  const Problem p(g, {0.5}, {ScalarField::sample(g, [&](double, double) { return a; })},
                  nehari::CouplingMatrix{{0.0}});
  const nehari::HGradients grads = nehari::h_gradients(Field({oracle::mode(g, 1, 1)}), p);
  EXPECT_LE(grads.psi.max_abs(), 1e-13);
}
