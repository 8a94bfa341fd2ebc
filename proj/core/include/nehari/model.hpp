#pragma once

#include "nehari/field.hpp"
#include "nehari/problem.hpp"

namespace nehari {

// Discrete functionals. With Q(u) = sum_i (eps_i |grad u_i|^2 + a_i u_i^2) and
// the quartic coupling P(u) = sum_ij g_ij u_i^2 u_j^2:
//   K_h = h^2 sum Q,  I_h = w sum P  (w = h^2 unless the problem is unscaled),
//   E_h = K_h / 2 - I_h / 4,  G_h = K_h - I_h.
// All of them throw std::invalid_argument when u does not match the problem.

double quadratic_functional(const Field& u, const Problem& p);    // K_h
double interaction_functional(const Field& u, const Problem& p);  // I_h
double energy(const Field& u, const Problem& p);
double nehari_constraint(const Field& u, const Problem& p);       // G_h

/// <E''(u) u, u> = K_h - 3 I_h, which equals -2 I_h on the manifold.
double second_variation_along_ray(const Field& u, const Problem& p);

/// Ray scaling sqrt(K_h(v) / I_h(v)) that places v on the Nehari manifold.
/// Throws ZeroFieldError if v vanishes, DegenerateInteractionError if I_h(v)
/// (or K_h(v)) is not safely positive.
double ray_scale(const Field& v, const Problem& p);

/// ray_scale(v) * v.
Field pullback(const Field& v, const Problem& p);

/// Nehari retraction R_u(xi) = pullback(u + xi).
Field retract(const Field& u, const Field& xi, const Problem& p);

/// H-gradients of E and G at u: psi = grad E(u), phi = grad G(u).
struct HGradients {
  Field psi;
  Field phi;
};
HGradients h_gradients(const Field& u, const Problem& p);

/// Riemannian steepest-descent direction eta = -grad_N E(u) together with the
/// norms needed by the line search.
struct DescentDirection {
  Field eta;
  double eta_norm_sq = 0.0;  // ||eta||_h^2 = ||grad_N E(u)||_h^2
  double psi_norm_sq = 0.0;  // ||grad E(u)||_h^2
  double phi_norm_sq = 0.0;  // ||grad G(u)||_h^2
  double psi_dot_phi = 0.0;  // (grad E, grad G)_h
};

/// Throws DegenerateConstraintGradientError when ||grad G(u)||_h is too small
/// for the tangent projection.
DescentDirection descent_direction(const Field& u, const Problem& p);
Field riemannian_descent_dir(const Field& u, const Problem& p);

/// max_i || -eps_i Laplace_h u_i + a_i u_i - sum_j g_ij u_j^2 u_i ||_inf
double residual(const Field& u, const Problem& p);

}  // namespace nehari
