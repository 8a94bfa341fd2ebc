#pragma once

#include <span>

#include "nehari/field.hpp"
#include "nehari/grid.hpp"

namespace nehari {

/// Forward 2D discrete sine transform,
///   c_pq = (4 / M^2) sum_{k,l} u_kl sin(p k pi / M) sin(q l pi / M).
SpectralCoeffs dst2(const ScalarField& f);

/// Synthesis u_kl = sum_{p,q} c_pq sin(p k pi / M) sin(q l pi / M).
ScalarField idst2(const SpectralCoeffs& c);

/// Pseudospectral -Laplace with homogeneous Dirichlet data.
ScalarField neg_laplacian(const ScalarField& f);

/// Solves -eps Laplace(psi) = rhs with psi = 0 on the boundary.
/// Throws std::invalid_argument if eps <= 0.
ScalarField poisson_solve(const ScalarField& rhs, double eps);

/// Discrete H inner product h^2 sum_i eps_i sum_kl (-Laplace_h u_i)_kl (v_i)_kl,
/// evaluated in coefficient space.
double h_inner(const Field& u, const Field& v, std::span<const double> eps);
double h_norm(const Field& u, std::span<const double> eps);

namespace spectral {

/// Span-level kernels on one component (size (M-1)^2). `in` and `out` must not
/// alias. Safe to call concurrently.
void forward(const Grid& grid, std::span<const double> in, std::span<double> out);
void inverse(const Grid& grid, std::span<const double> in, std::span<double> out);

/// Multiplies coefficients in place by the Laplace symbol.
void apply_symbol(const Grid& grid, std::span<double> coeffs);
/// Divides coefficients in place by eps times the Laplace symbol.
void apply_inverse_symbol(const Grid& grid, double eps, std::span<double> coeffs);

/// sum_pq symbol_pq a_pq b_pq
double symbol_dot(const Grid& grid, std::span<const double> a,
                  std::span<const double> b);

/// Factor turning a coefficient-space sum into the h^2-weighted nodal sum:
/// h^2 sum_kl f_kl g_kl = weight * sum_pq f_pq g_pq, with weight = L^2.
double parseval_weight(const Grid& grid) noexcept;

}  // namespace spectral
}  // namespace nehari
