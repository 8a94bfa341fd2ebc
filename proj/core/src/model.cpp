#include "nehari/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "nehari/errors.hpp"
#include "nehari/spectral.hpp"

namespace nehari {

namespace {

void require_match(const Field& u, const Problem& p) {
  if (!(u.grid() == p.grid()) || u.components() != p.components()) {
    throw std::invalid_argument("field does not match the problem's grid or "
                                "component count");
  }
}

// Factor multiplying g_ij in the Euler-Lagrange equation of E_h. It is 1 for
// the quadrature-consistent I_h and 1/h^2 for the unscaled variant.
double coupling_factor(const Problem& p) {
  const double h = p.grid().mesh();
  return p.interaction_weight() / (h * h);
}

// b_i(u) = c sum_j g_ij u_j^2 at every node.
void coupling_potential(const Field& u, const Problem& p, int i,
                        std::span<double> out) {
  const double c = coupling_factor(p);
  std::fill(out.begin(), out.end(), 0.0);
  for (int j = 0; j < p.components(); ++j) {
    const double gij = c * p.coupling()(i, j);
    const auto uj = u.component(j);
    for (std::size_t n = 0; n < out.size(); ++n) out[n] += gij * uj[n] * uj[n];
  }
}

}  // namespace

double quadratic_functional(const Field& u, const Problem& p) {
  require_match(u, p);
  const Grid& grid = p.grid();
  const double h2 = grid.mesh() * grid.mesh();
  std::vector<double> coeffs(grid.size());
  double gradient_part = 0.0;
  double potential_part = 0.0;
  for (int i = 0; i < p.components(); ++i) {
    const auto ui = u.component(i);
    spectral::forward(grid, ui, coeffs);
    gradient_part += p.eps()[i] * spectral::symbol_dot(grid, coeffs, coeffs);
    const auto a = p.potential(i).values();
    double s = 0.0;
    for (std::size_t n = 0; n < ui.size(); ++n) s += a[n] * ui[n] * ui[n];
    potential_part += s;
  }
  return spectral::parseval_weight(grid) * gradient_part + h2 * potential_part;
}

double interaction_functional(const Field& u, const Problem& p) {
  require_match(u, p);
  const int m = p.components();
  const std::size_t size = p.grid().size();
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    const auto ui = u.component(i);
    for (int j = 0; j < m; ++j) {
      const auto uj = u.component(j);
      double s = 0.0;
      for (std::size_t n = 0; n < size; ++n) {
        s += ui[n] * ui[n] * uj[n] * uj[n];
      }
      total += p.coupling()(i, j) * s;
    }
  }
  return p.interaction_weight() * total;
}

double energy(const Field& u, const Problem& p) {
  return 0.5 * quadratic_functional(u, p) - 0.25 * interaction_functional(u, p);
}

double nehari_constraint(const Field& u, const Problem& p) {
  return quadratic_functional(u, p) - interaction_functional(u, p);
}

double second_variation_along_ray(const Field& u, const Problem& p) {
  return quadratic_functional(u, p) - 3.0 * interaction_functional(u, p);
}

double ray_scale(const Field& v, const Problem& p) {
  require_match(v, p);
  const double sup = v.max_abs();
  if (!(sup > 1e-14 * p.grid().half_width())) {
    throw ZeroFieldError("cannot pull back a vanishing field onto the Nehari "
                         "manifold");
  }
  const double k = quadratic_functional(v, p);
  const double i = interaction_functional(v, p);
  if (!(i > 1e-300) || !(k > 0.0) || !std::isfinite(k) || !std::isfinite(i)) {
    std::ostringstream msg;
    msg << "ray scaling undefined: K_h = " << k << ", I_h = " << i;
    throw DegenerateInteractionError(msg.str());
  }
  return std::sqrt(k / i);
}

Field pullback(const Field& v, const Problem& p) {
  const double s = ray_scale(v, p);
  return s * v;
}

Field retract(const Field& u, const Field& xi, const Problem& p) {
  return pullback(u + xi, p);
}

namespace {

// Gradients together with their sine coefficients, so inner products need no
// further transforms.
struct GradientData {
  Field psi;
  Field phi;
  Field psi_hat;
  Field phi_hat;
};

GradientData gradient_data(const Field& u, const Problem& p) {
  require_match(u, p);
  const Grid& grid = p.grid();
  const int m = p.components();
  const std::size_t size = grid.size();

  GradientData out{Field(grid, m), Field(grid, m), Field(grid, m), Field(grid, m)};
  std::vector<double> b(size), au(size), bu(size), au_hat(size), bu_hat(size),
      u_hat(size), work(size);

  for (int i = 0; i < m; ++i) {
    const auto ui = u.component(i);
    const auto a = p.potential(i).values();
    coupling_potential(u, p, i, b);
    for (std::size_t n = 0; n < size; ++n) {
      au[n] = a[n] * ui[n];
      bu[n] = b[n] * ui[n];
    }
    spectral::forward(grid, ui, u_hat);
    spectral::forward(grid, au, au_hat);
    spectral::forward(grid, bu, bu_hat);

    const double eps = p.eps()[i];
    auto psi_hat = out.psi_hat.component(i);
    auto phi_hat = out.phi_hat.component(i);
    const auto symbol = grid.laplacian_symbol();
    for (std::size_t n = 0; n < size; ++n) {
      const double inv = 1.0 / (eps * symbol[n]);
      psi_hat[n] = u_hat[n] + (au_hat[n] - bu_hat[n]) * inv;
      phi_hat[n] = 2.0 * u_hat[n] + (2.0 * au_hat[n] - 4.0 * bu_hat[n]) * inv;
    }
    // psi = u + S^{-1}(a u - b u), the correction synthesized from its
    // coefficients and added to the nodal u.
    for (std::size_t n = 0; n < size; ++n) {
      work[n] = psi_hat[n] - u_hat[n];
    }
    auto psi = out.psi.component(i);
    spectral::inverse(grid, work, psi);
    for (std::size_t n = 0; n < size; ++n) psi[n] += ui[n];

    for (std::size_t n = 0; n < size; ++n) {
      work[n] = phi_hat[n] - 2.0 * u_hat[n];
    }
    auto phi = out.phi.component(i);
    spectral::inverse(grid, work, phi);
    for (std::size_t n = 0; n < size; ++n) phi[n] += 2.0 * ui[n];
  }
  return out;
}

double coeff_inner(const Field& a_hat, const Field& b_hat, const Problem& p) {
  double s = 0.0;
  for (int i = 0; i < p.components(); ++i) {
    s += p.eps()[i] *
         spectral::symbol_dot(p.grid(), a_hat.component(i), b_hat.component(i));
  }
  return spectral::parseval_weight(p.grid()) * s;
}

}  // namespace

HGradients h_gradients(const Field& u, const Problem& p) {
  GradientData d = gradient_data(u, p);
  return HGradients{std::move(d.psi), std::move(d.phi)};
}

DescentDirection descent_direction(const Field& u, const Problem& p) {
  GradientData d = gradient_data(u, p);
  DescentDirection out{Field(p.grid(), p.components())};
  out.psi_norm_sq = coeff_inner(d.psi_hat, d.psi_hat, p);
  out.phi_norm_sq = coeff_inner(d.phi_hat, d.phi_hat, p);
  out.psi_dot_phi = coeff_inner(d.psi_hat, d.phi_hat, p);

  const double scale = std::max(out.psi_norm_sq, 1.0);
  if (!(out.phi_norm_sq > 1e-28 * scale) || !std::isfinite(out.phi_norm_sq)) {
    std::ostringstream msg;
    msg << "||grad G||_h^2 = " << out.phi_norm_sq
        << " is too small for the tangent projection";
    throw DegenerateConstraintGradientError(msg.str());
  }
  const double c = out.psi_dot_phi / out.phi_norm_sq;

  out.eta = d.phi;
  out.eta *= c;
  out.eta -= d.psi;
  Field eta_hat = d.phi_hat;
  eta_hat *= c;
  eta_hat -= d.psi_hat;
  out.eta_norm_sq = coeff_inner(eta_hat, eta_hat, p);
  return out;
}

Field riemannian_descent_dir(const Field& u, const Problem& p) {
  return descent_direction(u, p).eta;
}

double residual(const Field& u, const Problem& p) {
  require_match(u, p);
  const Grid& grid = p.grid();
  const std::size_t size = grid.size();
  std::vector<double> coeffs(size), lap(size), b(size);
  double r = 0.0;
  for (int i = 0; i < p.components(); ++i) {
    const auto ui = u.component(i);
    const auto a = p.potential(i).values();
    spectral::forward(grid, ui, coeffs);
    spectral::apply_symbol(grid, coeffs);
    spectral::inverse(grid, coeffs, lap);
    coupling_potential(u, p, i, b);
    const double eps = p.eps()[i];
    for (std::size_t n = 0; n < size; ++n) {
      const double v = eps * lap[n] + a[n] * ui[n] - b[n] * ui[n];
      if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
      r = std::max(r, std::abs(v));
    }
  }
  return r;
}

}  // namespace nehari
