#include "nehari/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spectral_tables.hpp"

namespace nehari {
namespace spectral {

namespace {
void check_size(const Grid& grid, std::span<const double> a) {
  if (a.size() != grid.size()) {
    throw std::invalid_argument("array size does not match grid");
  }
}

// FFTW's 2D RODFT00 computes 4 sum_{k,l} x_kl sin(p k pi / M) sin(q l pi / M).
void raw_dst(const Grid& grid, std::span<const double> in, std::span<double> out) {
  check_size(grid, in);
  check_size(grid, out);
  // Planned with FFTW_PRESERVE_INPUT, so the input is only read.
  fftw_execute_r2r(grid.tables().plan, const_cast<double*>(in.data()),
                   out.data());
}
}  // namespace

void forward(const Grid& grid, std::span<const double> in, std::span<double> out) {
  raw_dst(grid, in, out);
  const double m = grid.subdivisions();
  const double scale = 1.0 / (m * m);
  for (double& c : out) c *= scale;
}

void inverse(const Grid& grid, std::span<const double> in, std::span<double> out) {
  raw_dst(grid, in, out);
  for (double& v : out) v *= 0.25;
}

void apply_symbol(const Grid& grid, std::span<double> coeffs) {
  check_size(grid, coeffs);
  const auto symbol = grid.laplacian_symbol();
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] *= symbol[i];
}

void apply_inverse_symbol(const Grid& grid, double eps, std::span<double> coeffs) {
  check_size(grid, coeffs);
  const auto symbol = grid.laplacian_symbol();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    coeffs[i] /= eps * symbol[i];
  }
}

double symbol_dot(const Grid& grid, std::span<const double> a,
                  std::span<const double> b) {
  check_size(grid, a);
  check_size(grid, b);
  const auto symbol = grid.laplacian_symbol();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += symbol[i] * a[i] * b[i];
  return s;
}

double parseval_weight(const Grid& grid) noexcept {
  return grid.half_width() * grid.half_width();
}

}  // namespace spectral

SpectralCoeffs dst2(const ScalarField& f) {
  SpectralCoeffs c(f.grid());
  spectral::forward(f.grid(), f.values(), c.coeffs());
  return c;
}

ScalarField idst2(const SpectralCoeffs& c) {
  ScalarField f(c.grid());
  spectral::inverse(c.grid(), c.coeffs(), f.values());
  return f;
}

ScalarField neg_laplacian(const ScalarField& f) {
  SpectralCoeffs c = dst2(f);
  spectral::apply_symbol(f.grid(), c.coeffs());
  return idst2(c);
}

ScalarField poisson_solve(const ScalarField& rhs, double eps) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("poisson_solve needs eps > 0");
  }
  SpectralCoeffs c = dst2(rhs);
  spectral::apply_inverse_symbol(rhs.grid(), eps, c.coeffs());
  return idst2(c);
}

double h_inner(const Field& u, const Field& v, std::span<const double> eps) {
  if (!(u.grid() == v.grid()) || u.components() != v.components() ||
      eps.size() != static_cast<std::size_t>(u.components())) {
    throw std::invalid_argument("h_inner: dimension mismatch");
  }
  const Grid& grid = u.grid();
  std::vector<double> cu(grid.size());
  std::vector<double> cv(grid.size());
  double total = 0.0;
  for (int i = 0; i < u.components(); ++i) {
    spectral::forward(grid, u.component(i), cu);
    spectral::forward(grid, v.component(i), cv);
    total += eps[i] * spectral::symbol_dot(grid, cu, cv);
  }
  return spectral::parseval_weight(grid) * total;
}

double h_norm(const Field& u, std::span<const double> eps) {
  const double s = h_inner(u, u, eps);
  return s > 0.0 ? std::sqrt(s) : 0.0;
}

}  // namespace nehari
