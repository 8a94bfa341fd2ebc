#include "nehari/grid.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "spectral_tables.hpp"

namespace nehari {
namespace detail {

namespace {
// The FFTW planner is not reentrant; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

SpectralTables::SpectralTables(int subdivisions_, std::vector<double> symbol_)
    : n(subdivisions_ - 1), subdivisions(subdivisions_),
      symbol(std::move(symbol_)) {
  std::vector<double> in(static_cast<std::size_t>(n) * n);
  std::vector<double> out(in.size());
  std::lock_guard lock(planner_mutex());
  plan = fftw_plan_r2r_2d(n, n, in.data(), out.data(), FFTW_RODFT00,
                          FFTW_RODFT00,
                          FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT);
  if (plan == nullptr) {
    throw std::runtime_error("FFTW failed to create a DST-I plan");
  }
}

SpectralTables::~SpectralTables() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

std::vector<double> laplacian_symbol(double half_width, int subdivisions) {
  const int n = subdivisions - 1;
  const double k0 = std::numbers::pi / (2.0 * half_width);
  std::vector<double> symbol(static_cast<std::size_t>(n) * n);
  for (int p = 1; p <= n; ++p) {
    for (int q = 1; q <= n; ++q) {
      const double kx = p * k0;
      const double ky = q * k0;
      symbol[static_cast<std::size_t>(p - 1) * n + (q - 1)] = kx * kx + ky * ky;
    }
  }
  return symbol;
}

}  // namespace detail

namespace {
void check_grid_args(double half_width, int subdivisions) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("grid half-width L must be positive, got " +
                                std::to_string(half_width));
  }
  if (subdivisions < 4 || subdivisions % 2 != 0) {
    throw std::invalid_argument(
        "grid subdivision count M must be even and >= 4, got " +
        std::to_string(subdivisions));
  }
}
}  // namespace

Grid::Grid(double half_width, int subdivisions)
    : half_width_(half_width), subdivisions_(subdivisions) {
  check_grid_args(half_width, subdivisions);
  tables_ = std::make_shared<const detail::SpectralTables>(
      subdivisions, detail::laplacian_symbol(half_width, subdivisions));
}

Grid Grid::with_symbol(double half_width, int subdivisions,
                       std::vector<double> symbol) {
  Grid grid(half_width, subdivisions);
  if (symbol.size() != grid.size()) {
    throw std::invalid_argument("multiplier table size does not match grid");
  }
  grid.tables_ = std::make_shared<const detail::SpectralTables>(
      subdivisions, std::move(symbol));
  return grid;
}

double Grid::first_eigenvalue() const noexcept {
  const double k0 = std::numbers::pi / (2.0 * half_width_);
  return 2.0 * k0 * k0;
}

std::span<const double> Grid::laplacian_symbol() const noexcept {
  return tables_->symbol;
}

Grid make_grid(double half_width, int subdivisions) {
  return Grid(half_width, subdivisions);
}

}  // namespace nehari
