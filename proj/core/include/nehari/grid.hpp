#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace nehari {

namespace detail {
struct SpectralTables;
}

/// Uniform grid on the box (-L, L)^2 with M subdivisions per axis.
///
/// Only the (M-1) x (M-1) interior nodes carry unknowns; the homogeneous
/// Dirichlet boundary is implicit in the sine basis. The spectral multiplier
/// table and the transform plan are built once per grid and shared between
/// copies.
class Grid {
 public:
  /// Throws std::invalid_argument unless L > 0 and M is even with M >= 4.
  Grid(double half_width, int subdivisions);

  double half_width() const noexcept { return half_width_; }
  int subdivisions() const noexcept { return subdivisions_; }
  double mesh() const noexcept { return 2.0 * half_width_ / subdivisions_; }
  int nodes_per_axis() const noexcept { return subdivisions_ - 1; }
  std::size_t size() const noexcept {
    const auto n = static_cast<std::size_t>(nodes_per_axis());
    return n * n;
  }

  /// Coordinate -L + k h of node k, k in [0, M]; interior nodes are 1..M-1.
  double coordinate(int k) const noexcept { return -half_width_ + k * mesh(); }

  /// First Dirichlet eigenvalue 2 (pi / 2L)^2 of -Laplace on the box.
  double first_eigenvalue() const noexcept;

  /// (p pi / 2L)^2 + (q pi / 2L)^2 for p, q = 1..M-1, row-major in (p, q).
  std::span<const double> laplacian_symbol() const noexcept;

  const detail::SpectralTables& tables() const noexcept { return *tables_; }

  /// Grid whose multiplier table is replaced by `symbol`. Used to inject faults
  /// into the verification suite; regular code never needs it.
  static Grid with_symbol(double half_width, int subdivisions,
                          std::vector<double> symbol);

  /// Grids compare by (L, M); the cached tables are not part of identity.
  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.half_width_ == b.half_width_ &&
           a.subdivisions_ == b.subdivisions_;
  }

 private:
  double half_width_;
  int subdivisions_;
  std::shared_ptr<const detail::SpectralTables> tables_;
};

Grid make_grid(double half_width, int subdivisions);

}  // namespace nehari
