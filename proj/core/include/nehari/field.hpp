#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nehari/grid.hpp"

namespace nehari {

/// Real values at the interior nodes of a grid, row-major with the x index
/// slow: entry (k, l) approximates u(x_{k+1}, y_{l+1}) for k, l in [0, M-2].
class ScalarField {
 public:
  explicit ScalarField(Grid grid);
  /// Throws std::invalid_argument on a size mismatch or non-finite entries.
  ScalarField(Grid grid, std::vector<double> values);

  /// Samples f(x, y) at every interior node.
  template <class F>
  static ScalarField sample(const Grid& grid, F&& f) {
    ScalarField out(grid);
    const int n = grid.nodes_per_axis();
    for (int k = 0; k < n; ++k) {
      const double x = grid.coordinate(k + 1);
      for (int l = 0; l < n; ++l) {
        out(k, l) = f(x, grid.coordinate(l + 1));
      }
    }
    return out;
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  double& operator()(int k, int l) noexcept {
    return values_[static_cast<std::size_t>(k) * stride() + l];
  }
  double operator()(int k, int l) const noexcept {
    return values_[static_cast<std::size_t>(k) * stride() + l];
  }

  double max_abs() const noexcept;
  double min() const noexcept;

 private:
  std::size_t stride() const noexcept {
    return static_cast<std::size_t>(grid_.nodes_per_axis());
  }

  Grid grid_;
  std::vector<double> values_;
};

/// Sine-series coefficients; entry (p-1, q-1) multiplies
/// sin(p k pi / M) sin(q l pi / M).
class SpectralCoeffs {
 public:
  explicit SpectralCoeffs(Grid grid);
  SpectralCoeffs(Grid grid, std::vector<double> coeffs);

  const Grid& grid() const noexcept { return grid_; }
  std::span<double> coeffs() noexcept { return coeffs_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }

  double& operator()(int p, int q) noexcept {
    return coeffs_[static_cast<std::size_t>(p) * stride() + q];
  }
  double operator()(int p, int q) const noexcept {
    return coeffs_[static_cast<std::size_t>(p) * stride() + q];
  }

 private:
  std::size_t stride() const noexcept {
    return static_cast<std::size_t>(grid_.nodes_per_axis());
  }

  Grid grid_;
  std::vector<double> coeffs_;
};

/// An m-component state u = (u_1, ..., u_m) on one grid, stored contiguously
/// component after component.
class Field {
 public:
  /// Zero field. Throws std::invalid_argument if components < 1.
  Field(Grid grid, int components);
  explicit Field(std::vector<ScalarField> components);

  const Grid& grid() const noexcept { return grid_; }
  int components() const noexcept { return components_; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  std::span<double> component(int i) noexcept {
    return {data_.data() + offset(i), grid_.size()};
  }
  std::span<const double> component(int i) const noexcept {
    return {data_.data() + offset(i), grid_.size()};
  }

  ScalarField component_field(int i) const;

  double max_abs() const noexcept;
  double component_max_abs(int i) const noexcept;
  bool all_finite() const noexcept;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s) noexcept;
  /// this += s * x
  Field& axpy(double s, const Field& x);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double s, Field a) { return a *= s; }
  friend Field operator*(Field a, double s) { return a *= s; }

  /// Bitwise equality of grid, shape and values.
  friend bool operator==(const Field& a, const Field& b) noexcept {
    return a.grid_ == b.grid_ && a.components_ == b.components_ &&
           a.data_ == b.data_;
  }

 private:
  std::size_t offset(int i) const noexcept {
    return static_cast<std::size_t>(i) * grid_.size();
  }
  void require_compatible(const Field& other) const;

  Grid grid_;
  int components_;
  std::vector<double> data_;
};

}  // namespace nehari
