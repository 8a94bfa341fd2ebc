#include "nehari/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nehari {

namespace {
double max_abs_of(std::span<const double> v) noexcept {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}
}  // namespace

ScalarField::ScalarField(Grid grid)
    : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("field has " + std::to_string(values_.size()) +
                                " values, grid expects " +
                                std::to_string(grid_.size()));
  }
  if (!std::all_of(values_.begin(), values_.end(),
                   [](double x) { return std::isfinite(x); })) {
    throw std::invalid_argument("field contains non-finite values");
  }
}

double ScalarField::max_abs() const noexcept { return max_abs_of(values_); }

double ScalarField::min() const noexcept {
  return *std::min_element(values_.begin(), values_.end());
}

SpectralCoeffs::SpectralCoeffs(Grid grid)
    : grid_(std::move(grid)), coeffs_(grid_.size(), 0.0) {}

SpectralCoeffs::SpectralCoeffs(Grid grid, std::vector<double> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) {
    throw std::invalid_argument("coefficient array does not match grid");
  }
}

Field::Field(Grid grid, int components)
    : grid_(std::move(grid)), components_(components) {
  if (components < 1) {
    throw std::invalid_argument("a field needs at least one component");
  }
  data_.assign(static_cast<std::size_t>(components) * grid_.size(), 0.0);
}

Field::Field(std::vector<ScalarField> parts)
    : grid_(parts.empty() ? throw std::invalid_argument(
                                "a field needs at least one component")
                          : parts.front().grid()),
      components_(static_cast<int>(parts.size())) {
  data_.reserve(parts.size() * grid_.size());
  for (const auto& part : parts) {
    if (!(part.grid() == grid_)) {
      throw std::invalid_argument("field components live on different grids");
    }
    data_.insert(data_.end(), part.values().begin(), part.values().end());
  }
}

ScalarField Field::component_field(int i) const {
  auto c = component(i);
  return ScalarField(grid_, std::vector<double>(c.begin(), c.end()));
}

double Field::max_abs() const noexcept { return max_abs_of(data_); }

double Field::component_max_abs(int i) const noexcept {
  return max_abs_of(component(i));
}

bool Field::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

void Field::require_compatible(const Field& other) const {
  if (!(grid_ == other.grid_) || components_ != other.components_) {
    throw std::invalid_argument("field shape or grid mismatch");
  }
}

Field& Field::operator+=(const Field& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Field& Field::operator*=(double s) noexcept {
  for (double& x : data_) x *= s;
  return *this;
}

Field& Field::axpy(double s, const Field& x) {
  require_compatible(x);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * x.data_[i];
  return *this;
}

}  // namespace nehari
