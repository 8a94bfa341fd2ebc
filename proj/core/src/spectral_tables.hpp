#pragma once

#include <fftw3.h>

#include <vector>

namespace nehari::detail {

/// Per-grid immutable spectral data: the Laplace symbol and one DST-I plan
/// (FFTW RODFT00 is its own inverse up to the factor 4 in 2D).
struct SpectralTables {
  SpectralTables(int subdivisions, std::vector<double> symbol);
  ~SpectralTables();

  SpectralTables(const SpectralTables&) = delete;
  SpectralTables& operator=(const SpectralTables&) = delete;

  int n;
  int subdivisions;
  std::vector<double> symbol;
  fftw_plan plan = nullptr;
};

std::vector<double> laplacian_symbol(double half_width, int subdivisions);

}  // namespace nehari::detail
