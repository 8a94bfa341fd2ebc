#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nehari/field.hpp"
#include "nehari/grid.hpp"

namespace nehari {

/// Symmetric m x m matrix of coupling constants g_ij.
class CouplingMatrix {
 public:
  /// `values` is row-major m x m. Throws std::invalid_argument if the size is
  /// wrong, an entry is not finite, or g_ij != g_ji.
  CouplingMatrix(int m, std::vector<double> values);
  CouplingMatrix(std::initializer_list<std::initializer_list<double>> rows);

  int size() const noexcept { return m_; }
  double operator()(int i, int j) const noexcept {
    return values_[static_cast<std::size_t>(i) * m_ + j];
  }
  const std::vector<double>& values() const noexcept { return values_; }

  /// All g_ij > 0.
  bool fully_cooperative() const noexcept;
  /// Symmetric positive definite (Cholesky succeeds).
  bool positive_definite() const;

 private:
  int m_;
  std::vector<double> values_;
};

/// How the quartic term I_h is weighted.
enum class InteractionScaling {
  /// h^2 sum_kl ..., the quadrature-consistent discretization (default).
  quadrature,
  /// Plain nodal sum without the h^2 weight (compatibility variant).
  unscaled,
};

/// Discrete coupled system -eps_i Laplace u_i + a_i u_i = sum_j g_ij u_j^2 u_i
/// on the box with zero Dirichlet data.
class Problem {
 public:
  /// Throws std::invalid_argument on inconsistent dimensions or grids.
  Problem(Grid grid, std::vector<double> eps, std::vector<ScalarField> potentials,
          CouplingMatrix coupling,
          InteractionScaling scaling = InteractionScaling::quadrature);

  const Grid& grid() const noexcept { return grid_; }
  int components() const noexcept { return coupling_.size(); }
  const std::vector<double>& eps() const noexcept { return eps_; }
  const ScalarField& potential(int i) const noexcept { return potentials_[i]; }
  const std::vector<ScalarField>& potentials() const noexcept {
    return potentials_;
  }
  const CouplingMatrix& coupling() const noexcept { return coupling_; }
  InteractionScaling scaling() const noexcept { return scaling_; }

  /// Weight in front of the nodal quartic sum: h^2 or 1.
  double interaction_weight() const noexcept;

 private:
  Grid grid_;
  std::vector<double> eps_;
  std::vector<ScalarField> potentials_;
  CouplingMatrix coupling_;
  InteractionScaling scaling_;
};

/// First violated admissibility clause of a problem.
struct Violation {
  std::string clause;  // "diffusion", "coupling", "potential"
  std::string detail;
};

/// Checks eps_i > 0, that g is fully cooperative or positive definite, and
/// that min a_i > -lambda_1 on the grid. Returns nullopt when admissible.
std::optional<Violation> validate_problem(const Problem& problem);

}  // namespace nehari
