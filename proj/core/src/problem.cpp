#include "nehari/problem.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nehari {

CouplingMatrix::CouplingMatrix(int m, std::vector<double> values)
    : m_(m), values_(std::move(values)) {
  if (m < 1 || values_.size() != static_cast<std::size_t>(m) * m) {
    throw std::invalid_argument("coupling matrix must be m x m with m >= 1");
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double gij = (*this)(i, j);
      if (!std::isfinite(gij)) {
        throw std::invalid_argument("coupling matrix has a non-finite entry");
      }
      if (gij != (*this)(j, i)) {
        std::ostringstream msg;
        msg << "coupling matrix is not symmetric: g(" << i + 1 << "," << j + 1
            << ") = " << gij << " but g(" << j + 1 << "," << i + 1
            << ") = " << (*this)(j, i);
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

namespace {
std::vector<double> flatten(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<double> out;
  for (const auto& row : rows) {
    if (row.size() != rows.size()) {
      throw std::invalid_argument("coupling matrix rows must have length m");
    }
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}
}  // namespace

CouplingMatrix::CouplingMatrix(
    std::initializer_list<std::initializer_list<double>> rows)
    : CouplingMatrix(static_cast<int>(rows.size()), flatten(rows)) {}

bool CouplingMatrix::fully_cooperative() const noexcept {
  for (double g : values_) {
    if (!(g > 0.0)) return false;
  }
  return true;
}

bool CouplingMatrix::positive_definite() const {
  Eigen::MatrixXd g(m_, m_);
  for (int i = 0; i < m_; ++i) {
    for (int j = 0; j < m_; ++j) g(i, j) = (*this)(i, j);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  return llt.info() == Eigen::Success;
}

Problem::Problem(Grid grid, std::vector<double> eps,
                 std::vector<ScalarField> potentials, CouplingMatrix coupling,
                 InteractionScaling scaling)
    : grid_(std::move(grid)), eps_(std::move(eps)),
      potentials_(std::move(potentials)), coupling_(std::move(coupling)),
      scaling_(scaling) {
  const auto m = static_cast<std::size_t>(coupling_.size());
  if (eps_.size() != m || potentials_.size() != m) {
    throw std::invalid_argument(
        "problem needs one diffusion coefficient and one potential per "
        "component");
  }
  for (const auto& a : potentials_) {
    if (!(a.grid() == grid_)) {
      throw std::invalid_argument("potential sampled on a different grid");
    }
  }
}

double Problem::interaction_weight() const noexcept {
  if (scaling_ == InteractionScaling::unscaled) return 1.0;
  const double h = grid_.mesh();
  return h * h;
}

std::optional<Violation> validate_problem(const Problem& problem) {
  for (int i = 0; i < problem.components(); ++i) {
    const double e = problem.eps()[i];
    if (!(e > 0.0) || !std::isfinite(e)) {
      std::ostringstream msg;
      msg << "eps_" << i + 1 << " = " << e << " must be positive";
      return Violation{"diffusion", msg.str()};
    }
  }
  const auto& g = problem.coupling();
  if (!g.fully_cooperative() && !g.positive_definite()) {
    return Violation{"coupling",
                     "g is neither fully cooperative (all g_ij > 0) nor "
                     "positive definite"};
  }
  const double lambda1 = problem.grid().first_eigenvalue();
  for (int i = 0; i < problem.components(); ++i) {
    const double amin = problem.potential(i).min();
    if (!(amin > -lambda1)) {
      std::ostringstream msg;
      msg << "min a_" << i + 1 << " = " << amin
          << " does not exceed -lambda_1 = " << -lambda1;
      return Violation{"potential", msg.str()};
    }
  }
  return std::nullopt;
}

}  // namespace nehari
