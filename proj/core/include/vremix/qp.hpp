#pragma once

#include <Eigen/Core>
#include <optional>
#include <utility>

namespace vremix {

enum class QpStatus { Optimal, Infeasible };

/// Small dense convex quadratic program
///
///   minimize    0.5 w' Q w + q' w
///   subject to  a' w >= b        (optional)
///               sum(w) = total   (optional)
///               w >= 0
///
/// Q must be symmetric positive semidefinite.
struct QpProblem {
  Eigen::MatrixXd q_matrix;
  Eigen::VectorXd q_linear;
  std::optional<std::pair<Eigen::VectorXd, double>> inequality;
  std::optional<double> total;
};

struct QpSolution {
  QpStatus status = QpStatus::Infeasible;
  Eigen::VectorXd w;
  double objective = 0.0;
  /// Largest KKT violation (stationarity, feasibility, complementarity).
  double kkt_residual = 0.0;
  int iterations = 0;
};

/// Primal active-set method on the nonnegativity bounds. Deterministic
/// pivoting: among violating multipliers the most negative is released,
/// ties broken by the smallest variable index (the inequality row ranks
/// after all bounds). Throws NumericalError when the objective is unbounded
/// below or the iteration cap is hit.
QpSolution solve_qp(const QpProblem& problem);

/// Independent KKT check: returns the largest violation of the optimality
/// conditions at w, using least-squares multipliers.
double kkt_residual(const QpProblem& problem, const Eigen::VectorXd& w);

}  // namespace vremix
