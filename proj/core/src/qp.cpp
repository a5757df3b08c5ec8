#include "vremix/qp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "vremix/errors.hpp"

namespace vremix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ActiveSet {
  std::vector<bool> bound;  // w_i pinned at 0
  bool inequality = false;  // a'w = b enforced
};

// Direction solve on the free variables: minimize the quadratic model
// subject to staying on the active equality rows. A `ray` direction has
// zero curvature and strictly negative slope (infinite descent unless a
// bound blocks it).
struct Direction {
  // Infinity norm of the reduced gradient (the gradient projected onto the
  // still-free subspace). Zero when the working set determines the point.
  double reduced_grad_norm = 0.0;
  Eigen::VectorXd p;  // full-size, zeros on pinned variables
  bool ray = false;
};

Eigen::MatrixXd equality_rows(const QpProblem& prob, const ActiveSet& act,
                              const std::vector<int>& free) {
  int rows = int(act.inequality) + int(prob.total.has_value());
  Eigen::MatrixXd e(rows, Eigen::Index(free.size()));
  int r = 0;
  if (act.inequality) {
    for (std::size_t j = 0; j < free.size(); ++j)
      e(r, Eigen::Index(j)) = prob.inequality->first[free[j]];
    ++r;
  }
  if (prob.total) {
    for (std::size_t j = 0; j < free.size(); ++j) e(r, Eigen::Index(j)) = 1.0;
    ++r;
  }
  return e;
}

Direction solve_direction(const Eigen::MatrixXd& q_sym,
                          const Eigen::VectorXd& grad, const QpProblem& prob,
                          const ActiveSet& act, const std::vector<int>& free) {
  const Eigen::Index n = q_sym.rows();
  Direction dir;
  dir.p = Eigen::VectorXd::Zero(n);
  if (free.empty()) return dir;

  Eigen::MatrixXd e = equality_rows(prob, act, free);
  Eigen::MatrixXd z;
  if (e.rows() == 0) {
    z = Eigen::MatrixXd::Identity(Eigen::Index(free.size()),
                                  Eigen::Index(free.size()));
  } else {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(e);
    z = lu.kernel();
    if (lu.dimensionOfKernel() == 0) return dir;  // point fully determined
  }

  Eigen::MatrixXd q_ff(free.size(), free.size());
  Eigen::VectorXd g_f(free.size());
  for (std::size_t i = 0; i < free.size(); ++i) {
    g_f[Eigen::Index(i)] = grad[free[i]];
    for (std::size_t j = 0; j < free.size(); ++j)
      q_ff(Eigen::Index(i), Eigen::Index(j)) = q_sym(free[i], free[j]);
  }

  Eigen::MatrixXd h = z.transpose() * q_ff * z;
  Eigen::VectorXd rhs = -(z.transpose() * g_f);
  dir.reduced_grad_norm = rhs.size() > 0 ? rhs.cwiseAbs().maxCoeff() : 0.0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success)
    throw NumericalError("qp: eigendecomposition of the reduced Hessian failed");
  const Eigen::VectorXd& lam = es.eigenvalues();
  const Eigen::MatrixXd& v = es.eigenvectors();
  // Curvature is judged relative to the largest eigenvalue present, so the
  // solver keeps taking Newton steps on well-conditioned problems at any
  // absolute scale and only falls back to ray directions when the reduced
  // Hessian is genuinely singular along that eigendirection.
  double lam_scale = lam.size() > 0 ? lam.cwiseAbs().maxCoeff() : 0.0;
  double lam_cut = 1e-12 * lam_scale;
  double slope_cut = 1e-11 * (1.0 + rhs.cwiseAbs().maxCoeff());

  Eigen::VectorXd rhs_v = v.transpose() * rhs;
  // Zero-curvature eigendirection with slope: infinite descent ray.
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] <= lam_cut && std::abs(rhs_v[i]) > slope_cut) {
      Eigen::VectorXd zray =
          v.col(i) * (rhs_v[i] > 0.0 ? 1.0 : -1.0);
      Eigen::VectorXd p_f = z * zray;
      for (std::size_t j = 0; j < free.size(); ++j)
        dir.p[free[j]] = p_f[Eigen::Index(j)];
      dir.ray = true;
      return dir;
    }
  }

  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam[i] > lam_cut) coeff[i] = rhs_v[i] / lam[i];
  Eigen::VectorXd p_f = z * (v * coeff);
  for (std::size_t j = 0; j < free.size(); ++j)
    dir.p[free[j]] = p_f[Eigen::Index(j)];
  return dir;
}

// Least-squares multipliers of the active rows at a working-set stationary
// point: grad = nu*a + tau*1 on the free variables.
void active_multipliers(const Eigen::VectorXd& grad, const QpProblem& prob,
                        const ActiveSet& act, const std::vector<int>& free,
                        double& nu, double& tau) {
  nu = 0.0;
  tau = 0.0;
  int cols = int(act.inequality) + int(prob.total.has_value());
  if (cols == 0 || free.empty()) return;
  Eigen::MatrixXd m(Eigen::Index(free.size()), cols);
  Eigen::VectorXd g_f(Eigen::Index(free.size()));
  for (std::size_t i = 0; i < free.size(); ++i) {
    int c = 0;
    if (act.inequality) m(Eigen::Index(i), c++) = prob.inequality->first[free[i]];
    if (prob.total) m(Eigen::Index(i), c++) = 1.0;
    g_f[Eigen::Index(i)] = grad[free[i]];
  }
  Eigen::VectorXd x =
      m.completeOrthogonalDecomposition().solve(g_f);
  int c = 0;
  if (act.inequality) nu = x[c++];
  if (prob.total) tau = x[c++];
}

// min ||m x - g||_2 with x[i] >= 0 for i < n_signed and the remaining
// entries free.  Lawson-Hanson active-set iteration; the free columns stay
// in every least-squares subproblem.
Eigen::VectorXd signed_least_squares(const Eigen::MatrixXd& m,
                                     const Eigen::VectorXd& g,
                                     Eigen::Index n_signed) {
  const Eigen::Index cols = m.cols();
  std::vector<char> passive(std::size_t(cols), 0);
  for (Eigen::Index i = n_signed; i < cols; ++i) passive[std::size_t(i)] = 1;

  auto solve_passive = [&]() {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(cols);
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < cols; ++i)
      if (passive[std::size_t(i)]) idx.push_back(i);
    if (idx.empty()) return full;
    Eigen::MatrixXd sub(m.rows(), Eigen::Index(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j)
      sub.col(Eigen::Index(j)) = m.col(idx[j]);
    Eigen::VectorXd sol = sub.completeOrthogonalDecomposition().solve(g);
    for (std::size_t j = 0; j < idx.size(); ++j)
      full[idx[j]] = sol[Eigen::Index(j)];
    return full;
  };

  const double tol = 1e-12 * (1.0 + g.cwiseAbs().maxCoeff()) *
                     (1.0 + m.cwiseAbs().maxCoeff());
  Eigen::VectorXd x = solve_passive();
  for (int outer = 0; outer < 4 * int(cols) + 4; ++outer) {
    Eigen::VectorXd r = g - m * x;
    Eigen::Index enter = -1;
    double best = tol;
    for (Eigen::Index i = 0; i < n_signed; ++i) {
      if (passive[std::size_t(i)]) continue;
      double s = m.col(i).dot(r);
      if (s > best) {
        best = s;
        enter = i;
      }
    }
    if (enter < 0) break;
    passive[std::size_t(enter)] = 1;

    for (int inner = 0; inner <= int(cols); ++inner) {
      Eigen::VectorXd z = solve_passive();
      double alpha = 1.0;
      Eigen::Index block = -1;
      for (Eigen::Index i = 0; i < n_signed; ++i) {
        if (!passive[std::size_t(i)] || z[i] >= 0.0) continue;
        double denom = x[i] - z[i];
        double a = denom > 0.0 ? x[i] / denom : 0.0;
        if (a < alpha) {
          alpha = a;
          block = i;
        }
      }
      if (block < 0) {
        x = z;
        break;
      }
      x += alpha * (z - x);
      double drop_eps = 1e-14 * (1.0 + x.cwiseAbs().maxCoeff());
      for (Eigen::Index i = 0; i < n_signed; ++i) {
        if (!passive[std::size_t(i)]) continue;
        if (i == block || x[i] <= drop_eps) {
          x[i] = 0.0;
          passive[std::size_t(i)] = 0;
        }
      }
    }
  }
  return x;
}

}  // namespace

QpSolution solve_qp(const QpProblem& problem) {
  const Eigen::Index n = problem.q_matrix.rows();
  if (n == 0 || problem.q_matrix.cols() != n ||
      problem.q_linear.size() != n)
    throw ValidationError("qp: inconsistent problem dimensions");
  if (problem.inequality && problem.inequality->first.size() != n)
    throw ValidationError("qp: inequality row length mismatch");
  if (problem.total && !(*problem.total >= 0.0))
    throw ValidationError("qp: total must be nonnegative");

  const Eigen::MatrixXd q_sym =
      0.5 * (problem.q_matrix + problem.q_matrix.transpose());
  const Eigen::VectorXd& q = problem.q_linear;

  QpSolution sol;
  sol.w = Eigen::VectorXd::Zero(n);
  ActiveSet act;
  act.bound.assign(std::size_t(n), true);

  // Feasible start at a vertex (or the origin when that is feasible).
  if (problem.total) {
    Eigen::Index j = 0;
    if (problem.inequality) {
      problem.inequality->first.maxCoeff(&j);
      double reach = *problem.total * problem.inequality->first[j];
      double scale = 1.0 + std::abs(problem.inequality->second) +
                     *problem.total *
                         problem.inequality->first.cwiseAbs().maxCoeff();
      if (reach < problem.inequality->second - 1e-12 * scale) return sol;
    } else {
      q.minCoeff(&j);
    }
    sol.w[j] = *problem.total;
    act.bound[std::size_t(j)] = false;
    if (problem.inequality) {
      double slack = problem.inequality->first.dot(sol.w) -
                     problem.inequality->second;
      double scale = 1.0 + std::abs(problem.inequality->second) +
                     sol.w.cwiseAbs().maxCoeff() *
                         problem.inequality->first.cwiseAbs().maxCoeff();
      act.inequality = slack <= 1e-12 * scale;
    }
  } else if (problem.inequality &&
             problem.inequality->second > 1e-12 *
                     (1.0 + std::abs(problem.inequality->second))) {
    Eigen::Index j;
    double a_max = problem.inequality->first.maxCoeff(&j);
    if (!(a_max > 0.0)) return sol;  // positive target, no productive entry
    sol.w[j] = problem.inequality->second / a_max;
    act.bound[std::size_t(j)] = false;
    act.inequality = true;
  }
  // Otherwise the origin is feasible and every bound starts active.

  const int max_iter = 60 * int(n + 3);
  const double w_eps = 1e-13;
  for (sol.iterations = 0; sol.iterations < max_iter; ++sol.iterations) {
    std::vector<int> free;
    for (Eigen::Index i = 0; i < n; ++i)
      if (!act.bound[std::size_t(i)]) free.push_back(int(i));

    Eigen::VectorXd grad = q_sym * sol.w + q;
    Direction dir = solve_direction(q_sym, grad, problem, act, free);

    double p_norm = dir.p.cwiseAbs().maxCoeff();
    double w_norm = sol.w.cwiseAbs().maxCoeff();
    // Stationarity needs both a negligible step and a negligible reduced
    // gradient: when the solution magnitude is far below 1 the Newton step
    // is tiny long before the point is optimal, and only the projected
    // gradient tells the two situations apart.
    bool reduced_grad_zero =
        dir.reduced_grad_norm <= 1e-10 * (1.0 + grad.cwiseAbs().maxCoeff());
    if (!dir.ray && p_norm <= 1e-12 * (1.0 + w_norm) && reduced_grad_zero) {
      // Working-set stationary point: examine the multipliers.
      double nu = 0.0, tau = 0.0;
      active_multipliers(grad, problem, act, free, nu, tau);
      double mu_scale = 1e-10 * (1.0 + grad.cwiseAbs().maxCoeff());
      double worst = -mu_scale;
      int worst_bound = -1;
      bool drop_inequality = false;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!act.bound[std::size_t(i)]) continue;
        double mu = grad[i] - tau;
        if (act.inequality) mu -= nu * problem.inequality->first[i];
        if (mu < worst) {
          worst = mu;
          worst_bound = int(i);
        }
      }
      if (act.inequality && nu < worst) {
        worst = nu;
        worst_bound = -1;
        drop_inequality = true;
      }
      if (worst_bound < 0 && !drop_inequality) {
        sol.status = QpStatus::Optimal;
        sol.objective = 0.5 * sol.w.dot(q_sym * sol.w) + q.dot(sol.w);
        sol.kkt_residual = kkt_residual(problem, sol.w);
        return sol;
      }
      if (drop_inequality)
        act.inequality = false;
      else
        act.bound[std::size_t(worst_bound)] = false;
      continue;
    }

    // Line search against the inactive constraints.
    double alpha = dir.ray ? kInf : 1.0;
    int blocking_bound = -1;
    bool blocking_inequality = false;
    for (int i : free) {
      if (dir.p[i] < -w_eps) {
        double a_i = std::max(sol.w[i], 0.0) / -dir.p[i];
        if (a_i < alpha) {
          alpha = a_i;
          blocking_bound = i;
          blocking_inequality = false;
        }
      }
    }
    if (problem.inequality && !act.inequality) {
      double ap = problem.inequality->first.dot(dir.p);
      if (ap < -w_eps) {
        double slack = problem.inequality->first.dot(sol.w) -
                       problem.inequality->second;
        double a_i = std::max(slack, 0.0) / -ap;
        if (a_i < alpha) {
          alpha = a_i;
          blocking_bound = -1;
          blocking_inequality = true;
        }
      }
    }
    if (!std::isfinite(alpha))
      throw NumericalError("qp: objective unbounded below");

    sol.w += alpha * dir.p;
    if (blocking_bound >= 0) {
      sol.w[blocking_bound] = 0.0;
      act.bound[std::size_t(blocking_bound)] = true;
    } else if (blocking_inequality) {
      act.inequality = true;
    }
    for (Eigen::Index i = 0; i < n; ++i)
      if (!act.bound[std::size_t(i)] && sol.w[i] < 0.0) sol.w[i] = 0.0;
  }
  throw NumericalError("qp: active-set iteration cap reached (" +
                       std::to_string(max_iter) + " iterations)");
}

double kkt_residual(const QpProblem& problem, const Eigen::VectorXd& w) {
  const Eigen::Index n = problem.q_matrix.rows();
  const Eigen::MatrixXd q_sym =
      0.5 * (problem.q_matrix + problem.q_matrix.transpose());
  Eigen::VectorXd grad = q_sym * w + problem.q_linear;

  double w_norm = w.cwiseAbs().maxCoeff();
  double act_eps = 1e-9 * (1.0 + w_norm);

  std::vector<Eigen::Index> active_bounds;
  for (Eigen::Index i = 0; i < n; ++i)
    if (w[i] <= act_eps) active_bounds.push_back(i);

  double slack = 0.0;
  bool ineq_active = false;
  if (problem.inequality) {
    slack = problem.inequality->first.dot(w) - problem.inequality->second;
    double scale = 1.0 + std::abs(problem.inequality->second) +
                   w_norm * problem.inequality->first.cwiseAbs().maxCoeff();
    ineq_active = std::abs(slack) <= 1e-8 * scale;
  }

  Eigen::Index cols = Eigen::Index(active_bounds.size()) +
                      Eigen::Index(ineq_active) +
                      Eigen::Index(problem.total.has_value());
  double stationarity;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(cols);
  if (cols > 0) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, cols);
    Eigen::Index c = 0;
    for (Eigen::Index i : active_bounds) m(i, c++) = 1.0;
    if (ineq_active) m.col(c++) = problem.inequality->first;
    if (problem.total) m.col(c++).setOnes();
    // Bound and inequality multipliers must be nonnegative; only the equality
    // multiplier is free.  Enforce the signs during recovery: at a degenerate
    // vertex the active columns are linearly dependent and an unconstrained
    // least-squares solution can violate the signs even when a valid
    // certificate exists.
    Eigen::Index n_signed = cols - Eigen::Index(problem.total.has_value());
    x = signed_least_squares(m, grad, n_signed);
    stationarity = (grad - m * x).cwiseAbs().maxCoeff();
  } else {
    stationarity = grad.cwiseAbs().maxCoeff();
  }

  double dual = 0.0;
  double complementarity = 0.0;
  {
    Eigen::Index c = 0;
    for (Eigen::Index i : active_bounds) {
      double mu = x[c++];
      dual = std::max(dual, -mu);
      complementarity = std::max(complementarity, std::abs(mu * w[i]));
    }
    if (ineq_active) {
      double nu = x[c++];
      dual = std::max(dual, -nu);
      complementarity = std::max(complementarity, std::abs(nu * slack));
    }
  }

  double primal = std::max(0.0, -w.minCoeff());
  if (problem.inequality)
    primal = std::max(primal, problem.inequality->second -
                                  problem.inequality->first.dot(w));
  if (problem.total)
    primal = std::max(primal, std::abs(w.sum() - *problem.total));

  return std::max({stationarity, dual, complementarity, primal});
}

}  // namespace vremix
