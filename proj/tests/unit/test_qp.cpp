#include <cmath>
#include <optional>

#include "doctest.h"
#include "helpers.hpp"
#include "vremix/errors.hpp"
#include "vremix/qp.hpp"
#include "vremix/rng.hpp"

using namespace vremix;

namespace {

QpProblem diag_problem(std::initializer_list<double> q_diag,
                       std::initializer_list<double> q_lin) {
  QpProblem p;
  const Eigen::Index n = Eigen::Index(q_diag.size());
  p.q_matrix = Eigen::MatrixXd::Zero(n, n);
  Eigen::Index i = 0;
  for (double d : q_diag) p.q_matrix(i, i) = d, ++i;
  p.q_linear.resize(n);
  i = 0;
  for (double v : q_lin) p.q_linear[i++] = v;
  return p;
}

double objective_of(const QpProblem& p, const Eigen::VectorXd& w) {
  return 0.5 * w.dot(p.q_matrix * w) + p.q_linear.dot(w);
}

}  // namespace

TEST_SUITE("qp") {

TEST_CASE("uniform split under an equality budget") {
  QpProblem p = diag_problem({2.0, 2.0, 2.0}, {0.0, 0.0, 0.0});
  p.total = 1.0;
  QpSolution sol = solve_qp(p);
  REQUIRE(sol.status == QpStatus::Optimal);
  for (int i = 0; i < 3; ++i)
    CHECK(sol.w[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(sol.objective == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(sol.kkt_residual < 1e-10);
}

TEST_CASE("budget splits inversely to the curvature") {
  QpProblem p = diag_problem({1.0, 4.0}, {0.0, 0.0});
  p.total = 1.0;
  QpSolution sol = solve_qp(p);
  REQUIRE(sol.status == QpStatus::Optimal);
  CHECK(sol.w[0] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(sol.w[1] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(sol.objective == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("nonnegativity bound becomes active") {
  QpProblem p = diag_problem({1.0, 1.0}, {-1.0, 1.0});
  QpSolution sol = solve_qp(p);
  REQUIRE(sol.status == QpStatus::Optimal);
  CHECK(sol.w[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.w[1] == 0.0);
  CHECK(sol.objective == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("linear inequality active and slack") {
  QpProblem active = diag_problem({2.0, 2.0}, {0.0, 0.0});
  active.inequality = {Eigen::VectorXd::Ones(2), 1.0};
  QpSolution sa = solve_qp(active);
  REQUIRE(sa.status == QpStatus::Optimal);
  CHECK(sa.w[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sa.w[1] == doctest::Approx(0.5).epsilon(1e-12));

  QpProblem slack = diag_problem({2.0, 2.0}, {-4.0, 0.0});
  slack.inequality = {Eigen::VectorXd::Ones(2), 1.0};
  QpSolution ss = solve_qp(slack);
  REQUIRE(ss.status == QpStatus::Optimal);
  CHECK(ss.w[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ss.w[1] == 0.0);
  CHECK(ss.objective == doctest::Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("equality and inequality interact") {
  QpProblem p = diag_problem({2.0, 2.0}, {0.0, 0.0});
  p.total = 1.0;
  Eigen::VectorXd a(2);
  a << 1.0, 0.0;
  p.inequality = {a, 0.7};
  QpSolution sol = solve_qp(p);
  REQUIRE(sol.status == QpStatus::Optimal);
  CHECK(sol.w[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(sol.w[1] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("degenerate vertex with dependent active constraints") {
  // The unique feasible point (1, 0, 0) activates four constraints in three
  // dimensions (two bounds, the inequality, the budget), so the active
  // gradients are linearly dependent.  The optimality check must still
  // certify the solution via a sign-feasible multiplier set.
  QpProblem p = diag_problem({2.0, 0.0, 0.0}, {0.0, 0.0, 0.0});
  p.total = 1.0;
  Eigen::VectorXd a(3);
  a << 0.30, 0.15, 0.22;
  p.inequality = {a, 0.30};
  QpSolution sol = solve_qp(p);
  REQUIRE(sol.status == QpStatus::Optimal);
  CHECK(sol.w[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.w[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(sol.w[2] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(sol.kkt_residual <= 1e-10);
  CHECK(kkt_residual(p, sol.w) <= 1e-10);
}

TEST_CASE("one-dimensional problems") {
  QpProblem p = diag_problem({2.0}, {-3.0});
  QpSolution sol = solve_qp(p);
  REQUIRE(sol.status == QpStatus::Optimal);
  CHECK(sol.w[0] == doctest::Approx(1.5).epsilon(1e-12));

  p.total = 2.0;  // the budget overrides the unconstrained optimum
  sol = solve_qp(p);
  REQUIRE(sol.status == QpStatus::Optimal);
  CHECK(sol.w[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("infeasible constraint combinations are reported, not solved") {
  QpProblem p = diag_problem({2.0, 2.0}, {0.0, 0.0});
  p.total = 1.0;
  p.inequality = {Eigen::VectorXd::Ones(2), 10.0};
  CHECK(solve_qp(p).status == QpStatus::Infeasible);

  QpProblem neg = diag_problem({2.0, 2.0}, {0.0, 0.0});
  neg.inequality = {-Eigen::VectorXd::Ones(2), 1.0};
  CHECK(solve_qp(neg).status == QpStatus::Infeasible);

  QpProblem bad_total = diag_problem({2.0, 2.0}, {0.0, 0.0});
  bad_total.total = -5.0;
  CHECK(solve_qp(bad_total).status == QpStatus::Infeasible);
}

TEST_CASE("unbounded objectives throw") {
  QpProblem p = diag_problem({0.0, 0.0}, {-1.0, -1.0});
  CHECK_THROWS_AS(solve_qp(p), NumericalError);
}

TEST_CASE("flat directions on the constraint face are handled") {
  // Singular PSD quadratic: the objective is constant on the simplex.
  QpProblem p;
  p.q_matrix.resize(2, 2);
  p.q_matrix << 1.0, 1.0, 1.0, 1.0;
  p.q_linear = -Eigen::VectorXd::Ones(2);
  p.total = 1.0;
  QpSolution sol = solve_qp(p);
  REQUIRE(sol.status == QpStatus::Optimal);
  CHECK(sol.w.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.w.minCoeff() >= -1e-12);
  CHECK(sol.objective == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(kkt_residual(p, sol.w) < 1e-8);
}

TEST_CASE("trivial problem returns the origin") {
  QpProblem p = diag_problem({0.0, 0.0}, {0.0, 0.0});
  QpSolution sol = solve_qp(p);
  REQUIRE(sol.status == QpStatus::Optimal);
  CHECK(sol.w.cwiseAbs().maxCoeff() == 0.0);
  CHECK(sol.objective == 0.0);
}

TEST_CASE("independent optimality check flags non-optimal points") {
  QpProblem p = diag_problem({1.0, 4.0}, {0.0, 0.0});
  p.total = 1.0;
  Eigen::VectorXd best(2), off(2);
  best << 0.8, 0.2;
  off << 1.0, 0.0;
  CHECK(kkt_residual(p, best) < 1e-10);
  CHECK(kkt_residual(p, off) > 1e-3);
}

TEST_CASE("random PSD instances satisfy the optimality conditions") {
  for (int trial = 0; trial < 25; ++trial) {
    Rng rng(Rng::key(900 + std::uint64_t(trial), {Rng::label("qp-instance")}));
    const int n = 2 + int(rng.uniform01() * 6.0);  // 2..7 variables
    Eigen::MatrixXd mshape(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) mshape(i, j) = rng.normal();
    QpProblem p;
    p.q_matrix = mshape.transpose() * mshape;  // PSD by construction
    p.q_linear.resize(n);
    for (int i = 0; i < n; ++i) p.q_linear[i] = 2.0 * rng.uniform01() - 1.0;
    Eigen::VectorXd a(n);
    for (int i = 0; i < n; ++i) a[i] = 0.1 + rng.uniform01();
    if (trial % 2 == 0) p.inequality = {a, 0.25 * a.mean()};
    if (trial % 3 == 0) p.total = 1.0;

    QpSolution sol = solve_qp(p);
    REQUIRE(sol.status == QpStatus::Optimal);

    // Feasibility.
    CHECK(sol.w.minCoeff() >= -1e-12);
    if (p.total)
      CHECK(std::abs(sol.w.sum() - *p.total) <= 1e-9 * (1.0 + *p.total));
    if (p.inequality)
      CHECK(p.inequality->first.dot(sol.w) >=
            p.inequality->second - 1e-9 * (1.0 + std::abs(p.inequality->second)));

    // Reported objective matches its definition.
    CHECK(sol.objective ==
          doctest::Approx(objective_of(p, sol.w)).epsilon(1e-12).scale(1.0));

    // Optimality, both as reported and re-derived independently.
    double w_norm = sol.w.cwiseAbs().maxCoeff();
    double q_norm = p.q_matrix.cwiseAbs().maxCoeff();
    double lin_norm = p.q_linear.cwiseAbs().maxCoeff();
    double bound = 1e-8 * (1.0 + q_norm * w_norm + lin_norm);
    CHECK(sol.kkt_residual <= bound);
    CHECK(kkt_residual(p, sol.w) <= bound);
  }
}

TEST_CASE("solves are deterministic") {
  Rng rng(Rng::key(77, {Rng::label("qp-repeat")}));
  Eigen::MatrixXd mshape(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) mshape(i, j) = rng.normal();
  QpProblem p;
  p.q_matrix = mshape.transpose() * mshape;
  p.q_linear = -Eigen::VectorXd::Ones(4);
  p.total = 2.0;

  QpSolution first = solve_qp(p);
  QpSolution second = solve_qp(p);
  REQUIRE(first.status == QpStatus::Optimal);
  CHECK(first.w == second.w);
  CHECK(first.objective == second.objective);
  CHECK(first.iterations == second.iterations);
}

}  // TEST_SUITE("qp")
