#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <optional>
#include <vector>

#include "vremix/series.hpp"

namespace vremix {

/// Mean vector and strategy-masked covariance of the demand-normalized
/// production, plus the mean total demand. Everything the bi-objective
/// problem needs, decoupled from the underlying series.
struct MeanRiskInputs {
  ComponentIndex index;
  Eigen::VectorXd m;   // mean capacity factor per component, dimensionless
  Eigen::MatrixXd c;   // covariance of eta_k(t)/D(t), 1/MW^2 per unit w
  double e_demand_mw = 0.0;  // mean total demand
  Strategy strategy = Strategy::Global;

  void validate() const;
};

/// Zeroes the covariance entries the strategy ignores: Technology keeps
/// only within-zone blocks, Base only the diagonal. Masking a PSD matrix
/// this way keeps it PSD.
Eigen::MatrixXd mask_covariance(const Eigen::MatrixXd& c,
                                const ComponentIndex& index,
                                Strategy strategy);

/// m_k = mean(eta_k); C = cov(eta_k / demand) masked per strategy;
/// E_D = mean(demand). Series must be aligned and demand strictly positive.
MeanRiskInputs assemble_inputs(const ComponentIndex& index,
                               const std::vector<HourlySeries>& eta,
                               const HourlySeries& total_demand,
                               Strategy strategy);

/// Mean penetration (sum_k w_k m_k) / E_D. The ratio of expectations, not
/// the expectation of the ratio: the two differ and are never interchanged.
double penetration(const Eigen::VectorXd& w, const MeanRiskInputs& inputs);

/// Risk sqrt(w' C w): the standard deviation of the ratio series of the
/// combined production.
double risk(const Eigen::VectorXd& w, const MeanRiskInputs& inputs);

/// One Pareto candidate: the mix, its achieved (mu, sigma), and the grid
/// target that produced it.
struct FrontierPoint {
  Eigen::VectorXd w;
  double mu = 0.0;
  double sigma = 0.0;
  double target_mu = 0.0;
  bool active_total_constraint = false;
  bool converged = true;  // false when the alternating loop hit its cap
};

/// Frontier points ordered by target_mu, after dominance filtering.
struct Frontier {
  std::vector<FrontierPoint> points;
  ComponentIndex index;
  Strategy strategy = Strategy::Global;
  std::optional<double> total_capacity_mw;
  double step = 0.0;
};

/// min w' C w  s.t.  m' w >= mu_star * E_D, w >= 0, [sum w = total].
/// Empty result when the target is unattainable.
std::optional<FrontierPoint> solve_p_min(const MeanRiskInputs& inputs,
                                         double mu_star,
                                         std::optional<double> total_capacity);

/// max m' w  s.t.  w' C w <= sigma_star^2, w >= 0, [sum w = total].
/// The ball constraint is handled by bisection on its multiplier; each
/// inner problem is a QP on the remaining constraints.
std::optional<FrontierPoint> solve_p_max(const MeanRiskInputs& inputs,
                                         double sigma_star,
                                         std::optional<double> total_capacity);

/// Single-objective bounds bracketing the frontier: of1 = sigma^2,
/// of2 = m'w. Without a total constraint u_of1 and u_of2 are unbounded;
/// u_of2 is later replaced by the configured penetration cap.
struct ObjectiveBounds {
  double l_of1 = 0.0;
  double u_of1 = 0.0;
  double l_of2 = 0.0;
  double u_of2 = 0.0;
};

ObjectiveBounds objective_bounds(const MeanRiskInputs& inputs,
                                 std::optional<double> total_capacity);

/// Settings of the epsilon-constraint sweep.
struct FrontierOptions {
  double step = 0.001;
  std::optional<double> total_capacity_mw;
  double mu_max_cap = 1.0;     // grid top when unconstrained
  double dominance_tol = 1e-9;
  int max_alternations = 50;
};

/// Sweeps target penetrations from l_of2/E_D to u_of2/E_D in steps of
/// `step`; at each target alternates P-min and P-max (tolerance step/100)
/// until the penetration stops improving, emits the P-max fixed point, and
/// finally removes dominated points.
Frontier compute_frontier(const MeanRiskInputs& inputs,
                          const FrontierOptions& options);

/// Least-squares slope through the origin of mu against sigma, plus the
/// largest relative deviation of the per-point ratios from that slope.
struct MeanRiskRatio {
  double alpha = 0.0;
  double max_rel_deviation = 0.0;
};

MeanRiskRatio mean_risk_ratio(const Frontier& frontier);

/// CSV `strategy,target_mu,mu,sigma,active_total_constraint,w_<zone>_<tech>...`.
void save_frontier(const Frontier& frontier, const std::filesystem::path& path);
Frontier load_frontier(const std::filesystem::path& path);

}  // namespace vremix
