#include "vremix/optimizer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "vremix/csv.hpp"
#include "vremix/errors.hpp"
#include "vremix/qp.hpp"
#include "vremix/stats.hpp"

namespace vremix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Runs the QP and verifies the solution against the independent KKT check.
QpSolution run_qp(const QpProblem& prob) {
  QpSolution sol = solve_qp(prob);
  if (sol.status != QpStatus::Optimal) return sol;
  double w_norm = sol.w.size() > 0 ? sol.w.cwiseAbs().maxCoeff() : 0.0;
  double q_norm = prob.q_matrix.size() > 0
                      ? prob.q_matrix.cwiseAbs().maxCoeff()
                      : 0.0;
  double lin_norm = prob.q_linear.size() > 0
                        ? prob.q_linear.cwiseAbs().maxCoeff()
                        : 0.0;
  double bound = 1e-8 * (1.0 + q_norm * w_norm + lin_norm);
  if (!(sol.kkt_residual <= bound))
    throw NumericalError("qp solution failed the optimality check: residual " +
                         format_double(sol.kkt_residual) + " exceeds " +
                         format_double(bound));
  return sol;
}

FrontierPoint make_point(const Eigen::VectorXd& w, const MeanRiskInputs& in,
                         double target_mu, bool active_total) {
  FrontierPoint p;
  p.w = w;
  p.mu = penetration(w, in);
  p.sigma = risk(w, in);
  p.target_mu = target_mu;
  p.active_total_constraint = active_total;
  return p;
}

}  // namespace

void MeanRiskInputs::validate() const {
  const Eigen::Index n = Eigen::Index(index.size());
  if (n == 0) throw ValidationError("mean-risk inputs: empty component index");
  if (m.size() != n || c.rows() != n || c.cols() != n)
    throw ValidationError(
        "mean-risk inputs: m/C dimensions do not match the component index");
  if (!m.allFinite() || !c.allFinite())
    throw ValidationError("mean-risk inputs: non-finite entries");
  if (m.minCoeff() < 0.0)
    throw ValidationError("mean-risk inputs: negative mean capacity factor");
  if (!(e_demand_mw > 0.0))
    throw ValidationError("mean-risk inputs: mean demand must be positive");
  double c_scale = c.cwiseAbs().maxCoeff();
  if ((c - c.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + c_scale))
    throw ValidationError("mean-risk inputs: covariance not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("mean-risk inputs: eigenvalue computation failed");
  double lam_min = es.eigenvalues().minCoeff();
  double lam_max = std::max(es.eigenvalues().maxCoeff(), 0.0);
  if (lam_min < -1e-10 * std::max(1.0, lam_max))
    throw ValidationError(
        "mean-risk inputs: covariance not positive semidefinite (min "
        "eigenvalue " +
        format_double(lam_min) + ")");
}

Eigen::MatrixXd mask_covariance(const Eigen::MatrixXd& c,
                                const ComponentIndex& index,
                                Strategy strategy) {
  const Eigen::Index n = Eigen::Index(index.size());
  if (c.rows() != n || c.cols() != n)
    throw ValidationError("mask_covariance: matrix does not match the index");
  Eigen::MatrixXd out = c;
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) {
      bool keep = true;
      switch (strategy) {
        case Strategy::Global:
          keep = true;
          break;
        case Strategy::Technology:
          keep = index.at(std::size_t(k)).zone == index.at(std::size_t(l)).zone;
          break;
        case Strategy::Base:
          keep = k == l;
          break;
      }
      if (!keep) out(k, l) = 0.0;
    }
  }
  return out;
}

MeanRiskInputs assemble_inputs(const ComponentIndex& index,
                               const std::vector<HourlySeries>& eta,
                               const HourlySeries& total_demand,
                               Strategy strategy) {
  if (eta.size() != index.size())
    throw ValidationError(
        "assemble_inputs: one capacity-factor series per component required "
        "(got " +
        std::to_string(eta.size()) + " for " + std::to_string(index.size()) +
        " components)");
  if (total_demand.empty()) throw EmptySeries("assemble_inputs: demand");
  std::vector<HourlySeries> ratios;
  ratios.reserve(eta.size());
  Eigen::VectorXd m(Eigen::Index(index.size()));
  for (std::size_t k = 0; k < eta.size(); ++k) {
    if (!aligned(eta[k], total_demand))
      throw AlignmentError(
          "assemble_inputs: capacity-factor series for component " +
          index.at(k).zone.name + "/" + index.at(k).tech.name +
          " is not aligned with the demand series");
    m[Eigen::Index(k)] = sample_mean(eta[k]);
    ratios.push_back(ratio_series(eta[k], total_demand));
  }
  MeanRiskInputs in;
  in.index = index;
  in.m = m;
  in.c = mask_covariance(sample_covariance(ratios), index, strategy);
  in.e_demand_mw = sample_mean(total_demand);
  in.strategy = strategy;
  in.validate();
  return in;
}

double penetration(const Eigen::VectorXd& w, const MeanRiskInputs& inputs) {
  if (w.size() != inputs.m.size())
    throw ValidationError("penetration: w does not match the inputs");
  return w.dot(inputs.m) / inputs.e_demand_mw;
}

double risk(const Eigen::VectorXd& w, const MeanRiskInputs& inputs) {
  if (w.size() != inputs.c.rows())
    throw ValidationError("risk: w does not match the inputs");
  double q = w.dot(inputs.c * w);
  if (q < -1e-12)
    throw NumericalError("risk: quadratic form is negative (" +
                         format_double(q) + ")");
  return std::sqrt(std::max(q, 0.0));
}

std::optional<FrontierPoint> solve_p_min(const MeanRiskInputs& inputs,
                                         double mu_star,
                                         std::optional<double> total_capacity) {
  if (!(mu_star >= 0.0))
    throw ValidationError("solve_p_min: target penetration must be >= 0");
  QpProblem prob;
  prob.q_matrix = 2.0 * inputs.c;
  prob.q_linear = Eigen::VectorXd::Zero(inputs.m.size());
  prob.inequality = {inputs.m, mu_star * inputs.e_demand_mw};
  prob.total = total_capacity;
  QpSolution sol = run_qp(prob);
  if (sol.status != QpStatus::Optimal) return std::nullopt;
  return make_point(sol.w, inputs, mu_star, total_capacity.has_value());
}

std::optional<FrontierPoint> solve_p_max(const MeanRiskInputs& inputs,
                                         double sigma_star,
                                         std::optional<double> total_capacity) {
  if (!(sigma_star >= 0.0))
    throw ValidationError("solve_p_max: risk bound must be >= 0");
  const Eigen::Index n = inputs.m.size();
  const double target = sigma_star * sigma_star;
  const double margin = 1e-10 * (1.0 + target);

  auto variance = [&](const Eigen::VectorXd& w) {
    return w.dot(inputs.c * w);
  };
  auto inner = [&](double nu) {
    QpProblem prob;
    prob.q_matrix = (2.0 * nu) * inputs.c;
    prob.q_linear = -inputs.m;
    prob.total = total_capacity;
    QpSolution sol;
    try {
      sol = run_qp(prob);
    } catch (const NumericalError&) {
      throw NumericalError(
          "solve_p_max: production is unbounded at the risk bound (a "
          "zero-risk productive direction exists and no total capacity is "
          "configured)");
    }
    if (sol.status != QpStatus::Optimal)
      throw NumericalError("solve_p_max: inner subproblem unexpectedly infeasible");
    return sol.w;
  };
  auto finish = [&](const Eigen::VectorXd& w) {
    // The bound may be slack (interior optimum) but never violated.
    double v = variance(w);
    if (v > target + margin)
      throw NumericalError("solve_p_max: risk bound violated by " +
                           format_double(v - target));
    return make_point(w, inputs, 0.0, total_capacity.has_value());
  };

  double nu_lo = 0.0;
  Eigen::VectorXd w_lo;
  bool have_lo = false;

  if (total_capacity) {
    Eigen::VectorXd w0 = inner(0.0);
    if (variance(w0) <= target + margin) return finish(w0);  // ball inactive
    nu_lo = 0.0;
    w_lo = w0;
    have_lo = true;
  } else {
    if (inputs.m.maxCoeff() <= 0.0) {
      // Nothing productive: the origin is optimal at any risk bound.
      return finish(Eigen::VectorXd::Zero(n));
    }
    // Without the total-capacity row the subproblem family is self-similar:
    // substituting w = s/nu shows w*(nu) = s*/nu, where s* solves the nu = 1
    // problem. One solve plus an exact rescale lands on the risk bound, and
    // the zero-risk limit is the origin.
    Eigen::VectorXd s = inner(1.0);
    double var1 = variance(s);
    if (target <= 0.0 || var1 <= 0.0)
      return finish(Eigen::VectorXd::Zero(n));
    return finish(std::sqrt(target / var1) * s);
  }

  // Grow the ball multiplier until its solution respects the risk bound.
  double nu_hi = 1.0;
  Eigen::VectorXd w_hi = inner(nu_hi);
  while (variance(w_hi) > target && nu_hi < 1e30) {
    nu_lo = nu_hi;
    w_lo = w_hi;
    have_lo = true;
    nu_hi *= 2.0;
    w_hi = inner(nu_hi);
  }
  if (variance(w_hi) > target + margin) {
    // Even an (effectively) pure variance minimization stays above the
    // bound: the target risk is below the attainable floor.
    return std::nullopt;
  }

  for (int it = 0; it < 300 && nu_hi - nu_lo > 1e-13 * nu_hi; ++it) {
    double nu_mid = 0.5 * (nu_lo + nu_hi);
    Eigen::VectorXd w_mid = inner(nu_mid);
    if (variance(w_mid) > target) {
      nu_lo = nu_mid;
      w_lo = w_mid;
      have_lo = true;
    } else {
      nu_hi = nu_mid;
      w_hi = w_mid;
    }
  }

  Eigen::VectorXd w = w_hi;
  if (have_lo) {
    // Both bracket solutions are optimal for neighbouring multipliers; the
    // exact boundary point lies on the segment between them where the
    // quadratic form meets the bound.
    Eigen::VectorXd d = w_lo - w_hi;
    double a = d.dot(inputs.c * d);
    double b = 2.0 * w_hi.dot(inputs.c * d);
    double c = variance(w_hi) - target;
    double t = 0.0;
    if (c < 0.0) {
      if (a > 0.0) {
        double disc = b * b - 4.0 * a * c;
        t = (-b + std::sqrt(std::max(disc, 0.0))) / (2.0 * a);
      } else if (b > 0.0) {
        t = -c / b;
      }
      t = std::clamp(t, 0.0, 1.0);
    }
    w = w_hi + t * d;
  }
  return finish(w);
}

ObjectiveBounds objective_bounds(const MeanRiskInputs& inputs,
                                 std::optional<double> total_capacity) {
  ObjectiveBounds b;
  if (total_capacity) {
    double w_total = *total_capacity;
    // Variance over the simplex: the minimum comes from the QP, the maximum
    // sits at a vertex because the quadratic is convex.
    QpProblem prob;
    prob.q_matrix = 2.0 * inputs.c;
    prob.q_linear = Eigen::VectorXd::Zero(inputs.m.size());
    prob.total = w_total;
    QpSolution sol = run_qp(prob);
    if (sol.status != QpStatus::Optimal)
      throw NumericalError("objective_bounds: variance minimization failed");
    b.l_of1 = std::max(sol.w.dot(inputs.c * sol.w), 0.0);
    b.u_of1 = w_total * w_total * inputs.c.diagonal().maxCoeff();
    b.l_of2 = w_total * inputs.m.minCoeff();
    b.u_of2 = w_total * inputs.m.maxCoeff();
  } else {
    b.l_of1 = 0.0;
    b.u_of1 = kInf;
    b.l_of2 = 0.0;
    b.u_of2 = kInf;
  }
  return b;
}

Frontier compute_frontier(const MeanRiskInputs& inputs,
                          const FrontierOptions& options) {
  inputs.validate();
  if (!(options.step > 0.0) || !(options.step < 1.0))
    throw ConfigError("frontier step must lie in (0, 1)");
  if (!(options.mu_max_cap > 0.0))
    throw ConfigError("penetration cap must be positive");
  if (options.total_capacity_mw && !(*options.total_capacity_mw > 0.0))
    throw ConfigError("total capacity must be positive");
  if (options.max_alternations < 1)
    throw ConfigError("alternation cap must be at least 1");

  ObjectiveBounds bounds = objective_bounds(inputs, options.total_capacity_mw);
  double u_of2 = std::isfinite(bounds.u_of2)
                     ? bounds.u_of2
                     : options.mu_max_cap * inputs.e_demand_mw;
  double mu_lo = bounds.l_of2 / inputs.e_demand_mw;
  double mu_hi = u_of2 / inputs.e_demand_mw;

  Frontier frontier;
  frontier.index = inputs.index;
  frontier.strategy = inputs.strategy;
  frontier.total_capacity_mw = options.total_capacity_mw;
  frontier.step = options.step;

  const double fixed_point_tol = options.step / 100.0;
  for (long i = 0;; ++i) {
    double target = mu_lo + double(i) * options.step;
    if (target > mu_hi + 1e-12 * options.step) break;

    auto pmin = solve_p_min(inputs, target, options.total_capacity_mw);
    if (!pmin) continue;  // grid point past the attainable range (rounding)

    double mu_cur = target;
    double sigma_cur = pmin->sigma;
    FrontierPoint emitted = *pmin;
    bool converged = false;
    for (int alt = 0; alt < options.max_alternations; ++alt) {
      auto pmax = solve_p_max(inputs, sigma_cur, options.total_capacity_mw);
      if (!pmax) break;  // defensive: sigma_cur is witnessed feasible
      emitted = *pmax;
      if (emitted.mu > mu_cur + fixed_point_tol) {
        mu_cur = emitted.mu;
        auto refit = solve_p_min(inputs, mu_cur, options.total_capacity_mw);
        if (!refit) break;
        sigma_cur = refit->sigma;
        continue;
      }
      converged = true;
      break;
    }
    emitted.target_mu = target;
    emitted.converged = converged;
    frontier.points.push_back(std::move(emitted));
  }

  // Dominance filter against the unfiltered set: drop any point strictly
  // beaten in both objectives.
  const double tol = options.dominance_tol;
  std::vector<FrontierPoint> kept;
  kept.reserve(frontier.points.size());
  for (const FrontierPoint& p : frontier.points) {
    bool dominated = false;
    for (const FrontierPoint& q : frontier.points) {
      if (q.mu >= p.mu + tol && q.sigma <= p.sigma - tol) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(p);
  }
  frontier.points = std::move(kept);
  return frontier;
}

MeanRiskRatio mean_risk_ratio(const Frontier& frontier) {
  if (frontier.points.empty())
    throw DomainError("mean-risk ratio: empty frontier");
  double num = 0.0, den = 0.0;
  for (const FrontierPoint& p : frontier.points) {
    num += p.mu * p.sigma;
    den += p.sigma * p.sigma;
  }
  if (den <= 0.0)
    throw DomainError("mean-risk ratio: every frontier point has zero risk");
  MeanRiskRatio r;
  r.alpha = num / den;
  if (!(r.alpha > 0.0))
    throw DomainError("mean-risk ratio: slope is not positive");
  for (const FrontierPoint& p : frontier.points) {
    if (p.sigma <= 0.0) continue;
    double ratio = p.mu / p.sigma;
    r.max_rel_deviation =
        std::max(r.max_rel_deviation, std::abs(ratio - r.alpha) / r.alpha);
  }
  return r;
}

void save_frontier(const Frontier& frontier,
                   const std::filesystem::path& path) {
  CsvWriter out(path);
  out.comment("step=" + format_double(frontier.step));
  out.comment("total_capacity_mw=" +
              (frontier.total_capacity_mw
                   ? format_double(*frontier.total_capacity_mw)
                   : std::string("none")));
  std::string non_converged;
  for (const FrontierPoint& p : frontier.points) {
    if (p.converged) continue;
    if (!non_converged.empty()) non_converged += ';';
    non_converged += format_double(p.target_mu);
  }
  if (!non_converged.empty()) out.comment("non_converged=" + non_converged);

  std::vector<std::string> header = {"strategy", "target_mu", "mu", "sigma",
                                     "active_total_constraint"};
  for (const Component& comp : frontier.index.items())
    header.push_back("w_" + comp.zone.name + "_" + comp.tech.name);
  out.row(header);

  for (const FrontierPoint& p : frontier.points) {
    std::vector<std::string> row = {strategy_name(frontier.strategy),
                                    format_double(p.target_mu),
                                    format_double(p.mu),
                                    format_double(p.sigma),
                                    p.active_total_constraint ? "1" : "0"};
    if (std::size_t(p.w.size()) != frontier.index.size())
      throw ValidationError("save_frontier: point does not match the index");
    for (Eigen::Index k = 0; k < p.w.size(); ++k)
      row.push_back(format_double(p.w[k]));
    out.row(row);
  }
  out.commit();
}

Frontier load_frontier(const std::filesystem::path& path) {
  CsvReader in(path);
  Frontier frontier;
  std::set<std::string> non_converged;
  for (const std::string& raw : in.comment_lines()) {
    std::string line = raw;
    if (!line.empty() && line.front() == '#') line.erase(0, 1);
    if (!line.empty() && line.front() == ' ') line.erase(0, 1);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    if (key == "step") {
      frontier.step = parse_double(value, path.string() + ": step");
    } else if (key == "total_capacity_mw") {
      if (value != "none")
        frontier.total_capacity_mw =
            parse_double(value, path.string() + ": total_capacity_mw");
    } else if (key == "non_converged") {
      std::size_t pos = 0;
      while (pos <= value.size()) {
        std::size_t semi = value.find(';', pos);
        if (semi == std::string::npos) semi = value.size();
        if (semi > pos) non_converged.insert(value.substr(pos, semi - pos));
        pos = semi + 1;
      }
    }
  }

  const std::vector<std::string>& header = in.header();
  const std::vector<std::string> fixed = {"strategy", "target_mu", "mu",
                                          "sigma", "active_total_constraint"};
  if (header.size() < fixed.size() + 1)
    throw ParseError(path.string() + ": frontier header too short");
  for (std::size_t i = 0; i < fixed.size(); ++i)
    if (header[i] != fixed[i])
      throw ParseError(path.string() + ": expected column '" + fixed[i] +
                       "', found '" + header[i] + "'");
  std::vector<Component> comps;
  for (std::size_t i = fixed.size(); i < header.size(); ++i) {
    const std::string& col = header[i];
    if (col.rfind("w_", 0) != 0)
      throw ParseError(path.string() + ": capacity column '" + col +
                       "' must start with 'w_'");
    std::string rest = col.substr(2);
    auto underscore = rest.rfind('_');
    if (underscore == std::string::npos || underscore == 0 ||
        underscore + 1 >= rest.size())
      throw ParseError(path.string() + ": capacity column '" + col +
                       "' must look like w_<zone>_<tech>");
    comps.push_back(Component{ZoneId{rest.substr(0, underscore)},
                              TechId{rest.substr(underscore + 1)}});
  }
  frontier.index = ComponentIndex(std::move(comps));

  std::vector<std::string> fields;
  bool have_strategy = false;
  while (in.next_row(fields)) {
    FrontierPoint p;
    Strategy s = parse_strategy(fields[0]);
    if (!have_strategy) {
      frontier.strategy = s;
      have_strategy = true;
    } else if (s != frontier.strategy) {
      throw ParseError(in.location() + ": mixed strategies in one frontier");
    }
    p.target_mu = parse_double(fields[1], in.location() + ": target_mu");
    p.mu = parse_double(fields[2], in.location() + ": mu");
    p.sigma = parse_double(fields[3], in.location() + ": sigma");
    if (fields[4] == "1")
      p.active_total_constraint = true;
    else if (fields[4] == "0")
      p.active_total_constraint = false;
    else
      throw ParseError(in.location() +
                       ": active_total_constraint must be 0 or 1");
    p.w.resize(Eigen::Index(frontier.index.size()));
    for (std::size_t k = 0; k < frontier.index.size(); ++k)
      p.w[Eigen::Index(k)] =
          parse_double(fields[5 + k], in.location() + ": " + header[5 + k]);
    p.converged = non_converged.count(fields[1]) == 0;
    frontier.points.push_back(std::move(p));
  }
  return frontier;
}

}  // namespace vremix
