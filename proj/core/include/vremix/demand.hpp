#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vremix/series.hpp"
#include "vremix/time.hpp"

namespace vremix {

/// Per-zone temperature response: rows = day types (Work, Sat, Off),
/// columns = {heating slope MW/degC, cooling slope MW/degC, level MW}.
struct ZoneDemandCoeffs {
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  double noise_std_mw = 0.0;      // posterior-predictive residual scale
  double demand_floor_mw = 0.0;   // 1% of the zone's mean observed demand
  double ridge_alpha = 0.0;       // fitted weight precision
  double ridge_beta = 0.0;        // fitted noise precision
};

/// Fitted demand model: shared thresholds and hour-of-day cycles plus
/// per-zone response coefficients.
struct DemandModelParams {
  double t_heat_c = 0.0;  // heating threshold T_H
  double t_cool_c = 0.0;  // cooling threshold T_C, >= T_H
  Eigen::Matrix<double, 3, 24> cycles =
      Eigen::Matrix<double, 3, 24>::Ones();  // mean-1 profiles per day type
  std::vector<ZoneId> zones;
  std::map<std::string, ZoneDemandCoeffs> coeffs;

  void validate() const;

  /// Two-file bundle: a coefficients table (thresholds carried as comment
  /// lines) and a `day_type,hour,factor` cycles table.
  void save(const std::filesystem::path& coeffs_path,
            const std::filesystem::path& cycles_path) const;
  static DemandModelParams load(const std::filesystem::path& coeffs_path,
                                const std::filesystem::path& cycles_path);
};

/// Grid-search bounds and regression settings.
struct DemandFitOptions {
  double t_heat_min_c = 5.0;
  double t_heat_max_c = 15.0;
  double t_cool_min_c = 10.0;
  double t_cool_max_c = 20.0;
  double grid_step_c = 0.5;
  int cv_blocks = 7;
  double ridge_tol = 1e-8;
  int ridge_max_iter = 300;
};

/// Mean out-of-block R-squared of one threshold pair, averaged over zones.
struct ThresholdScore {
  double t_heat_c = 0.0;
  double t_cool_c = 0.0;
  double score = 0.0;
};

/// Fit diagnostics: the cross-validation surface and per-zone R-squared.
struct DemandFitReport {
  double t_heat_c = 0.0;
  double t_cool_c = 0.0;
  std::vector<ThresholdScore> grid;
  std::map<std::string, double> cv_r2;         // per zone, chosen thresholds
  std::map<std::string, double> in_sample_r2;  // per zone, full-period fit
  std::size_t days_used = 0;

  std::string to_text() const;
};

/// Hour-of-day profile per day type from hourly total demand: the average
/// demand at each hour across all days of the type, divided by its own mean.
/// Requires at least one full day per day type (FitError otherwise).
Eigen::Matrix<double, 3, 24> composite_cycles(const HourlySeries& total_demand,
                                              const HolidayCalendar& holidays);

/// One 9-column row per day: (T_H - T)+, (T - T_C)+, and 1, placed in the
/// column block 3*day_type + {0,1,2}, zeros elsewhere.
Eigen::MatrixXd design_matrix(const DailySeries& temperature_c,
                              const HolidayCalendar& holidays, double t_heat_c,
                              double t_cool_c);

/// Ridge regression with both precisions chosen by marginal-likelihood
/// fixed-point iteration.
struct RidgeFit {
  Eigen::VectorXd coeffs;
  double alpha = 0.0;  // weight precision
  double beta = 0.0;   // noise precision
  int iterations = 0;
};

RidgeFit bayesian_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                        double tol = 1e-8, int max_iter = 300);

/// Daily demand level for one zone: a_H (T_H - T)+ + a_C (T - T_C)+ + a_0,
/// with the day type selecting the coefficient row.
double demand_daily_level(const Eigen::Matrix3d& a, DayType day_type,
                          double temperature_c, double t_heat_c,
                          double t_cool_c);

/// Fits thresholds by grid search over cross-validated out-of-block
/// R-squared, then per-zone ridge coefficients on the full overlap of the
/// demand observations and temperatures. Series are intersected on their
/// common day range; FitError when the overlap cannot fill cv_blocks blocks.
std::pair<DemandModelParams, DemandFitReport> fit_demand_model(
    const std::vector<ZoneId>& zones,
    const std::map<std::string, HourlySeries>& demand_by_zone,
    const std::map<std::string, DailySeries>& temperature_by_zone,
    const HolidayCalendar& holidays, const DemandFitOptions& options);

/// Hourly zonal demand over the temperature record: daily level times the
/// day-type cycle, plus (sampled mode) independent Gaussian noise per hour,
/// floored at the zone's demand floor. Draws are keyed by (seed, zone, day,
/// hour), so restricting the period does not change overlapping values.
std::map<std::string, HourlySeries> predict_demand(
    const DemandModelParams& params,
    const std::map<std::string, DailySeries>& temperature_by_zone,
    const HolidayCalendar& holidays, bool sampled, std::uint64_t seed);

}  // namespace vremix
