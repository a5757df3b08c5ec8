#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "vremix/optimizer.hpp"
#include "vremix/series.hpp"

namespace vremix {

/// Summary of one capacity mix: composition, mean/risk, and how often the
/// combined production under- or overshoots the demand thresholds.
struct MixDiagnostics {
  double pv_fraction = 0.0;    // share of PV capacity in total capacity
  double shortage_freq = 0.0;  // fraction of hours in shortage
  double saturation_freq = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
};

/// Shortage at t iff P(t) < D(t) - conv_share * max_t D(t) (the dispatchable
/// fleet covers conv_share of peak demand); saturation at t iff
/// P(t) > sat_share * D(t). Returns (shortage, saturation) frequencies.
std::pair<double, double> shortage_saturation(const HourlySeries& production,
                                              const HourlySeries& demand,
                                              double conv_share = 0.8,
                                              double sat_share = 0.4);

/// mu/sigma from the mean-risk inputs plus threshold frequencies from the
/// hourly series. `eta` holds one capacity-factor series per component in
/// index order; production is sum_k w_k * eta_k(t).
MixDiagnostics evaluate_mix(const Eigen::VectorXd& w,
                            const MeanRiskInputs& inputs,
                            const std::vector<HourlySeries>& eta,
                            const HourlySeries& total_demand,
                            double conv_share = 0.8, double sat_share = 0.4);

/// Named frontier points: the minimum-risk mix, the best mean-risk-ratio
/// mix, and (when a reference risk is given) the highest penetration not
/// exceeding that risk.
struct SpecialPoints {
  FrontierPoint min_risk;
  FrontierPoint max_ratio;
  std::optional<FrontierPoint> high_penetration;
};

/// Throws NotFoundError when the frontier has no positive-risk point (so no
/// ratio is defined) or when reference_risk lies below every point.
SpecialPoints special_points(const Frontier& frontier,
                             std::optional<double> reference_risk);

/// Centered running mean with edge truncation: index i averages the samples
/// in [i - (window-1)/2, i + window/2] clipped to the series.
HourlySeries running_mean(const HourlySeries& s, std::size_t window);

/// Share of variance per time scale, each in percent of the sum of the
/// three component variances (so they add to 100 exactly).
struct VarianceBands {
  double interannual_pct = 0.0;
  double seasonal_pct = 0.0;
  double intraday_pct = 0.0;
  bool degenerate = false;  // constant series: all components zero
};

/// Decomposes the series with two boxcar filters: interannual = running
/// year-mean, seasonal = running day-mean minus year-mean, intraday =
/// series minus day-mean. Requires at least 2 * year_window_days of data.
VarianceBands variance_bands(const HourlySeries& series,
                             int year_window_days = 365,
                             int day_window_hours = 24);

}  // namespace vremix
