#include "vremix/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vremix/csv.hpp"
#include "vremix/errors.hpp"
#include "vremix/time.hpp"

namespace vremix {

namespace {

double variance_of(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= double(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / double(v.size());
}

}  // namespace

std::pair<double, double> shortage_saturation(const HourlySeries& production,
                                              const HourlySeries& demand,
                                              double conv_share,
                                              double sat_share) {
  if (!aligned(production, demand))
    throw AlignmentError(
        "shortage_saturation: production and demand are not aligned");
  if (demand.empty()) throw EmptySeries("shortage_saturation: demand");
  if (!(conv_share > 0.0) || !(conv_share < 1.0) || !(sat_share > 0.0) ||
      !(sat_share < 1.0))
    throw ConfigError("shortage/saturation shares must lie in (0, 1)");

  double max_d = 0.0;
  for (std::size_t t = 0; t < demand.size(); ++t) {
    if (!(demand[t] > 0.0))
      throw DomainError("shortage_saturation: demand is not positive at " +
                        format_utc_hour(demand.time_at(t)));
    max_d = std::max(max_d, demand[t]);
  }
  double conventional_cap = conv_share * max_d;

  std::size_t shortage = 0, saturation = 0;
  for (std::size_t t = 0; t < demand.size(); ++t) {
    if (production[t] < demand[t] - conventional_cap) ++shortage;
    if (production[t] > sat_share * demand[t]) ++saturation;
  }
  double n = double(demand.size());
  return {double(shortage) / n, double(saturation) / n};
}

MixDiagnostics evaluate_mix(const Eigen::VectorXd& w,
                            const MeanRiskInputs& inputs,
                            const std::vector<HourlySeries>& eta,
                            const HourlySeries& total_demand,
                            double conv_share, double sat_share) {
  if (w.size() != Eigen::Index(inputs.index.size()))
    throw ValidationError("evaluate_mix: w does not match the inputs");
  if (w.minCoeff() < 0.0)
    throw ValidationError("evaluate_mix: capacities must be nonnegative");
  if (eta.size() != inputs.index.size())
    throw ValidationError(
        "evaluate_mix: one capacity-factor series per component required");

  MixDiagnostics d;
  d.mu = penetration(w, inputs);
  d.sigma = risk(w, inputs);

  double total = w.sum();
  if (total > 0.0) {
    double pv = 0.0;
    for (std::size_t k = 0; k < inputs.index.size(); ++k)
      if (inputs.index.at(k).tech.name == "pv") pv += w[Eigen::Index(k)];
    d.pv_fraction = pv / total;
  }

  HourlySeries production;
  production.start = total_demand.start;
  production.values.assign(total_demand.size(), 0.0);
  for (std::size_t k = 0; k < eta.size(); ++k) {
    if (!aligned(eta[k], total_demand))
      throw AlignmentError("evaluate_mix: capacity-factor series for " +
                           inputs.index.at(k).zone.name + "/" +
                           inputs.index.at(k).tech.name +
                           " is not aligned with the demand series");
    double wk = w[Eigen::Index(k)];
    for (std::size_t t = 0; t < production.values.size(); ++t)
      production.values[t] += wk * eta[k][t];
  }

  auto [shortage, saturation] =
      shortage_saturation(production, total_demand, conv_share, sat_share);
  d.shortage_freq = shortage;
  d.saturation_freq = saturation;
  return d;
}

SpecialPoints special_points(const Frontier& frontier,
                             std::optional<double> reference_risk) {
  if (frontier.points.empty())
    throw ValidationError("special_points: empty frontier");

  SpecialPoints sp;
  const FrontierPoint* min_risk = nullptr;
  for (const FrontierPoint& p : frontier.points)
    if (!min_risk || p.sigma < min_risk->sigma) min_risk = &p;
  sp.min_risk = *min_risk;

  const FrontierPoint* max_ratio = nullptr;
  double best_ratio = -1.0;
  for (const FrontierPoint& p : frontier.points) {
    if (!(p.sigma > 0.0)) continue;
    double ratio = p.mu / p.sigma;
    if (!max_ratio || ratio > best_ratio ||
        (ratio == best_ratio && p.sigma < max_ratio->sigma)) {
      max_ratio = &p;
      best_ratio = ratio;
    }
  }
  if (!max_ratio)
    throw NotFoundError(
        "special_points: no frontier point with positive risk (mean-risk "
        "ratio undefined)");
  sp.max_ratio = *max_ratio;

  if (reference_risk) {
    const FrontierPoint* best = nullptr;
    for (const FrontierPoint& p : frontier.points) {
      if (p.sigma > *reference_risk) continue;
      if (!best || p.mu > best->mu ||
          (p.mu == best->mu && p.sigma < best->sigma))
        best = &p;
    }
    if (!best)
      throw NotFoundError(
          "special_points: no frontier point at or below the reference risk " +
          format_double(*reference_risk));
    sp.high_penetration = *best;
  }
  return sp;
}

HourlySeries running_mean(const HourlySeries& s, std::size_t window) {
  if (s.empty()) throw EmptySeries("running_mean");
  if (window == 0) throw ConfigError("running_mean: window must be >= 1");
  const std::size_t n = s.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + s[i];

  HourlySeries out;
  out.start = s.start;
  out.values.resize(n);
  const std::size_t back = (window - 1) / 2;
  const std::size_t fwd = window / 2;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = i > back ? i - back : 0;
    std::size_t hi = std::min(i + fwd, n - 1);
    out.values[i] = (prefix[hi + 1] - prefix[lo]) / double(hi - lo + 1);
  }
  return out;
}

VarianceBands variance_bands(const HourlySeries& series, int year_window_days,
                             int day_window_hours) {
  if (year_window_days < 1 || day_window_hours < 1)
    throw ConfigError("variance_bands: windows must be >= 1");
  const std::size_t year_window = std::size_t(year_window_days) * 24;
  const std::size_t day_window = std::size_t(day_window_hours);
  if (series.size() < 2 * year_window)
    throw InsufficientData(
        "variance_bands: need at least " + std::to_string(2 * year_window) +
        " hours (twice the year window), got " +
        std::to_string(series.size()));
  validate_finite(series, "variance_bands input");

  HourlySeries low = running_mean(series, year_window);
  HourlySeries day = running_mean(series, day_window);

  const std::size_t n = series.size();
  std::vector<double> band(n), high(n);
  for (std::size_t i = 0; i < n; ++i) {
    band[i] = day.values[i] - low.values[i];
    high[i] = series[i] - day.values[i];
  }

  double v_low = variance_of(low.values);
  double v_band = variance_of(band);
  double v_high = variance_of(high);
  double total = v_low + v_band + v_high;

  VarianceBands out;
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += series[i];
  mean /= double(n);
  if (!(total > 1e-20 * (1.0 + mean * mean))) {
    out.degenerate = true;
    return out;
  }
  out.interannual_pct = v_low / total * 100.0;
  out.seasonal_pct = v_band / total * 100.0;
  out.intraday_pct = v_high / total * 100.0;
  return out;
}

}  // namespace vremix
