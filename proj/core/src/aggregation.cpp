#include "vremix/aggregation.hpp"

#include <algorithm>
#include <cmath>

#include "vremix/csv.hpp"
#include "vremix/errors.hpp"
#include "vremix/stats.hpp"

namespace vremix {

std::map<std::string, HourlySeries> aggregate_zones(
    const GridPower& power, const GridMetadata& metadata,
    const std::vector<double>& nominal_w, const std::vector<ZoneId>& zones) {
  if (power.gridpoint_ids.empty() || power.power_w.rows() == 0)
    throw EmptySeries("aggregate_zones: power");
  if (nominal_w.size() != power.gridpoint_ids.size())
    throw ValidationError(
        "aggregate_zones: one nominal power per gridpoint column required");
  if (zones.empty()) throw ConfigError("aggregate_zones: no zones configured");

  // Column -> zone lookup, validating nominal powers and zone membership.
  std::vector<const ZoneId*> column_zone(power.gridpoint_ids.size());
  for (std::size_t g = 0; g < power.gridpoint_ids.size(); ++g) {
    if (!(nominal_w[g] > 0.0))
      throw ValidationError("aggregate_zones: nominal power for gridpoint '" +
                            power.gridpoint_ids[g] + "' must be positive");
    const GridpointInfo* info = metadata.find(power.gridpoint_ids[g]);
    if (!info)
      throw ValidationError("aggregate_zones: gridpoint '" +
                            power.gridpoint_ids[g] +
                            "' is missing from the grid metadata");
    column_zone[g] = &info->zone;
  }

  std::map<std::string, HourlySeries> out;
  const Eigen::Index hours = power.power_w.rows();
  for (const ZoneId& zone : zones) {
    std::vector<std::size_t> cols;
    double zone_nominal = 0.0;
    for (std::size_t g = 0; g < power.gridpoint_ids.size(); ++g) {
      if (*column_zone[g] == zone) {
        cols.push_back(g);
        zone_nominal += nominal_w[g];
      }
    }
    if (cols.empty())
      throw ConfigError("aggregate_zones: zone " + zone.name +
                        " has no gridpoints");
    HourlySeries s;
    s.start = power.start;
    s.values.resize(std::size_t(hours));
    for (Eigen::Index t = 0; t < hours; ++t) {
      double sum = 0.0;
      for (std::size_t g : cols) sum += power.power_w(t, Eigen::Index(g));
      s.values[std::size_t(t)] = sum / zone_nominal;
    }
    validate_finite(s, "aggregate_zones: zone " + zone.name);
    out.emplace(zone.name, std::move(s));
  }
  return out;
}

BiasCorrection bias_correct(const HourlySeries& cf, double target_mean) {
  if (cf.empty()) throw EmptySeries("bias_correct");
  if (!(target_mean > 0.0) || !(target_mean < 1.0))
    throw ValidationError("bias_correct: target mean must lie in (0, 1)");
  double mean = sample_mean(cf);
  if (!(mean > 0.0))
    throw DomainError("bias_correct: series mean " + format_double(mean) +
                      " is not positive");
  BiasCorrection out;
  out.factor = target_mean / mean;
  out.target = target_mean;
  out.corrected.start = cf.start;
  out.corrected.values.resize(cf.size());
  for (std::size_t t = 0; t < cf.size(); ++t) {
    double v = cf[t] * out.factor;
    if (v > 1.0) {
      v = 1.0;
      ++out.clipped;
    }
    out.corrected.values[t] = v;
  }
  return out;
}

std::map<std::string, DailySeries> zone_daily_temperature_c(
    const GridSeries& temperature, const GridMetadata& metadata,
    const std::vector<ZoneId>& zones) {
  if (temperature.variable != ClimateVariable::Temperature2m)
    throw ValidationError(
        "zone_daily_temperature_c: expected a temperature series");
  if (temperature.steps() == 0)
    throw EmptySeries("zone_daily_temperature_c: temperature");
  if (temperature.sampling == Sampling::Hourly &&
      (hour_of_day(temperature.start) != 0 ||
       temperature.values.rows() % 24 != 0))
    throw ValidationError(
        "zone_daily_temperature_c: hourly temperature must start at hour 00 "
        "and span whole days");

  std::vector<const ZoneId*> column_zone(temperature.gridpoint_ids.size());
  for (std::size_t g = 0; g < temperature.gridpoint_ids.size(); ++g) {
    const GridpointInfo* info = metadata.find(temperature.gridpoint_ids[g]);
    if (!info)
      throw ValidationError("zone_daily_temperature_c: gridpoint '" +
                            temperature.gridpoint_ids[g] +
                            "' is missing from the grid metadata");
    column_zone[g] = &info->zone;
  }

  const Eigen::Index days = temperature.sampling == Sampling::Hourly
                                ? temperature.values.rows() / 24
                                : temperature.values.rows();
  std::map<std::string, DailySeries> out;
  for (const ZoneId& zone : zones) {
    std::vector<std::size_t> cols;
    for (std::size_t g = 0; g < temperature.gridpoint_ids.size(); ++g)
      if (*column_zone[g] == zone) cols.push_back(g);
    if (cols.empty())
      throw ConfigError("zone_daily_temperature_c: zone " + zone.name +
                        " has no gridpoints");
    DailySeries s;
    s.start = temperature.start_date();
    s.values.resize(std::size_t(days));
    for (Eigen::Index d = 0; d < days; ++d) {
      double sum = 0.0;
      int n = 0;
      if (temperature.sampling == Sampling::Hourly) {
        for (Eigen::Index h = d * 24; h < (d + 1) * 24; ++h)
          for (std::size_t g : cols) {
            sum += temperature.values(h, Eigen::Index(g));
            ++n;
          }
      } else {
        for (std::size_t g : cols) {
          sum += temperature.values(d, Eigen::Index(g));
          ++n;
        }
      }
      s.values[std::size_t(d)] = sum / double(n) - 273.15;
    }
    out.emplace(zone.name, std::move(s));
  }
  return out;
}

}  // namespace vremix
