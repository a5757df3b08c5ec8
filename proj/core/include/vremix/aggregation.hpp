#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "vremix/ingest.hpp"
#include "vremix/series.hpp"
#include "vremix/wind.hpp"

namespace vremix {

/// Capacity-weighted zonal capacity factor:
/// CF_zone(t) = sum_{g in zone} P_g(t) / sum_{g in zone} nominal_g.
/// `nominal_w` holds one nominal power (W) per power column. Every power
/// column must exist in the metadata; a configured zone without gridpoints
/// raises ConfigError.
std::map<std::string, HourlySeries> aggregate_zones(
    const GridPower& power, const GridMetadata& metadata,
    const std::vector<double>& nominal_w, const std::vector<ZoneId>& zones);

/// Mean-matching correction: the series is scaled by target/mean, then
/// values above 1 are clipped to 1 (counted).
struct BiasCorrection {
  HourlySeries corrected;
  double factor = 1.0;
  double target = 0.0;
  std::size_t clipped = 0;
};

/// Throws DomainError when the series mean is not positive; target must lie
/// in (0, 1).
BiasCorrection bias_correct(const HourlySeries& cf, double target_mean);

/// Per-zone daily mean temperature in Celsius from a gridded Kelvin series
/// (unweighted mean over the zone's gridpoints; hourly inputs are averaged
/// to days first).
std::map<std::string, DailySeries> zone_daily_temperature_c(
    const GridSeries& temperature, const GridMetadata& metadata,
    const std::vector<ZoneId>& zones);

}  // namespace vremix
