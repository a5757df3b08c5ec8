#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vremix/series.hpp"
#include "vremix/time.hpp"

namespace vremix {

/// One cell of the climate grid, assigned to exactly one zone.
struct GridpointInfo {
  std::string id;
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]
  ZoneId zone;
};

struct GridMetadata {
  std::vector<GridpointInfo> points;

  /// nullptr when the id is unknown.
  const GridpointInfo* find(const std::string& id) const;
};

/// Climate variables accepted on the gridded inputs, each with fixed units.
enum class ClimateVariable {
  WindSpeed10m,         // m/s, >= 0
  WindSpeedComponentU,  // m/s
  WindSpeedComponentV,  // m/s
  Temperature2m,        // K, > 0
  SurfacePressure,      // Pa, > 0
  SpecificHumidity,     // kg/kg, [0, 0.1)
  SurfaceIrradiance,    // W/m^2, >= 0
};

const char* climate_variable_name(ClimateVariable v);

/// Dense per-gridpoint series on one gap-free time axis. Daily series
/// anchor at midnight UTC of their first date.
struct GridSeries {
  ClimateVariable variable = ClimateVariable::WindSpeed10m;
  Sampling sampling = Sampling::Daily;
  UtcHour start;
  std::vector<std::string> gridpoint_ids;
  Eigen::MatrixXd values;  // rows = time steps, cols = gridpoints

  std::size_t steps() const { return std::size_t(values.rows()); }
  Date start_date() const { return date_of(start); }
};

/// CSV `gridpoint_id,lat,lon,zone`. Ids must be unique, coordinates in
/// range, zones members of the configured list.
GridMetadata load_grid_metadata(const std::filesystem::path& path,
                                const std::vector<ZoneId>& zones);
void save_grid_metadata(const GridMetadata& meta,
                        const std::filesystem::path& path);

/// CSV `time,<gridpoint_id>...` with ISO-8601 stamps (date for Daily,
/// date+hour for Hourly). The axis must be consecutive; a hole raises
/// GapError listing the missing stamps.
GridSeries load_grid_series(const std::filesystem::path& path,
                            ClimateVariable variable, Sampling sampling);
void save_grid_series(const GridSeries& series,
                      const std::filesystem::path& path);

/// sqrt(u^2 + v^2) pointwise; the components must share axis and gridpoints.
GridSeries combine_wind_components(const GridSeries& u, const GridSeries& v);

/// CSV `time,zone,demand_mw`, strictly positive demand, one gap-free hourly
/// axis shared by all configured zones.
std::map<std::string, HourlySeries> load_zonal_demand(
    const std::filesystem::path& path, const std::vector<ZoneId>& zones);
void save_zonal_demand(const std::map<std::string, HourlySeries>& demand,
                       const std::filesystem::path& path);

/// CSV `time,zone,technology,cf` with cf in [0, 1]; every configured
/// (zone, technology) pair must be present on one shared hourly axis.
std::map<Component, HourlySeries> load_zonal_cf(
    const std::filesystem::path& path, const std::vector<ZoneId>& zones,
    const std::vector<TechId>& technologies);
void save_zonal_cf(const std::map<Component, HourlySeries>& cf,
                   const std::filesystem::path& path);

/// CSV `zone,technology,mean_cf` with mean_cf in (0, 1), exactly one row
/// per configured (zone, technology) pair.
std::map<Component, double> load_cf_targets(
    const std::filesystem::path& path, const std::vector<ZoneId>& zones,
    const std::vector<TechId>& technologies);

/// CSV `zone,technology,capacity_mw` with capacity >= 0, exactly one row
/// per configured (zone, technology) pair.
std::map<Component, double> load_capacities(
    const std::filesystem::path& path, const std::vector<ZoneId>& zones,
    const std::vector<TechId>& technologies);

/// CSV `date`, one ISO date per row.
HolidayCalendar load_holidays(const std::filesystem::path& path);

/// Subrange [from 00:00, to 23:00], both inclusive. RangeError when the
/// series does not cover the requested period.
HourlySeries restrict_period(const HourlySeries& s, const Date& from,
                             const Date& to);

}  // namespace vremix
