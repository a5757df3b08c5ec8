#include "vremix/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "vremix/csv.hpp"
#include "vremix/errors.hpp"

namespace vremix {

namespace {

void require_header(const CsvReader& in,
                    const std::vector<std::string>& expected) {
  if (in.header() != expected) {
    std::string want;
    for (const std::string& h : expected) {
      if (!want.empty()) want += ',';
      want += h;
    }
    std::string got;
    for (const std::string& h : in.header()) {
      if (!got.empty()) got += ',';
      got += h;
    }
    throw ParseError(in.path().string() + ": expected header '" + want +
                     "', found '" + got + "'");
  }
}

bool known_zone(const std::vector<ZoneId>& zones, const std::string& name) {
  return std::any_of(zones.begin(), zones.end(),
                     [&](const ZoneId& z) { return z.name == name; });
}

bool known_tech(const std::vector<TechId>& techs, const std::string& name) {
  return std::any_of(techs.begin(), techs.end(),
                     [&](const TechId& t) { return t.name == name; });
}

[[noreturn]] void report_gap(const std::filesystem::path& path,
                             UtcHour prev_next, UtcHour found, Sampling s) {
  std::int64_t step = s == Sampling::Hourly ? 1 : 24;
  std::int64_t missing = (found - prev_next) / step;
  std::string stamps;
  std::int64_t listed = std::min<std::int64_t>(missing, 5);
  for (std::int64_t i = 0; i < listed; ++i) {
    if (!stamps.empty()) stamps += ", ";
    UtcHour h = prev_next + i * step;
    stamps += s == Sampling::Hourly ? format_utc_hour(h)
                                    : format_date(date_of(h));
  }
  if (missing > listed)
    stamps += ", and " + std::to_string(missing - listed) + " more";
  throw GapError(path.string() + ": time axis has a hole; missing " + stamps);
}

void check_climate_value(ClimateVariable v, double x,
                         const std::string& where) {
  if (!std::isfinite(x))
    throw ValidationError(where + ": non-finite value");
  switch (v) {
    case ClimateVariable::WindSpeed10m:
      if (x < 0.0) throw ValidationError(where + ": wind speed must be >= 0");
      break;
    case ClimateVariable::WindSpeedComponentU:
    case ClimateVariable::WindSpeedComponentV:
      break;
    case ClimateVariable::Temperature2m:
      if (!(x > 0.0))
        throw ValidationError(where + ": temperature (K) must be > 0");
      break;
    case ClimateVariable::SurfacePressure:
      if (!(x > 0.0)) throw ValidationError(where + ": pressure must be > 0");
      break;
    case ClimateVariable::SpecificHumidity:
      if (x < 0.0 || x >= 0.1)
        throw ValidationError(where +
                              ": specific humidity must lie in [0, 0.1)");
      break;
    case ClimateVariable::SurfaceIrradiance:
      if (x < 0.0)
        throw ValidationError(where + ": irradiance must be >= 0");
      break;
  }
}

}  // namespace

const GridpointInfo* GridMetadata::find(const std::string& id) const {
  for (const GridpointInfo& p : points)
    if (p.id == id) return &p;
  return nullptr;
}

const char* climate_variable_name(ClimateVariable v) {
  switch (v) {
    case ClimateVariable::WindSpeed10m: return "wind_speed_10m";
    case ClimateVariable::WindSpeedComponentU: return "wind_u_10m";
    case ClimateVariable::WindSpeedComponentV: return "wind_v_10m";
    case ClimateVariable::Temperature2m: return "temperature_2m";
    case ClimateVariable::SurfacePressure: return "surface_pressure";
    case ClimateVariable::SpecificHumidity: return "specific_humidity";
    case ClimateVariable::SurfaceIrradiance: return "surface_irradiance";
  }
  return "unknown";
}

GridMetadata load_grid_metadata(const std::filesystem::path& path,
                                const std::vector<ZoneId>& zones) {
  CsvReader in(path);
  require_header(in, {"gridpoint_id", "lat", "lon", "zone"});
  GridMetadata meta;
  std::unordered_set<std::string> seen;
  std::vector<std::string> fields;
  while (in.next_row(fields)) {
    GridpointInfo p;
    p.id = fields[0];
    if (p.id.empty())
      throw ValidationError(in.location() + ": empty gridpoint_id");
    if (!seen.insert(p.id).second)
      throw ValidationError(in.location() + ": duplicate gridpoint_id '" +
                            p.id + "'");
    p.lat = parse_double(fields[1], in.location() + ": lat");
    p.lon = parse_double(fields[2], in.location() + ": lon");
    if (p.lat < -90.0 || p.lat > 90.0)
      throw ValidationError(in.location() + ": lat out of range [-90, 90]");
    if (p.lon < -180.0 || p.lon > 180.0)
      throw ValidationError(in.location() + ": lon out of range [-180, 180]");
    if (!known_zone(zones, fields[3]))
      throw ValidationError(in.location() + ": unknown zone '" + fields[3] +
                            "'");
    p.zone = ZoneId{fields[3]};
    meta.points.push_back(std::move(p));
  }
  if (meta.points.empty())
    throw InsufficientData(path.string() + ": no gridpoints");
  return meta;
}

void save_grid_metadata(const GridMetadata& meta,
                        const std::filesystem::path& path) {
  CsvWriter out(path);
  out.row({"gridpoint_id", "lat", "lon", "zone"});
  for (const GridpointInfo& p : meta.points)
    out.row({p.id, format_double(p.lat), format_double(p.lon), p.zone.name});
  out.commit();
}

GridSeries load_grid_series(const std::filesystem::path& path,
                            ClimateVariable variable, Sampling sampling) {
  CsvReader in(path);
  const std::vector<std::string>& header = in.header();
  if (header.size() < 2 || header[0] != "time")
    throw ParseError(path.string() +
                     ": expected header 'time,<gridpoint ids>'");

  GridSeries series;
  series.variable = variable;
  series.sampling = sampling;
  series.gridpoint_ids.assign(header.begin() + 1, header.end());
  std::unordered_set<std::string> seen;
  for (const std::string& id : series.gridpoint_ids) {
    if (id.empty())
      throw ParseError(path.string() + ": empty gridpoint id in header");
    if (!seen.insert(id).second)
      throw ParseError(path.string() + ": duplicate gridpoint id '" + id +
                       "' in header");
  }

  const std::int64_t step = sampling == Sampling::Hourly ? 1 : 24;
  std::vector<double> buffer;
  std::vector<std::string> fields;
  std::size_t rows = 0;
  UtcHour expected{};
  while (in.next_row(fields)) {
    UtcHour stamp = sampling == Sampling::Hourly
                        ? parse_utc_hour(fields[0])
                        : utc_hour(parse_date(fields[0]));
    if (rows == 0) {
      series.start = stamp;
    } else if (stamp != expected) {
      if (stamp > expected) report_gap(path, expected, stamp, sampling);
      throw ParseError(in.location() +
                       ": time axis not strictly increasing at " + fields[0]);
    }
    expected = stamp + step;
    for (std::size_t g = 0; g < series.gridpoint_ids.size(); ++g) {
      double v = parse_double(fields[1 + g], in.location() + ": " +
                                                 series.gridpoint_ids[g]);
      check_climate_value(variable, v,
                          in.location() + ": " + series.gridpoint_ids[g]);
      buffer.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw InsufficientData(path.string() + ": no data rows");
  series.values.resize(Eigen::Index(rows),
                       Eigen::Index(series.gridpoint_ids.size()));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t g = 0; g < series.gridpoint_ids.size(); ++g)
      series.values(Eigen::Index(r), Eigen::Index(g)) =
          buffer[r * series.gridpoint_ids.size() + g];
  if (sampling == Sampling::Daily && hour_of_day(series.start) != 0)
    throw ValidationError(path.string() +
                          ": daily series must anchor at midnight UTC");
  return series;
}

void save_grid_series(const GridSeries& series,
                      const std::filesystem::path& path) {
  CsvWriter out(path);
  std::vector<std::string> header = {"time"};
  header.insert(header.end(), series.gridpoint_ids.begin(),
                series.gridpoint_ids.end());
  out.row(header);
  const std::int64_t step = series.sampling == Sampling::Hourly ? 1 : 24;
  std::vector<std::string> row(1 + series.gridpoint_ids.size());
  for (Eigen::Index r = 0; r < series.values.rows(); ++r) {
    UtcHour stamp = series.start + std::int64_t(r) * step;
    row[0] = series.sampling == Sampling::Hourly
                 ? format_utc_hour(stamp)
                 : format_date(date_of(stamp));
    for (Eigen::Index g = 0; g < series.values.cols(); ++g)
      row[1 + std::size_t(g)] = format_double(series.values(r, g));
    out.row(row);
  }
  out.commit();
}

GridSeries combine_wind_components(const GridSeries& u, const GridSeries& v) {
  if (u.variable != ClimateVariable::WindSpeedComponentU ||
      v.variable != ClimateVariable::WindSpeedComponentV)
    throw ValidationError(
        "combine_wind_components: expected u- and v-component series");
  if (u.sampling != v.sampling || u.start != v.start ||
      u.gridpoint_ids != v.gridpoint_ids ||
      u.values.rows() != v.values.rows())
    throw AlignmentError(
        "combine_wind_components: component series are not aligned");
  GridSeries out = u;
  out.variable = ClimateVariable::WindSpeed10m;
  out.values = (u.values.array().square() + v.values.array().square()).sqrt();
  return out;
}

std::map<std::string, HourlySeries> load_zonal_demand(
    const std::filesystem::path& path, const std::vector<ZoneId>& zones) {
  CsvReader in(path);
  require_header(in, {"time", "zone", "demand_mw"});
  std::map<std::string, HourlySeries> out;
  std::vector<std::string> fields;
  while (in.next_row(fields)) {
    if (!known_zone(zones, fields[1]))
      throw ValidationError(in.location() + ": unknown zone '" + fields[1] +
                            "'");
    UtcHour stamp = parse_utc_hour(fields[0]);
    double v = parse_double(fields[2], in.location() + ": demand_mw");
    if (!(v > 0.0))
      throw ValidationError(in.location() + ": demand must be positive");
    HourlySeries& s = out[fields[1]];
    if (s.values.empty()) {
      s.start = stamp;
    } else {
      UtcHour expected = s.start + std::int64_t(s.values.size());
      if (stamp != expected) {
        if (stamp > expected)
          report_gap(path, expected, stamp, Sampling::Hourly);
        throw ParseError(in.location() + ": zone " + fields[1] +
                         " hours out of order at " + fields[0]);
      }
    }
    s.values.push_back(v);
  }
  for (const ZoneId& z : zones) {
    auto it = out.find(z.name);
    if (it == out.end() || it->second.empty())
      throw ValidationError(path.string() + ": no demand rows for zone " +
                            z.name);
    if (!aligned(it->second, out.begin()->second))
      throw AlignmentError(path.string() + ": zone " + z.name +
                           " does not share the common time axis");
  }
  return out;
}

void save_zonal_demand(const std::map<std::string, HourlySeries>& demand,
                       const std::filesystem::path& path) {
  CsvWriter out(path);
  out.row({"time", "zone", "demand_mw"});
  if (demand.empty()) {
    out.commit();
    return;
  }
  std::size_t n = demand.begin()->second.size();
  for (std::size_t t = 0; t < n; ++t)
    for (const auto& [zone, series] : demand)
      out.row({format_utc_hour(series.time_at(t)), zone,
               format_double(series[t])});
  out.commit();
}

std::map<Component, HourlySeries> load_zonal_cf(
    const std::filesystem::path& path, const std::vector<ZoneId>& zones,
    const std::vector<TechId>& technologies) {
  CsvReader in(path);
  require_header(in, {"time", "zone", "technology", "cf"});
  std::map<Component, HourlySeries> out;
  std::vector<std::string> fields;
  while (in.next_row(fields)) {
    if (!known_zone(zones, fields[1]))
      throw ValidationError(in.location() + ": unknown zone '" + fields[1] +
                            "'");
    if (!known_tech(technologies, fields[2]))
      throw ValidationError(in.location() + ": unknown technology '" +
                            fields[2] + "'");
    UtcHour stamp = parse_utc_hour(fields[0]);
    double v = parse_double(fields[3], in.location() + ": cf");
    if (!std::isfinite(v) || v < 0.0 || v > 1.0 + 1e-9)
      throw ValidationError(in.location() +
                            ": capacity factor must lie in [0, 1]");
    Component key{ZoneId{fields[1]}, TechId{fields[2]}};
    HourlySeries& s = out[key];
    if (s.values.empty()) {
      s.start = stamp;
    } else {
      UtcHour expected = s.start + std::int64_t(s.values.size());
      if (stamp != expected) {
        if (stamp > expected)
          report_gap(path, expected, stamp, Sampling::Hourly);
        throw ParseError(in.location() + ": component " + fields[1] + "/" +
                         fields[2] + " hours out of order at " + fields[0]);
      }
    }
    s.values.push_back(v);
  }
  for (const ZoneId& z : zones) {
    for (const TechId& t : technologies) {
      auto it = out.find(Component{z, t});
      if (it == out.end() || it->second.empty())
        throw ValidationError(path.string() + ": no capacity factors for " +
                              z.name + "/" + t.name);
      if (!aligned(it->second, out.begin()->second))
        throw AlignmentError(path.string() + ": component " + z.name + "/" +
                             t.name + " does not share the common time axis");
    }
  }
  return out;
}

void save_zonal_cf(const std::map<Component, HourlySeries>& cf,
                   const std::filesystem::path& path) {
  CsvWriter out(path);
  out.row({"time", "zone", "technology", "cf"});
  if (cf.empty()) {
    out.commit();
    return;
  }
  std::size_t n = cf.begin()->second.size();
  for (std::size_t t = 0; t < n; ++t)
    for (const auto& [comp, series] : cf)
      out.row({format_utc_hour(series.time_at(t)), comp.zone.name,
               comp.tech.name, format_double(series[t])});
  out.commit();
}

namespace {

std::map<Component, double> load_component_table(
    const std::filesystem::path& path, const std::vector<ZoneId>& zones,
    const std::vector<TechId>& technologies, const std::string& value_column,
    double lo, bool lo_strict, double hi, bool hi_strict,
    const std::string& range_text) {
  CsvReader in(path);
  require_header(in, {"zone", "technology", value_column});
  std::map<Component, double> out;
  std::vector<std::string> fields;
  while (in.next_row(fields)) {
    if (!known_zone(zones, fields[0]))
      throw ValidationError(in.location() + ": unknown zone '" + fields[0] +
                            "'");
    if (!known_tech(technologies, fields[1]))
      throw ValidationError(in.location() + ": unknown technology '" +
                            fields[1] + "'");
    double v = parse_double(fields[2], in.location() + ": " + value_column);
    bool ok = std::isfinite(v) && (lo_strict ? v > lo : v >= lo) &&
              (hi_strict ? v < hi : v <= hi);
    if (!ok)
      throw ValidationError(in.location() + ": " + value_column + " must " +
                            range_text);
    Component key{ZoneId{fields[0]}, TechId{fields[1]}};
    if (!out.emplace(key, v).second)
      throw ValidationError(in.location() + ": duplicate row for " +
                            fields[0] + "/" + fields[1]);
  }
  for (const ZoneId& z : zones)
    for (const TechId& t : technologies)
      if (!out.count(Component{z, t}))
        throw ValidationError(path.string() + ": missing row for " + z.name +
                              "/" + t.name);
  return out;
}

}  // namespace

std::map<Component, double> load_cf_targets(
    const std::filesystem::path& path, const std::vector<ZoneId>& zones,
    const std::vector<TechId>& technologies) {
  return load_component_table(path, zones, technologies, "mean_cf", 0.0, true,
                              1.0, true, "lie in (0, 1)");
}

std::map<Component, double> load_capacities(
    const std::filesystem::path& path, const std::vector<ZoneId>& zones,
    const std::vector<TechId>& technologies) {
  return load_component_table(
      path, zones, technologies, "capacity_mw", 0.0, false,
      std::numeric_limits<double>::infinity(), true, "be >= 0");
}

HolidayCalendar load_holidays(const std::filesystem::path& path) {
  CsvReader in(path);
  require_header(in, {"date"});
  HolidayCalendar out;
  std::vector<std::string> fields;
  while (in.next_row(fields)) out.insert(parse_date(fields[0]));
  return out;
}

HourlySeries restrict_period(const HourlySeries& s, const Date& from,
                             const Date& to) {
  if (from > to)
    throw RangeError("restrict_period: start date " + format_date(from) +
                     " is after end date " + format_date(to));
  UtcHour lo = utc_hour(from, 0);
  UtcHour hi = utc_hour(to, 23);
  UtcHour last = s.start + (std::int64_t(s.size()) - 1);
  if (s.empty() || lo < s.start || hi > last)
    throw RangeError("restrict_period: requested " + format_date(from) +
                     ".." + format_date(to) + " but the series covers " +
                     (s.empty() ? std::string("nothing")
                                : format_utc_hour(s.start) + ".." +
                                      format_utc_hour(last)));
  HourlySeries out;
  out.start = lo;
  out.values.assign(s.values.begin() + (lo - s.start),
                    s.values.begin() + (hi - s.start) + 1);
  return out;
}

}  // namespace vremix
