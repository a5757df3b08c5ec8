// Command-line front end: config-driven pipeline stages composed via files.
//
//   vremix fit-demand --config study.ini --out out/
//   vremix predict    --config study.ini --out out/
//   vremix optimize   --config study.ini --out out/ [--strategy all] [--step 0.001]
//   vremix analyze    --config study.ini --out out/ [--mix capacities.csv]
//   vremix spectrum   --config study.ini --out out/
//
// Exit codes: 0 success, 1 numerical failure, 2 input/config error.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "vremix/aggregation.hpp"
#include "vremix/analysis.hpp"
#include "vremix/config.hpp"
#include "vremix/csv.hpp"
#include "vremix/demand.hpp"
#include "vremix/errors.hpp"
#include "vremix/ingest.hpp"
#include "vremix/intraday.hpp"
#include "vremix/optimizer.hpp"
#include "vremix/series.hpp"
#include "vremix/solar.hpp"
#include "vremix/stats.hpp"
#include "vremix/time.hpp"
#include "vremix/wind.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vremix;

namespace {

void log_line(const std::string& message) {
  std::cerr << "[vremix] " << message << "\n";
}

// ---------------------------------------------------------------------------
// Run context: resolved paths, manifest bookkeeping, stage timings.

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[std::size_t(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

std::uint64_t fnv1a_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read input file '" + path.string() + "'");
  std::uint64_t h = 1469598103934665603ull;
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= std::uint64_t(static_cast<unsigned char>(buf[i]));
      h *= 1099511628211ull;
    }
  }
  return h;
}

struct RunContext {
  std::string command;
  fs::path config_path;
  fs::path config_dir;
  fs::path out_dir;
  StudyConfig cfg;
  const ConfigFile* raw = nullptr;
  std::optional<std::pair<Date, Date>> period;

  std::map<std::string, std::string> input_digests;
  std::vector<std::string> outputs;
  std::vector<std::pair<std::string, double>> timings_ms;

  /// Config-relative path resolution; empty stays empty.
  fs::path resolve(const std::string& rel) const {
    if (rel.empty()) return {};
    fs::path p(rel);
    return p.is_absolute() ? p : config_dir / p;
  }

  /// Resolved config path with an out-dir default when the key is unset.
  fs::path resolve_or_out(const std::string& rel,
                          const std::string& fallback_name) const {
    if (rel.empty()) return out_dir / fallback_name;
    return resolve(rel);
  }

  fs::path note_input(const fs::path& path) {
    input_digests[path.string()] = "fnv1a:" + hex64(fnv1a_file(path));
    return path;
  }

  void note_output(const fs::path& path) { outputs.push_back(path.string()); }
};

class StageTimer {
 public:
  StageTimer(RunContext& ctx, std::string name)
      : ctx_(ctx), name_(std::move(name)),
        start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    auto elapsed = std::chrono::steady_clock::now() - start_;
    double ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(
            elapsed)
            .count();
    ctx_.timings_ms.emplace_back(name_, ms);
  }

 private:
  RunContext& ctx_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

void write_manifest(const RunContext& ctx) {
  json m;
  m["command"] = ctx.command;
  m["version"] = VREMIX_VERSION;
  m["seed"] = ctx.cfg.seed;
  m["config"]["path"] = ctx.config_path.string();
  json sections = json::object();
  if (ctx.raw != nullptr)
    for (const auto& [name, keys] : ctx.raw->sections()) {
      json sec = json::object();
      for (const auto& [k, v] : keys) sec[k] = v;
      sections[name] = sec;
    }
  m["config"]["sections"] = sections;
  if (ctx.period) {
    m["period"]["start"] = format_date(ctx.period->first);
    m["period"]["end"] = format_date(ctx.period->second);
  } else {
    m["period"] = nullptr;
  }
  m["inputs"] = ctx.input_digests;
  m["outputs"] = ctx.outputs;
  json timings = json::object();
  for (const auto& [name, ms] : ctx.timings_ms) timings[name] = ms;
  m["timings_ms"] = timings;
  fs::path path = ctx.out_dir / ("manifest_" + ctx.command + ".json");
  write_text_atomic(path, m.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Small shared helpers.

/// "YYYY" or "YYYY-MM-DD:YYYY-MM-DD".
std::pair<Date, Date> parse_period_arg(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) {
    if (text.size() != 4 ||
        !std::all_of(text.begin(), text.end(),
                     [](char c) { return c >= '0' && c <= '9'; }))
      throw ConfigError("--period expects YYYY or YYYY-MM-DD:YYYY-MM-DD, got '" +
                        text + "'");
    int year = std::stoi(text);
    return {Date{year, 1, 1}, Date{year, 12, 31}};
  }
  Date from = parse_date(text.substr(0, colon));
  Date to = parse_date(text.substr(colon + 1));
  if (to < from) throw ConfigError("--period end precedes start");
  return {from, to};
}

/// First data stamp decides the sampling: a 'T' marks an hourly axis.
Sampling sniff_sampling(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read input file '" + path.string() + "'");
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    auto comma = line.find(',');
    std::string stamp = line.substr(0, comma);
    return stamp.find('T') != std::string::npos ? Sampling::Hourly
                                                : Sampling::Daily;
  }
  throw ParseError(path.string() + ": no data rows");
}

/// Permutes the value columns into the given id order; the id sets must match.
GridSeries reorder_columns(const GridSeries& s,
                           const std::vector<std::string>& ids) {
  if (s.gridpoint_ids == ids) return s;
  if (s.gridpoint_ids.size() != ids.size())
    throw ValidationError("climate series gridpoint set does not match the "
                          "grid metadata");
  GridSeries out = s;
  out.gridpoint_ids = ids;
  out.values.resize(s.values.rows(), Eigen::Index(ids.size()));
  for (std::size_t j = 0; j < ids.size(); ++j) {
    auto it = std::find(s.gridpoint_ids.begin(), s.gridpoint_ids.end(), ids[j]);
    if (it == s.gridpoint_ids.end())
      throw ValidationError("gridpoint '" + ids[j] +
                            "' missing from a climate series");
    out.values.col(Eigen::Index(j)) =
        s.values.col(it - s.gridpoint_ids.begin());
  }
  return out;
}

HourlySeries crop(const HourlySeries& s, UtcHour lo, UtcHour hi) {
  if (lo.count < s.start.count ||
      hi.count > s.time_at(s.size() - 1).count || hi.count < lo.count)
    throw RangeError("series does not cover the requested hours");
  HourlySeries out;
  out.start = lo;
  auto first = std::size_t(lo - s.start);
  out.values.assign(s.values.begin() + std::ptrdiff_t(first),
                    s.values.begin() + std::ptrdiff_t(first) +
                        (hi - lo) + 1);
  return out;
}

/// Crops every series to the intersection of all their time ranges.
template <class Key>
void crop_to_overlap(std::vector<std::map<Key, HourlySeries>*> maps) {
  std::optional<UtcHour> lo, hi;
  for (auto* m : maps)
    for (const auto& [key, s] : *m) {
      if (s.empty()) throw EmptySeries("empty series in pipeline inputs");
      UtcHour last = s.time_at(s.size() - 1);
      if (!lo || s.start.count > lo->count) lo = s.start;
      if (!hi || last.count < hi->count) hi = last;
    }
  if (!lo || !hi) return;
  if (hi->count < lo->count)
    throw AlignmentError("input series share no common time range");
  for (auto* m : maps)
    for (auto& [key, s] : *m) s = crop(s, *lo, *hi);
}

template <class Key>
void restrict_all(std::map<Key, HourlySeries>& m, const Date& from,
                  const Date& to) {
  for (auto& [key, s] : m) s = restrict_period(s, from, to);
}

HourlySeries sum_zonal(const std::map<std::string, HourlySeries>& by_zone) {
  HourlySeries total;
  bool first = true;
  for (const auto& [zone, s] : by_zone) {
    if (first) {
      total = s;
      first = false;
      continue;
    }
    if (!aligned(total, s))
      throw AlignmentError("zonal series are not aligned for the total");
    for (std::size_t i = 0; i < s.size(); ++i) total.values[i] += s[i];
  }
  if (first) throw EmptySeries("no zonal series to sum");
  return total;
}

struct PipelineInputs {
  ComponentIndex index;
  std::vector<HourlySeries> eta;     // per component, index order
  HourlySeries total_demand;
  std::map<std::string, HourlySeries> demand_by_zone;
};

/// Loads predicted demand + capacity factors, restricts to the period, and
/// crops everything to the common axis.
PipelineInputs load_pipeline_inputs(RunContext& ctx,
                                    const std::string& demand_key,
                                    const std::string& cf_key) {
  PipelineInputs in;
  fs::path demand_path =
      ctx.note_input(ctx.resolve_or_out(demand_key, "demand.csv"));
  fs::path cf_path = ctx.note_input(ctx.resolve_or_out(cf_key, "cf.csv"));
  in.demand_by_zone = load_zonal_demand(demand_path, ctx.cfg.zones);
  auto cf = load_zonal_cf(cf_path, ctx.cfg.zones, ctx.cfg.technologies);
  if (ctx.period) {
    restrict_all(in.demand_by_zone, ctx.period->first, ctx.period->second);
    restrict_all(cf, ctx.period->first, ctx.period->second);
  }
  std::map<std::string, HourlySeries> cf_str;
  for (auto& [comp, s] : cf)
    cf_str[comp.zone.name + "\n" + comp.tech.name] = std::move(s);
  crop_to_overlap<std::string>({&in.demand_by_zone, &cf_str});
  in.index = ctx.cfg.component_index();
  in.eta.reserve(in.index.size());
  for (const auto& comp : in.index.items())
    in.eta.push_back(cf_str.at(comp.zone.name + "\n" + comp.tech.name));
  in.total_demand = sum_zonal(in.demand_by_zone);
  return in;
}

/// Fitted demand parameter bundle paths: config prefix or out-dir default.
std::pair<fs::path, fs::path> demand_params_paths(const RunContext& ctx) {
  fs::path prefix = ctx.cfg.demand.params_file.empty()
                        ? ctx.out_dir / "demand_params"
                        : ctx.resolve(ctx.cfg.demand.params_file);
  fs::path coeffs = prefix;
  coeffs += "_coeffs.csv";
  fs::path cycles = prefix;
  cycles += "_cycles.csv";
  return {coeffs, cycles};
}

HolidayCalendar load_holidays_if_set(RunContext& ctx) {
  if (ctx.cfg.holidays_file.empty()) return {};
  return load_holidays(ctx.note_input(ctx.resolve(ctx.cfg.holidays_file)));
}

GridMetadata load_metadata(RunContext& ctx) {
  if (ctx.cfg.metadata_file.empty())
    throw ConfigError("study.metadata_file is required for this command");
  return load_grid_metadata(ctx.note_input(ctx.resolve(ctx.cfg.metadata_file)),
                            ctx.cfg.zones);
}

std::vector<std::string> metadata_ids(const GridMetadata& meta) {
  std::vector<std::string> ids;
  ids.reserve(meta.points.size());
  for (const auto& p : meta.points) ids.push_back(p.id);
  return ids;
}

std::map<std::string, DailySeries> demand_temperatures(RunContext& ctx,
                                                       const GridMetadata& meta) {
  if (ctx.cfg.demand.temperature_file.empty())
    throw ConfigError("demand.temperature_file is required");
  fs::path path = ctx.note_input(ctx.resolve(ctx.cfg.demand.temperature_file));
  GridSeries t = load_grid_series(path, ClimateVariable::Temperature2m,
                                  sniff_sampling(path));
  return zone_daily_temperature_c(t, meta, ctx.cfg.zones);
}

// ---------------------------------------------------------------------------
// fit-demand

int cmd_fit_demand(RunContext& ctx) {
  GridMetadata meta = load_metadata(ctx);
  HolidayCalendar holidays = load_holidays_if_set(ctx);

  if (ctx.cfg.demand.observations_file.empty())
    throw ConfigError("demand.observations_file is required for fit-demand");
  std::map<std::string, HourlySeries> observed;
  std::map<std::string, DailySeries> temps;
  {
    StageTimer t(ctx, "load");
    observed = load_zonal_demand(
        ctx.note_input(ctx.resolve(ctx.cfg.demand.observations_file)),
        ctx.cfg.zones);
    temps = demand_temperatures(ctx, meta);
    if (ctx.period) {
      restrict_all(observed, ctx.period->first, ctx.period->second);
      for (auto& [zone, s] : temps)
        s = slice(s, ctx.period->first, ctx.period->second);
    }
  }

  DemandFitOptions options;
  options.t_heat_min_c = ctx.cfg.demand.t_heat_min_c;
  options.t_heat_max_c = ctx.cfg.demand.t_heat_max_c;
  options.t_cool_min_c = ctx.cfg.demand.t_cool_min_c;
  options.t_cool_max_c = ctx.cfg.demand.t_cool_max_c;
  options.grid_step_c = ctx.cfg.demand.grid_step_c;
  options.cv_blocks = ctx.cfg.demand.cv_blocks;
  options.ridge_tol = ctx.cfg.demand.ridge_tol;
  options.ridge_max_iter = ctx.cfg.demand.ridge_max_iter;

  DemandModelParams params;
  DemandFitReport report;
  {
    StageTimer t(ctx, "fit");
    std::tie(params, report) =
        fit_demand_model(ctx.cfg.zones, observed, temps, holidays, options);
  }

  auto [coeffs_path, cycles_path] = demand_params_paths(ctx);
  params.save(coeffs_path, cycles_path);
  ctx.note_output(coeffs_path);
  ctx.note_output(cycles_path);
  fs::path report_path = ctx.out_dir / "demand_fit_report.txt";
  write_text_atomic(report_path, report.to_text());
  ctx.note_output(report_path);
  log_line("fit-demand: thresholds (" + format_double(params.t_heat_c) + ", " +
           format_double(params.t_cool_c) + ") degC over " +
           std::to_string(report.days_used) + " days");
  return 0;
}

// ---------------------------------------------------------------------------
// predict

GridSeries load_wind_speed(RunContext& ctx,
                           const std::vector<std::string>& ids) {
  const WindConfig& w = ctx.cfg.wind;
  if (!w.speed_file.empty()) {
    fs::path p = ctx.note_input(ctx.resolve(w.speed_file));
    return reorder_columns(
        load_grid_series(p, ClimateVariable::WindSpeed10m, w.sampling), ids);
  }
  if (!w.u_file.empty()) {
    GridSeries u = load_grid_series(ctx.note_input(ctx.resolve(w.u_file)),
                                    ClimateVariable::WindSpeedComponentU,
                                    w.sampling);
    GridSeries v = load_grid_series(ctx.note_input(ctx.resolve(w.v_file)),
                                    ClimateVariable::WindSpeedComponentV,
                                    w.sampling);
    return reorder_columns(combine_wind_components(u, v), ids);
  }
  throw ConfigError(
      "wind speed input missing: set wind.speed_file or wind.u_file/v_file");
}

/// Checks a daily field covers exactly the days of the speed record.
void check_density_axis(const GridSeries& field, const GridSeries& speed,
                        Eigen::Index days, const char* label) {
  if (field.sampling != Sampling::Daily)
    throw ValidationError(std::string(label) + ": expected a daily series");
  if (date_of(field.start) != date_of(speed.start) ||
      field.values.rows() != days)
    throw ValidationError(std::string(label) +
                          " does not cover the wind speed days");
}

std::map<std::string, HourlySeries> predict_wind_cf(
    RunContext& ctx, const GridMetadata& meta,
    const std::vector<std::string>& ids) {
  const WindConfig& wc = ctx.cfg.wind;
  GridSeries speed = load_wind_speed(ctx, ids);

  WindFields fields;
  fields.daily = speed.sampling == Sampling::Daily;
  fields.start = speed.start;
  fields.gridpoint_ids = ids;
  fields.speed_ms = speed.values;

  Eigen::Index days = fields.daily ? speed.values.rows()
                                   : speed.values.rows() / 24;
  if (wc.density_correction()) {
    GridSeries t = reorder_columns(
        load_grid_series(ctx.note_input(ctx.resolve(wc.temperature_file)),
                         ClimateVariable::Temperature2m, Sampling::Daily),
        ids);
    GridSeries p = reorder_columns(
        load_grid_series(ctx.note_input(ctx.resolve(wc.pressure_file)),
                         ClimateVariable::SurfacePressure, Sampling::Daily),
        ids);
    GridSeries q = reorder_columns(
        load_grid_series(ctx.note_input(ctx.resolve(wc.humidity_file)),
                         ClimateVariable::SpecificHumidity, Sampling::Daily),
        ids);
    check_density_axis(t, speed, days, "wind.temperature_file");
    check_density_axis(p, speed, days, "wind.pressure_file");
    check_density_axis(q, speed, days, "wind.humidity_file");
    fields.temperature_k = t.values;
    fields.pressure_pa = p.values;
    fields.specific_humidity = q.values;
  }

  std::optional<IntradaySampler> sampler;
  if (fields.daily) {
    WeibullCopulaParams params;
    if (!wc.intraday_shape_file.empty()) {
      params = WeibullCopulaParams::load(
          ctx.note_input(ctx.resolve(wc.intraday_shape_file)),
          ctx.note_input(ctx.resolve(wc.intraday_correlation_file)));
      if (params.gridpoint_ids != ids)
        throw ValidationError(
            "intraday parameter gridpoints do not match the grid metadata");
    } else if (!wc.training_speed_file.empty()) {
      fs::path p = ctx.note_input(ctx.resolve(wc.training_speed_file));
      GridSeries training = reorder_columns(
          load_grid_series(p, ClimateVariable::WindSpeed10m, Sampling::Hourly),
          ids);
      params = fit_intraday_params(training.values, ids);
      fs::path shape_path = ctx.out_dir / "intraday_shape.csv";
      fs::path corr_path = ctx.out_dir / "intraday_correlation.csv";
      params.save(shape_path, corr_path);
      ctx.note_output(shape_path);
      ctx.note_output(corr_path);
      log_line("wind: intraday parameters fitted from " + p.string());
    } else {
      throw ConfigError(
          "daily wind speeds need intraday parameters: set "
          "wind.intraday_shape_file/intraday_correlation_file or "
          "wind.training_speed_file");
    }
    sampler.emplace(std::move(params));
  } else {
    log_line("wind: hourly speeds supplied; intraday sampler bypassed");
  }

  PowerCurve curve = wc.power_curve_file.empty()
                         ? PowerCurve::swt23_101()
                         : PowerCurve::load(ctx.note_input(
                               ctx.resolve(wc.power_curve_file)));
  WindModelConfig model;
  model.hub_height_m = wc.hub_height_m;
  model.reference_height_m = wc.reference_height_m;
  model.power_law_exponent = wc.shear_exponent;

  GridPower power = hourly_wind_power(
      fields, curve, model, sampler ? &*sampler : nullptr, ctx.cfg.seed);
  std::vector<double> nominal(ids.size(), curve.nominal_power_w());
  return aggregate_zones(power, meta, nominal, ctx.cfg.zones);
}

std::map<std::string, HourlySeries> predict_pv_cf(
    RunContext& ctx, const GridMetadata& meta,
    const std::vector<std::string>& ids) {
  const PvConfig& pc = ctx.cfg.pv;
  if (pc.irradiance_file.empty() || pc.temperature_file.empty() ||
      pc.wind_file.empty())
    throw ConfigError(
        "pv.irradiance_file, pv.temperature_file, and pv.wind_file are "
        "required for predict");
  GridSeries irr = reorder_columns(
      load_grid_series(ctx.note_input(ctx.resolve(pc.irradiance_file)),
                       ClimateVariable::SurfaceIrradiance, pc.sampling),
      ids);
  fs::path t_path = ctx.note_input(ctx.resolve(pc.temperature_file));
  GridSeries t = reorder_columns(
      load_grid_series(t_path, ClimateVariable::Temperature2m,
                       sniff_sampling(t_path)),
      ids);
  fs::path w_path = ctx.note_input(ctx.resolve(pc.wind_file));
  GridSeries w = reorder_columns(
      load_grid_series(w_path, ClimateVariable::WindSpeed10m,
                       sniff_sampling(w_path)),
      ids);

  Eigen::Index days = pc.sampling == Sampling::Daily ? irr.values.rows()
                                                     : irr.values.rows() / 24;
  auto check_axis = [&](const GridSeries& s, const char* label) {
    Eigen::Index rows =
        s.sampling == Sampling::Daily ? s.values.rows() : s.values.rows() / 24;
    if (date_of(s.start) != date_of(irr.start) || rows != days)
      throw ValidationError(std::string(label) +
                            " does not cover the irradiance days");
  };
  check_axis(t, "pv.temperature_file");
  check_axis(w, "pv.wind_file");

  SolarFields fields;
  fields.daily = pc.sampling == Sampling::Daily;
  fields.start = irr.start;
  fields.gridpoint_ids = ids;
  for (const auto& id : ids) {
    const GridpointInfo* info = meta.find(id);
    fields.lat_deg.push_back(info->lat);
    fields.lon_deg.push_back(info->lon);
  }
  fields.irradiance_wm2 = irr.values;
  fields.temperature_k = t.values;
  fields.wind_ms = w.values;

  GridPower power = hourly_pv_power(fields, pc.constants);
  std::vector<double> nominal(ids.size(), pc.constants.nominal_power_w);
  return aggregate_zones(power, meta, nominal, ctx.cfg.zones);
}

int cmd_predict(RunContext& ctx) {
  GridMetadata meta = load_metadata(ctx);
  std::vector<std::string> ids = metadata_ids(meta);
  HolidayCalendar holidays = load_holidays_if_set(ctx);

  std::map<std::string, HourlySeries> demand;
  {
    StageTimer t(ctx, "demand");
    auto [coeffs_path, cycles_path] = demand_params_paths(ctx);
    DemandModelParams params = DemandModelParams::load(
        ctx.note_input(coeffs_path), ctx.note_input(cycles_path));
    auto temps = demand_temperatures(ctx, meta);
    demand = predict_demand(params, temps, holidays, ctx.cfg.demand.sampled,
                            ctx.cfg.seed);
  }

  std::map<Component, HourlySeries> cf;
  for (const auto& tech : ctx.cfg.technologies) {
    std::map<std::string, HourlySeries> by_zone;
    if (tech.name == "wind") {
      StageTimer t(ctx, "wind");
      by_zone = predict_wind_cf(ctx, meta, ids);
    } else if (tech.name == "pv") {
      StageTimer t(ctx, "pv");
      by_zone = predict_pv_cf(ctx, meta, ids);
    } else {
      throw ConfigError("predict supports technologies 'pv' and 'wind'; got '" +
                        tech.name + "'");
    }
    for (auto& [zone, s] : by_zone)
      cf[Component{ZoneId{zone}, tech}] = std::move(s);
  }

  // One shared axis for everything the downstream stages consume.
  {
    std::map<std::string, HourlySeries> cf_str;
    for (auto& [comp, s] : cf)
      cf_str[comp.zone.name + "\n" + comp.tech.name] = std::move(s);
    crop_to_overlap<std::string>({&demand, &cf_str});
    for (auto& [key, s] : cf_str) {
      auto nl = key.find('\n');
      cf[Component{ZoneId{key.substr(0, nl)}, TechId{key.substr(nl + 1)}}] =
          std::move(s);
    }
  }
  if (ctx.period) {
    restrict_all(demand, ctx.period->first, ctx.period->second);
    restrict_all(cf, ctx.period->first, ctx.period->second);
  }

  if (!ctx.cfg.cf_targets_file.empty()) {
    auto targets =
        load_cf_targets(ctx.note_input(ctx.resolve(ctx.cfg.cf_targets_file)),
                        ctx.cfg.zones, ctx.cfg.technologies);
    for (auto& [comp, s] : cf) {
      BiasCorrection bc = bias_correct(s, targets.at(comp));
      log_line("bias correction " + comp.zone.name + "/" + comp.tech.name +
               ": factor " + format_double(bc.factor) + ", clipped " +
               std::to_string(bc.clipped) + " hours");
      s = std::move(bc.corrected);
    }
  } else {
    log_line("predict: study.cf_targets_file unset; capacity factors left "
             "uncorrected");
  }

  fs::path demand_path = ctx.out_dir / "demand.csv";
  fs::path cf_path = ctx.out_dir / "cf.csv";
  save_zonal_demand(demand, demand_path);
  save_zonal_cf(cf, cf_path);
  ctx.note_output(demand_path);
  ctx.note_output(cf_path);
  log_line("predict: " + std::to_string(demand.begin()->second.size()) +
           " hours starting " +
           format_utc_hour(demand.begin()->second.start));
  return 0;
}

// ---------------------------------------------------------------------------
// optimize

struct OptimizeFlags {
  std::string strategy;        // "", "all", or comma list
  std::string total_capacity;  // "", "none", or MW
  std::optional<double> step;
};

int cmd_optimize(RunContext& ctx, const OptimizeFlags& flags) {
  PipelineInputs in;
  {
    StageTimer t(ctx, "load");
    in = load_pipeline_inputs(ctx, ctx.cfg.optimizer.demand_file,
                              ctx.cfg.optimizer.cf_file);
  }

  std::vector<Strategy> strategies = ctx.cfg.optimizer.strategies;
  if (!flags.strategy.empty()) {
    if (flags.strategy == "all") {
      strategies = {Strategy::Global, Strategy::Technology, Strategy::Base};
    } else {
      strategies.clear();
      for (const auto& name : split_list(flags.strategy, "--strategy"))
        strategies.push_back(parse_strategy(name));
    }
  }

  FrontierOptions options;
  options.step = flags.step.value_or(ctx.cfg.optimizer.step);
  options.mu_max_cap = ctx.cfg.optimizer.mu_max_cap;
  options.dominance_tol = ctx.cfg.optimizer.dominance_tol;
  options.total_capacity_mw = ctx.cfg.optimizer.total_capacity_mw;
  if (!flags.total_capacity.empty()) {
    if (flags.total_capacity == "none")
      options.total_capacity_mw.reset();
    else
      options.total_capacity_mw =
          parse_double(flags.total_capacity, "--total-capacity");
  }

  for (Strategy strategy : strategies) {
    StageTimer t(ctx, std::string("optimize:") + strategy_name(strategy));
    MeanRiskInputs inputs =
        assemble_inputs(in.index, in.eta, in.total_demand, strategy);
    Frontier frontier = compute_frontier(inputs, options);
    fs::path path = ctx.out_dir /
                    (std::string("frontier_") + strategy_name(strategy) +
                     ".csv");
    save_frontier(frontier, path);
    ctx.note_output(path);
    std::size_t stale = 0;
    for (const auto& p : frontier.points)
      if (!p.converged) ++stale;
    log_line(std::string("optimize ") + strategy_name(strategy) + ": " +
             std::to_string(frontier.points.size()) + " points" +
             (stale > 0 ? ", " + std::to_string(stale) +
                              " not fully alternated"
                        : ""));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// analyze

int cmd_analyze(RunContext& ctx, const std::string& mix_flag) {
  PipelineInputs in;
  {
    StageTimer t(ctx, "load");
    in = load_pipeline_inputs(ctx, ctx.cfg.analysis.demand_file,
                              ctx.cfg.analysis.cf_file);
  }

  // The frontier is optional only when it is absent by default; an explicit
  // config path must load.
  std::optional<Frontier> frontier;
  fs::path frontier_path =
      ctx.resolve_or_out(ctx.cfg.analysis.frontier_file, "frontier_global.csv");
  if (!ctx.cfg.analysis.frontier_file.empty() || fs::exists(frontier_path)) {
    frontier = load_frontier(ctx.note_input(frontier_path));
    if (!(frontier->index == in.index))
      throw ConfigError(frontier_path.string() +
                        ": frontier component layout does not match the "
                        "configured zones and technologies");
  }

  std::string mix_file = !mix_flag.empty() ? mix_flag
                         : !ctx.cfg.analysis.mix_file.empty()
                             ? ctx.cfg.analysis.mix_file
                             : ctx.cfg.capacities_file;
  if (!frontier && mix_file.empty())
    throw ConfigError(
        "analyze needs a frontier CSV or a prescribed mix (--mix)");

  Strategy strategy = frontier ? frontier->strategy : Strategy::Global;
  MeanRiskInputs inputs =
      assemble_inputs(in.index, in.eta, in.total_demand, strategy);

  std::ostringstream report;
  report << "Mix analysis (" << strategy_name(strategy) << " strategy, "
         << in.total_demand.size() << " hours from "
         << format_utc_hour(in.total_demand.start) << ")\n";

  struct DiagRow {
    std::string name;
    MixDiagnostics d;
    bool suboptimal = false;
  };
  std::vector<DiagRow> rows;

  auto describe_mix = [&](const Eigen::VectorXd& w) {
    std::ostringstream out;
    for (std::size_t k = 0; k < in.index.size(); ++k) {
      const Component& c = in.index.at(k);
      if (k > 0) out << ", ";
      out << c.zone.name << "/" << c.tech.name << " "
          << format_double(w(Eigen::Index(k))) << " MW";
    }
    return out.str();
  };

  auto add_row = [&](const std::string& name, const Eigen::VectorXd& w) {
    StageTimer t(ctx, "evaluate:" + name);
    MixDiagnostics d =
        evaluate_mix(w, inputs, in.eta, in.total_demand,
                     ctx.cfg.analysis.conv_share, ctx.cfg.analysis.sat_share);
    rows.push_back({name, d, false});
    report << "\n" << name << ":\n  " << describe_mix(w) << "\n  penetration "
           << format_double(d.mu) << ", risk " << format_double(d.sigma)
           << ", pv fraction " << format_double(d.pv_fraction)
           << "\n  shortage " << format_double(d.shortage_freq)
           << ", saturation " << format_double(d.saturation_freq) << "\n";
    return rows.size() - 1;
  };

  if (!mix_file.empty()) {
    fs::path mix_path = ctx.note_input(ctx.resolve(mix_file));
    auto capacities =
        load_capacities(mix_path, ctx.cfg.zones, ctx.cfg.technologies);
    Eigen::VectorXd w(Eigen::Index(in.index.size()));
    for (std::size_t k = 0; k < in.index.size(); ++k)
      w(Eigen::Index(k)) = capacities.at(in.index.at(k));
    std::size_t row = add_row("prescribed", w);
    if (frontier) {
      double tol = ctx.cfg.optimizer.dominance_tol;
      const FrontierPoint* dominator = nullptr;
      for (const auto& q : frontier->points)
        if (q.mu >= rows[row].d.mu + tol && q.sigma <= rows[row].d.sigma - tol)
          if (dominator == nullptr || q.mu > dominator->mu) dominator = &q;
      rows[row].suboptimal = dominator != nullptr;
      if (dominator != nullptr)
        report << "  suboptimal: dominated by the frontier point at target "
               << format_double(dominator->target_mu) << " (penetration "
               << format_double(dominator->mu) << " at risk "
               << format_double(dominator->sigma) << ")\n";
      else
        report << "  consistent with the frontier (not dominated)\n";
    }
  }

  if (frontier) {
    SpecialPoints sp =
        special_points(*frontier, ctx.cfg.analysis.reference_risk);
    add_row("min_risk", sp.min_risk.w);
    add_row("max_ratio", sp.max_ratio.w);
    if (sp.high_penetration) add_row("high_penetration", sp.high_penetration->w);

    if (!frontier->total_capacity_mw) {
      try {
        MeanRiskRatio ratio = mean_risk_ratio(*frontier);
        report << "\nmean-risk ratio: " << format_double(ratio.alpha)
               << " (max relative deviation "
               << format_double(ratio.max_rel_deviation) << ")\n";
      } catch (const Error&) {
        // No positive-risk points; the ratio is undefined.
      }
    }
  }

  fs::path diag_path = ctx.out_dir / "mix_diagnostics.csv";
  {
    CsvWriter csv(diag_path);
    csv.row({"mix", "mu", "sigma", "pv_fraction", "shortage_freq",
             "saturation_freq", "suboptimal"});
    for (const auto& r : rows)
      csv.row({r.name, format_double(r.d.mu), format_double(r.d.sigma),
               format_double(r.d.pv_fraction),
               format_double(r.d.shortage_freq),
               format_double(r.d.saturation_freq),
               r.suboptimal ? "1" : "0"});
    csv.commit();
  }
  ctx.note_output(diag_path);

  fs::path report_path = ctx.out_dir / "analysis_report.txt";
  write_text_atomic(report_path, report.str());
  ctx.note_output(report_path);
  std::cout << report.str();
  return 0;
}

// ---------------------------------------------------------------------------
// spectrum

int cmd_spectrum(RunContext& ctx) {
  if (ctx.cfg.analysis.spectrum_files.empty())
    throw ConfigError("analysis.spectrum_files names no input series");

  struct BandRow {
    std::string series;
    VarianceBands bands;
  };
  std::vector<BandRow> rows;

  for (const auto& rel : ctx.cfg.analysis.spectrum_files) {
    fs::path path = ctx.note_input(ctx.resolve(rel));
    std::string stem = path.stem().string();
    CsvReader probe(path);
    std::string header;
    for (std::size_t i = 0; i < probe.header().size(); ++i) {
      if (i > 0) header += ",";
      header += probe.header()[i];
    }
    std::map<std::string, HourlySeries> named;
    if (header == "time,zone,demand_mw") {
      for (auto& [zone, s] : load_zonal_demand(path, ctx.cfg.zones))
        named[stem + "." + zone] = std::move(s);
    } else if (header == "time,zone,technology,cf") {
      for (auto& [comp, s] :
           load_zonal_cf(path, ctx.cfg.zones, ctx.cfg.technologies))
        named[stem + "." + comp.zone.name + "." + comp.tech.name] =
            std::move(s);
    } else {
      throw ParseError(path.string() +
                       ": spectrum inputs must be zonal demand or capacity "
                       "factor CSVs, got header '" +
                       header + "'");
    }
    for (auto& [name, s] : named) {
      if (ctx.period)
        s = restrict_period(s, ctx.period->first, ctx.period->second);
      StageTimer t(ctx, "bands:" + name);
      rows.push_back({name, variance_bands(s, ctx.cfg.analysis.year_window_days,
                                           ctx.cfg.analysis.day_window_hours)});
    }
  }

  fs::path out_path = ctx.out_dir / "spectrum.csv";
  {
    CsvWriter csv(out_path);
    std::string degenerate;
    for (const auto& r : rows)
      if (r.bands.degenerate)
        degenerate += (degenerate.empty() ? "" : ";") + r.series;
    if (!degenerate.empty())
      csv.comment("degenerate (constant series, bands undefined): " +
                  degenerate);
    csv.row({"series", "interannual_pct", "seasonal_pct", "intraday_pct"});
    for (const auto& r : rows)
      csv.row({r.series, format_double(r.bands.interannual_pct),
               format_double(r.bands.seasonal_pct),
               format_double(r.bands.intraday_pct)});
    csv.commit();
  }
  ctx.note_output(out_path);
  log_line("spectrum: " + std::to_string(rows.size()) + " series");
  return 0;
}

// ---------------------------------------------------------------------------
// main

struct CommonFlags {
  std::string config;
  std::string out = "out";
  std::optional<std::int64_t> seed;
  std::string period;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "Study configuration file")
      ->required();
  cmd->add_option("--out", flags.out, "Output directory (default: out)");
  cmd->add_option("--seed", flags.seed, "Override the study seed");
  cmd->add_option("--period", flags.period,
                  "Restrict to YYYY or YYYY-MM-DD:YYYY-MM-DD");
}

RunContext make_context(const CommonFlags& flags, ConfigFile& raw,
                        const std::string& command) {
  RunContext ctx;
  ctx.command = command;
  ctx.config_path = fs::path(flags.config);
  ctx.config_dir = ctx.config_path.parent_path();
  raw = ConfigFile::load(ctx.config_path);
  ctx.cfg = parse_study_config(raw);
  ctx.raw = &raw;
  ctx.out_dir = fs::path(flags.out);
  fs::create_directories(ctx.out_dir);
  ctx.input_digests[ctx.config_path.string()] =
      "fnv1a:" + hex64(fnv1a_file(ctx.config_path));
  if (flags.seed) ctx.cfg.seed = std::uint64_t(*flags.seed);
  if (!flags.period.empty())
    ctx.period = parse_period_arg(flags.period);
  else if (ctx.cfg.period_start && ctx.cfg.period_end)
    ctx.period = std::make_pair(*ctx.cfg.period_start, *ctx.cfg.period_end);
  else if (ctx.cfg.period_start || ctx.cfg.period_end)
    throw ConfigError(
        "study.period_start and study.period_end must be given together");
  return ctx;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zonal renewable-mix pipeline: demand and capacity-factor "
               "prediction, mean-variance frontier optimization, and mix "
               "diagnostics"};
  app.set_version_flag("--version", VREMIX_VERSION);
  app.require_subcommand(1);

  CommonFlags fit_flags;
  CLI::App* fit = app.add_subcommand(
      "fit-demand", "Fit the zonal demand model from observations");
  add_common_flags(fit, fit_flags);

  CommonFlags predict_flags;
  CLI::App* predict = app.add_subcommand(
      "predict", "Predict hourly zonal demand and capacity factors");
  add_common_flags(predict, predict_flags);

  CommonFlags optimize_flags;
  OptimizeFlags opt_extra;
  CLI::App* optimize = app.add_subcommand(
      "optimize", "Compute mean-variance frontiers per strategy");
  add_common_flags(optimize, optimize_flags);
  optimize->add_option("--strategy", opt_extra.strategy,
                       "global, technology, base, a comma list, or all");
  optimize->add_option("--total-capacity", opt_extra.total_capacity,
                       "Total capacity in MW, or 'none'");
  double step_value = 0.0;
  CLI::Option* step_opt = optimize->add_option(
      "--step", step_value, "Penetration grid step (fraction)");

  CommonFlags analyze_flags;
  std::string mix_flag;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Evaluate frontier special points and prescribed mixes");
  add_common_flags(analyze, analyze_flags);
  analyze->add_option("--mix", mix_flag,
                      "Prescribed mix CSV (zone,technology,capacity_mw)");

  CommonFlags spectrum_flags;
  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "Decompose series variance into time-scale bands");
  add_common_flags(spectrum, spectrum_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  ConfigFile raw = ConfigFile::from_string("", "<unset>");
  try {
    RunContext ctx = [&]() {
      if (fit->parsed()) return make_context(fit_flags, raw, "fit-demand");
      if (predict->parsed()) return make_context(predict_flags, raw, "predict");
      if (optimize->parsed())
        return make_context(optimize_flags, raw, "optimize");
      if (analyze->parsed()) return make_context(analyze_flags, raw, "analyze");
      return make_context(spectrum_flags, raw, "spectrum");
    }();

    int rc = 0;
    if (fit->parsed()) {
      rc = cmd_fit_demand(ctx);
    } else if (predict->parsed()) {
      rc = cmd_predict(ctx);
    } else if (optimize->parsed()) {
      if (step_opt->count() > 0) opt_extra.step = step_value;
      rc = cmd_optimize(ctx, opt_extra);
    } else if (analyze->parsed()) {
      rc = cmd_analyze(ctx, mix_flag);
    } else {
      rc = cmd_spectrum(ctx);
    }
    write_manifest(ctx);
    return rc;
  } catch (const NumericalError& e) {
    std::cerr << "[vremix] numerical error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "[vremix] error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "[vremix] internal error: " << e.what() << "\n";
    return 1;
  }
}
