#include "vremix/demand.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vremix/csv.hpp"
#include "vremix/errors.hpp"
#include "vremix/rng.hpp"

namespace vremix {

namespace {

constexpr int kTerms = 3;  // heating slope, cooling slope, constant level
constexpr int kCols = kNumDayTypes * kTerms;

// Regression moments; block-wise sums subtract cleanly from the totals.
struct Moments {
  Eigen::MatrixXd g;   // X^T X
  Eigen::VectorXd xy;  // X^T y
  double yy = 0.0;
  double sum_y = 0.0;
  long n = 0;

  static Moments zero(int cols) {
    return {Eigen::MatrixXd::Zero(cols, cols), Eigen::VectorXd::Zero(cols),
            0.0, 0.0, 0};
  }

  Moments minus(const Moments& o) const {
    return {g - o.g, xy - o.xy, yy - o.yy, sum_y - o.sum_y, n - o.n};
  }
};

Moments moments_of(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                   Eigen::Index row_begin, Eigen::Index row_end) {
  Moments m = Moments::zero(int(x.cols()));
  auto xb = x.middleRows(row_begin, row_end - row_begin);
  auto yb = y.segment(row_begin, row_end - row_begin);
  m.g = xb.transpose() * xb;
  m.xy = xb.transpose() * yb;
  m.yy = yb.squaredNorm();
  m.sum_y = yb.sum();
  m.n = long(row_end - row_begin);
  return m;
}

RidgeFit ridge_from_moments(const Moments& m, double tol, int max_iter) {
  const int p = int(m.g.rows());
  if (m.n < 1) throw InsufficientData("ridge fit with no samples");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.g);
  if (es.info() != Eigen::Success)
    throw NumericalError("ridge fit: eigendecomposition failed");
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);

  double ybar = m.sum_y / double(m.n);
  double yvar =
      (m.yy - double(m.n) * ybar * ybar) / double(std::max<long>(1, m.n - 1));
  double beta = yvar > 0.0 ? 1.0 / yvar : 1.0;
  double alpha = 1.0;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(p, p);

  Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
  int it = 0;
  while (it < max_iter) {
    ++it;
    w = beta * (alpha * id + beta * m.g).ldlt().solve(m.xy);
    double gamma = 0.0;
    for (int j = 0; j < p; ++j)
      gamma += beta * lam[j] / (alpha + beta * lam[j]);
    double ssr = std::max(0.0, m.yy - 2.0 * w.dot(m.xy) + w.dot(m.g * w));
    double alpha_new =
        std::clamp(gamma / std::max(w.squaredNorm(), 1e-300), 1e-12, 1e12);
    double beta_new = std::clamp(
        (double(m.n) - gamma) / std::max(ssr, 1e-300), 1e-12, 1e12);
    bool settled = std::abs(alpha_new - alpha) <= tol * std::max(1.0, alpha) &&
                   std::abs(beta_new - beta) <= tol * std::max(1.0, beta);
    alpha = alpha_new;
    beta = beta_new;
    if (settled) break;
  }
  w = beta * (alpha * id + beta * m.g).ldlt().solve(m.xy);
  return {w, alpha, beta, it};
}

// Design rows from cached day types; the public overload resolves the
// calendar first so the grid search never re-derives it.
Eigen::MatrixXd design_rows(const std::vector<double>& temps,
                            const std::vector<int>& day_types, double t_heat_c,
                            double t_cool_c) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(Eigen::Index(temps.size()), kCols);
  for (std::size_t i = 0; i < temps.size(); ++i) {
    const int d = day_types[i];
    x(Eigen::Index(i), 3 * d + 0) = std::max(t_heat_c - temps[i], 0.0);
    x(Eigen::Index(i), 3 * d + 1) = std::max(temps[i] - t_cool_c, 0.0);
    x(Eigen::Index(i), 3 * d + 2) = 1.0;
  }
  return x;
}

double out_of_block_r2(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) {
  double ybar = y.mean();
  double sst = (y.array() - ybar).matrix().squaredNorm();
  double ssr = (y - yhat).squaredNorm();
  if (sst <= 0.0)
    return ssr <= 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
  return 1.0 - ssr / sst;
}

std::vector<double> grid_values(double lo, double hi, double step) {
  std::vector<double> out;
  for (int i = 0;; ++i) {
    double v = lo + step * i;
    if (v > hi + step * 1e-9) break;
    out.push_back(std::min(v, hi));
  }
  return out;
}

}  // namespace

Eigen::Matrix<double, 3, 24> composite_cycles(const HourlySeries& total_demand,
                                              const HolidayCalendar& holidays) {
  if (hour_of_day(total_demand.start) != 0)
    throw ValidationError("composite_cycles: series must start at hour 00 UTC");
  if (total_demand.values.empty() || total_demand.values.size() % 24 != 0)
    throw ValidationError("composite_cycles: series must span whole days");

  Eigen::Matrix<double, 3, 24> sums = Eigen::Matrix<double, 3, 24>::Zero();
  long counts[kNumDayTypes] = {0, 0, 0};
  const std::size_t days = total_demand.values.size() / 24;
  const std::int64_t first = days_from_epoch(date_of(total_demand.start));
  for (std::size_t d = 0; d < days; ++d) {
    int t = int(day_type(date_from_epoch_days(first + std::int64_t(d)),
                         holidays));
    ++counts[t];
    for (int h = 0; h < 24; ++h)
      sums(t, h) += total_demand.values[d * 24 + std::size_t(h)];
  }

  Eigen::Matrix<double, 3, 24> cycles;
  for (int t = 0; t < kNumDayTypes; ++t) {
    if (counts[t] == 0)
      throw FitError(std::string("composite_cycles: no '") +
                     day_type_name(DayType(t)) + "' days in the observations");
    Eigen::Matrix<double, 1, 24> profile = sums.row(t) / double(counts[t]);
    double mean = profile.mean();
    if (!(mean > 0.0))
      throw FitError(std::string("composite_cycles: '") +
                     day_type_name(DayType(t)) +
                     "' profile has nonpositive mean");
    cycles.row(t) = profile / mean;
  }
  return cycles;
}

Eigen::MatrixXd design_matrix(const DailySeries& temperature_c,
                              const HolidayCalendar& holidays, double t_heat_c,
                              double t_cool_c) {
  std::vector<int> day_types(temperature_c.size());
  for (std::size_t i = 0; i < temperature_c.size(); ++i) {
    if (!std::isfinite(temperature_c[i]))
      throw ValidationError("design_matrix: non-finite temperature on " +
                            format_date(temperature_c.date_at(i)));
    day_types[i] = int(day_type(temperature_c.date_at(i), holidays));
  }
  return design_rows(temperature_c.values, day_types, t_heat_c, t_cool_c);
}

RidgeFit bayesian_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                        double tol, int max_iter) {
  if (x.rows() != y.size())
    throw ValidationError("bayesian_ridge: row count mismatch");
  return ridge_from_moments(moments_of(x, y, 0, x.rows()), tol, max_iter);
}

double demand_daily_level(const Eigen::Matrix3d& a, DayType day_type,
                          double temperature_c, double t_heat_c,
                          double t_cool_c) {
  const int d = int(day_type);
  return a(d, 0) * std::max(t_heat_c - temperature_c, 0.0) +
         a(d, 1) * std::max(temperature_c - t_cool_c, 0.0) + a(d, 2);
}

std::pair<DemandModelParams, DemandFitReport> fit_demand_model(
    const std::vector<ZoneId>& zones,
    const std::map<std::string, HourlySeries>& demand_by_zone,
    const std::map<std::string, DailySeries>& temperature_by_zone,
    const HolidayCalendar& holidays, const DemandFitOptions& options) {
  if (zones.empty()) throw ConfigError("demand fit needs at least one zone");
  if (options.cv_blocks < 2)
    throw ConfigError("demand fit needs cv_blocks >= 2");

  std::vector<double> heat_grid = grid_values(
      options.t_heat_min_c, options.t_heat_max_c, options.grid_step_c);
  std::vector<double> cool_grid = grid_values(
      options.t_cool_min_c, options.t_cool_max_c, options.grid_step_c);
  bool any_pair = false;
  for (double th : heat_grid)
    for (double tc : cool_grid)
      if (th <= tc) any_pair = true;
  if (heat_grid.empty() || cool_grid.empty() || !any_pair)
    throw ConfigError("empty demand threshold grid");

  // Intersect the demand and temperature day ranges across all zones.
  std::int64_t lo = std::numeric_limits<std::int64_t>::min();
  std::int64_t hi = std::numeric_limits<std::int64_t>::max();
  std::map<std::string, DailySeries> daily_demand;
  for (const auto& zone : zones) {
    auto d = demand_by_zone.find(zone.name);
    if (d == demand_by_zone.end())
      throw ConfigError("no demand observations for zone '" + zone.name + "'");
    auto t = temperature_by_zone.find(zone.name);
    if (t == temperature_by_zone.end())
      throw ConfigError("no temperature series for zone '" + zone.name + "'");
    if (t->second.empty())
      throw FitError("empty temperature series for zone '" + zone.name + "'");
    DailySeries means = daily_means(d->second);
    lo = std::max({lo, days_from_epoch(means.start),
                   days_from_epoch(t->second.start)});
    hi = std::min({hi,
                   days_from_epoch(means.start) + std::int64_t(means.size()) -
                       1,
                   days_from_epoch(t->second.start) +
                       std::int64_t(t->second.size()) - 1});
    daily_demand.emplace(zone.name, std::move(means));
  }
  if (hi < lo)
    throw FitError("demand observations and temperatures do not overlap");
  const long n = long(hi - lo + 1);
  if (n < 2L * options.cv_blocks)
    throw FitError("insufficient overlap: " + std::to_string(n) +
                   " days cannot fill " + std::to_string(options.cv_blocks) +
                   " cross-validation blocks");

  const Date first_day = date_from_epoch_days(lo);
  const Date last_day = date_from_epoch_days(hi);
  std::vector<int> day_types(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i)
    day_types[std::size_t(i)] =
        int(day_type(date_from_epoch_days(lo + i), holidays));

  struct ZoneData {
    std::vector<double> temps;
    Eigen::VectorXd y;
  };
  std::map<std::string, ZoneData> data;
  for (const auto& zone : zones) {
    ZoneData zd;
    zd.temps = slice(temperature_by_zone.at(zone.name), first_day, last_day)
                   .values;
    DailySeries y = slice(daily_demand.at(zone.name), first_day, last_day);
    zd.y = Eigen::Map<const Eigen::VectorXd>(y.values.data(),
                                             Eigen::Index(y.values.size()));
    for (std::size_t i = 0; i < zd.temps.size(); ++i)
      if (!std::isfinite(zd.temps[i]))
        throw ValidationError("non-finite temperature for zone '" + zone.name +
                              "' on " +
                              format_date(date_from_epoch_days(
                                  lo + std::int64_t(i))));
    data.emplace(zone.name, std::move(zd));
  }

  // Block boundaries: contiguous, lengths differing by at most one day.
  const int blocks = options.cv_blocks;
  std::vector<Eigen::Index> bounds(std::size_t(blocks) + 1);
  for (int b = 0; b <= blocks; ++b)
    bounds[std::size_t(b)] = Eigen::Index(long(b) * n / blocks);

  DemandFitReport report;
  double best = -std::numeric_limits<double>::infinity();
  for (double th : heat_grid) {
    for (double tc : cool_grid) {
      if (th > tc) continue;
      double cell = 0.0;
      for (const auto& zone : zones) {
        const ZoneData& zd = data.at(zone.name);
        Eigen::MatrixXd x = design_rows(zd.temps, day_types, th, tc);
        Moments full = moments_of(x, zd.y, 0, x.rows());
        double zone_score = 0.0;
        for (int b = 0; b < blocks; ++b) {
          Eigen::Index b0 = bounds[std::size_t(b)];
          Eigen::Index b1 = bounds[std::size_t(b) + 1];
          Moments test = moments_of(x, zd.y, b0, b1);
          RidgeFit fit = ridge_from_moments(full.minus(test), options.ridge_tol,
                                            options.ridge_max_iter);
          Eigen::VectorXd yhat = x.middleRows(b0, b1 - b0) * fit.coeffs;
          zone_score += out_of_block_r2(zd.y.segment(b0, b1 - b0), yhat);
        }
        cell += zone_score / double(blocks);
      }
      cell /= double(zones.size());
      report.grid.push_back({th, tc, cell});
      if (cell > best) {
        best = cell;
        report.t_heat_c = th;
        report.t_cool_c = tc;
      }
    }
  }

  DemandModelParams params;
  params.t_heat_c = report.t_heat_c;
  params.t_cool_c = report.t_cool_c;
  params.zones = zones;
  report.days_used = std::size_t(n);

  // Final per-zone fit on the full overlap at the chosen thresholds.
  for (const auto& zone : zones) {
    const ZoneData& zd = data.at(zone.name);
    Eigen::MatrixXd x =
        design_rows(zd.temps, day_types, params.t_heat_c, params.t_cool_c);
    RidgeFit fit = bayesian_ridge(x, zd.y, options.ridge_tol,
                                  options.ridge_max_iter);
    Eigen::VectorXd residual = zd.y - x * fit.coeffs;
    double ssr = residual.squaredNorm();
    double ybar = zd.y.mean();
    double sst = (zd.y.array() - ybar).matrix().squaredNorm();

    ZoneDemandCoeffs zc;
    for (int d = 0; d < kNumDayTypes; ++d)
      for (int t = 0; t < kTerms; ++t) zc.a(d, t) = fit.coeffs[3 * d + t];
    zc.noise_std_mw = std::sqrt(ssr / double(n));
    zc.demand_floor_mw = 0.01 * ybar;
    zc.ridge_alpha = fit.alpha;
    zc.ridge_beta = fit.beta;
    params.coeffs.emplace(zone.name, zc);
    report.in_sample_r2[zone.name] =
        sst > 0.0 ? 1.0 - ssr / sst
                  : (ssr <= 0.0
                         ? 1.0
                         : -std::numeric_limits<double>::infinity());

    double zone_cv = 0.0;
    Moments full = moments_of(x, zd.y, 0, x.rows());
    for (int b = 0; b < blocks; ++b) {
      Eigen::Index b0 = bounds[std::size_t(b)];
      Eigen::Index b1 = bounds[std::size_t(b) + 1];
      Moments test = moments_of(x, zd.y, b0, b1);
      RidgeFit cv_fit = ridge_from_moments(full.minus(test), options.ridge_tol,
                                           options.ridge_max_iter);
      zone_cv += out_of_block_r2(zd.y.segment(b0, b1 - b0),
                                 x.middleRows(b0, b1 - b0) * cv_fit.coeffs);
    }
    report.cv_r2[zone.name] = zone_cv / double(blocks);
  }

  // Shared hour-of-day cycles from the total demand over the overlap.
  HourlySeries total{utc_hour(first_day),
                     std::vector<double>(std::size_t(n) * 24, 0.0)};
  for (const auto& zone : zones) {
    const HourlySeries& obs = demand_by_zone.at(zone.name);
    std::int64_t offset = (utc_hour(first_day) - obs.start);
    for (std::size_t i = 0; i < total.values.size(); ++i)
      total.values[i] += obs.values[std::size_t(offset) + i];
  }
  params.cycles = composite_cycles(total, holidays);

  params.validate();
  return {std::move(params), std::move(report)};
}

std::map<std::string, HourlySeries> predict_demand(
    const DemandModelParams& params,
    const std::map<std::string, DailySeries>& temperature_by_zone,
    const HolidayCalendar& holidays, bool sampled, std::uint64_t seed) {
  params.validate();
  const std::uint64_t stage = Rng::label("demand");

  const DailySeries* reference = nullptr;
  for (const auto& zone : params.zones) {
    auto t = temperature_by_zone.find(zone.name);
    if (t == temperature_by_zone.end())
      throw ConfigError("no temperature series for zone '" + zone.name + "'");
    if (t->second.empty())
      throw ValidationError("empty temperature series for zone '" +
                            zone.name + "'");
    if (reference && (t->second.start != reference->start ||
                      t->second.size() != reference->size()))
      throw AlignmentError("zone temperature series are not aligned");
    if (!reference) reference = &t->second;
  }

  std::map<std::string, HourlySeries> out;
  for (const auto& zone : params.zones) {
    const DailySeries& temps = temperature_by_zone.at(zone.name);
    const ZoneDemandCoeffs& zc = params.coeffs.at(zone.name);
    const std::uint64_t zone_label = Rng::label(zone.name);
    HourlySeries s{utc_hour(temps.start),
                   std::vector<double>(temps.size() * 24)};
    for (std::size_t i = 0; i < temps.size(); ++i) {
      const Date date = temps.date_at(i);
      const DayType dt = day_type(date, holidays);
      if (!std::isfinite(temps[i]))
        throw ValidationError("predict_demand: non-finite temperature on " +
                              format_date(date));
      const double level = demand_daily_level(zc.a, dt, temps[i],
                                              params.t_heat_c, params.t_cool_c);
      const std::uint64_t day = std::uint64_t(days_from_epoch(date));
      for (int h = 0; h < 24; ++h) {
        double v = level * params.cycles(int(dt), h);
        if (sampled && zc.noise_std_mw > 0.0) {
          Rng rng(Rng::key(seed, {stage, zone_label, day, std::uint64_t(h)}));
          v += zc.noise_std_mw * rng.normal();
        }
        s.values[i * 24 + std::size_t(h)] = std::max(v, zc.demand_floor_mw);
      }
    }
    out.emplace(zone.name, std::move(s));
  }
  return out;
}

void DemandModelParams::validate() const {
  if (!std::isfinite(t_heat_c) || !std::isfinite(t_cool_c))
    throw ValidationError("demand thresholds must be finite");
  if (t_heat_c > t_cool_c)
    throw ValidationError("demand threshold T_H exceeds T_C");
  if (zones.empty()) throw ValidationError("demand params list no zones");
  for (int d = 0; d < kNumDayTypes; ++d) {
    double mean = cycles.row(d).mean();
    if (std::abs(mean - 1.0) > 1e-6)
      throw ValidationError(std::string("demand cycle for '") +
                            day_type_name(DayType(d)) +
                            "' does not have mean 1");
    if ((cycles.row(d).array() <= 0.0).any())
      throw ValidationError(std::string("demand cycle for '") +
                            day_type_name(DayType(d)) +
                            "' has nonpositive entries");
  }
  for (const auto& zone : zones) {
    auto it = coeffs.find(zone.name);
    if (it == coeffs.end())
      throw ValidationError("no demand coefficients for zone '" + zone.name +
                            "'");
    const ZoneDemandCoeffs& zc = it->second;
    if (!zc.a.allFinite())
      throw ValidationError("non-finite demand coefficients for zone '" +
                            zone.name + "'");
    if (!(zc.noise_std_mw >= 0.0))
      throw ValidationError("negative noise scale for zone '" + zone.name +
                            "'");
    if (!(zc.demand_floor_mw >= 0.0))
      throw ValidationError("negative demand floor for zone '" + zone.name +
                            "'");
  }
}

void DemandModelParams::save(const std::filesystem::path& coeffs_path,
                             const std::filesystem::path& cycles_path) const {
  validate();
  CsvWriter coeffs_writer(coeffs_path);
  coeffs_writer.comment("t_heat_c=" + format_double(t_heat_c));
  coeffs_writer.comment("t_cool_c=" + format_double(t_cool_c));
  coeffs_writer.row({"zone", "day_type", "heat_mw_per_c", "cool_mw_per_c",
                     "const_mw", "noise_std_mw", "demand_floor_mw",
                     "ridge_alpha", "ridge_beta"});
  for (const auto& zone : zones) {
    const ZoneDemandCoeffs& zc = coeffs.at(zone.name);
    for (int d = 0; d < kNumDayTypes; ++d)
      coeffs_writer.row({zone.name, day_type_name(DayType(d)),
                         format_double(zc.a(d, 0)), format_double(zc.a(d, 1)),
                         format_double(zc.a(d, 2)),
                         format_double(zc.noise_std_mw),
                         format_double(zc.demand_floor_mw),
                         format_double(zc.ridge_alpha),
                         format_double(zc.ridge_beta)});
  }
  coeffs_writer.commit();

  CsvWriter cycles_writer(cycles_path);
  cycles_writer.row({"day_type", "hour", "factor"});
  for (int d = 0; d < kNumDayTypes; ++d)
    for (int h = 0; h < 24; ++h)
      cycles_writer.row({day_type_name(DayType(d)), std::to_string(h),
                         format_double(cycles(d, h))});
  cycles_writer.commit();
}

DemandModelParams DemandModelParams::load(
    const std::filesystem::path& coeffs_path,
    const std::filesystem::path& cycles_path) {
  DemandModelParams params;

  CsvReader coeffs_reader(coeffs_path);
  bool got_heat = false, got_cool = false;
  for (const std::string& raw : coeffs_reader.comment_lines()) {
    std::string line = raw.substr(1);
    std::size_t from = line.find_first_not_of(' ');
    std::size_t eq = line.find('=');
    if (from == std::string::npos || eq == std::string::npos) continue;
    std::string key = line.substr(from, eq - from);
    while (!key.empty() && key.back() == ' ') key.pop_back();
    std::string value = line.substr(eq + 1);
    if (key == "t_heat_c") {
      params.t_heat_c = parse_double(value, coeffs_path.string());
      got_heat = true;
    } else if (key == "t_cool_c") {
      params.t_cool_c = parse_double(value, coeffs_path.string());
      got_cool = true;
    }
  }
  if (!got_heat || !got_cool)
    throw ParseError(coeffs_path.string() +
                     ": missing '# t_heat_c=' or '# t_cool_c=' metadata line");
  const std::vector<std::string> expected{
      "zone",          "day_type",        "heat_mw_per_c",
      "cool_mw_per_c", "const_mw",        "noise_std_mw",
      "demand_floor_mw", "ridge_alpha",   "ridge_beta"};
  if (coeffs_reader.header() != expected)
    throw ParseError(coeffs_path.string() +
                     ": unexpected coefficients header");

  std::map<std::string, int> rows_seen;
  std::vector<std::string> fields;
  while (coeffs_reader.next_row(fields)) {
    const std::string& zone = fields[0];
    DayType d = day_type_from_name(fields[1]);
    auto [it, inserted] = params.coeffs.try_emplace(zone);
    if (inserted) params.zones.push_back(ZoneId{zone});
    ZoneDemandCoeffs& zc = it->second;
    const std::string where = coeffs_reader.location();
    for (int t = 0; t < kTerms; ++t)
      zc.a(int(d), t) = parse_double(fields[std::size_t(2 + t)], where);
    double noise = parse_double(fields[5], where);
    double floor = parse_double(fields[6], where);
    double alpha = parse_double(fields[7], where);
    double beta = parse_double(fields[8], where);
    if (rows_seen[zone] == 0) {
      zc.noise_std_mw = noise;
      zc.demand_floor_mw = floor;
      zc.ridge_alpha = alpha;
      zc.ridge_beta = beta;
    } else if (noise != zc.noise_std_mw || floor != zc.demand_floor_mw) {
      throw ParseError(where + ": inconsistent per-zone scalars for '" + zone +
                       "'");
    }
    ++rows_seen[zone];
  }
  for (const auto& [zone, count] : rows_seen)
    if (count != kNumDayTypes)
      throw ParseError(coeffs_path.string() + ": zone '" + zone + "' has " +
                       std::to_string(count) + " coefficient rows, expected " +
                       std::to_string(kNumDayTypes));

  CsvReader cycles_reader(cycles_path);
  if (cycles_reader.header() !=
      std::vector<std::string>{"day_type", "hour", "factor"})
    throw ParseError(cycles_path.string() +
                     ": expected header 'day_type,hour,factor'");
  bool seen[kNumDayTypes][24] = {};
  while (cycles_reader.next_row(fields)) {
    DayType d = day_type_from_name(fields[0]);
    const std::string where = cycles_reader.location();
    double hour = parse_double(fields[1], where);
    int h = int(hour);
    if (hour != h || h < 0 || h > 23)
      throw ParseError(where + ": hour must be an integer in [0, 23]");
    if (seen[int(d)][h])
      throw ParseError(where + ": duplicate cycle entry");
    seen[int(d)][h] = true;
    params.cycles(int(d), h) = parse_double(fields[2], where);
  }
  for (int d = 0; d < kNumDayTypes; ++d)
    for (int h = 0; h < 24; ++h)
      if (!seen[d][h])
        throw ParseError(cycles_path.string() + ": missing cycle entry for " +
                         day_type_name(DayType(d)) + " hour " +
                         std::to_string(h));

  params.validate();
  return params;
}

std::string DemandFitReport::to_text() const {
  std::ostringstream out;
  out << "demand model fit\n";
  out << "  days used: " << days_used << "\n";
  out << "  chosen thresholds: T_H = " << t_heat_c << " C, T_C = " << t_cool_c
      << " C\n";
  out << "  per-zone scores:\n";
  for (const auto& [zone, r2] : in_sample_r2) {
    out << "    " << zone << ": in-sample R2 = " << r2;
    auto cv = cv_r2.find(zone);
    if (cv != cv_r2.end()) out << ", out-of-block R2 = " << cv->second;
    out << "\n";
  }
  out << "  grid cells evaluated: " << grid.size() << "\n";
  return out.str();
}

}  // namespace vremix
