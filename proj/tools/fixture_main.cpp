// Generates the bundled toy-Italy dataset: two zones, three gridpoints,
// three years (2008-2010) of daily climate plus 120 days of hourly training
// wind, demand observations drawn from a known response model, and a study
// configuration wired to all of it.
//
//   vremix-fixture --dir fixtures/toy_italy [--seed 7]
//
// Every value is drawn from keyed counter-based streams, so repeated runs
// write byte-identical files.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "vremix/csv.hpp"
#include "vremix/demand.hpp"
#include "vremix/errors.hpp"
#include "vremix/ingest.hpp"
#include "vremix/rng.hpp"
#include "vremix/series.hpp"
#include "vremix/solar.hpp"
#include "vremix/time.hpp"
#include "vremix/wind.hpp"

namespace fs = std::filesystem;
using namespace vremix;

namespace {

constexpr double kPi = std::numbers::pi;

const Date kStart{2008, 1, 1};
const Date kEnd{2010, 12, 31};
constexpr int kTrainingDays = 120;

struct Gridpoint {
  std::string id;
  double lat;
  double lon;
  std::string zone;
};

const std::vector<Gridpoint> kGrid = {
    {"g1", 45.5, 9.2, "NORD"},
    {"g2", 44.8, 8.6, "NORD"},
    {"g3", 40.5, 16.0, "SUD"},
};

double zone_temperature_c(const std::string& zone, const Date& date,
                          std::uint64_t seed, std::int64_t day) {
  double doy = double(day_of_year(date));
  double base = zone == "NORD" ? 11.0 : 15.0;
  double amplitude = zone == "NORD" ? 11.0 : 9.0;
  double cycle = std::sin(2.0 * kPi * (doy - 105.0) / 365.25);
  Rng rng(Rng::key(seed, {Rng::label("temperature"), Rng::label(zone),
                          std::uint64_t(day)}));
  return base + amplitude * cycle + 1.5 * rng.normal();
}

/// Mean daily wind speed of a gridpoint, always positive.
double wind_mean_ms(const Gridpoint& g, const Date& date) {
  double doy = double(day_of_year(date));
  double base = g.zone == "NORD" ? 6.5 : 7.5;
  return base * (1.0 + 0.25 * std::sin(2.0 * kPi * (doy - 30.0) / 365.25));
}

/// Weibull(k=2) draw with the given mean, via a shared-factor Gaussian
/// copula: per-day common shock plus a gridpoint-specific one.
double weibull_speed(double mean_ms, double z) {
  constexpr double kGammaHalf = 0.8862269254527580;  // Gamma(1.5)
  double u = norm_cdf(z);
  u = std::min(std::max(u, 1e-12), 1.0 - 1e-12);
  double lambda = mean_ms / kGammaHalf;
  return lambda * std::sqrt(-std::log1p(-u));
}

GridSeries make_series(ClimateVariable v, Sampling sampling, const Date& start,
                       Eigen::MatrixXd values) {
  GridSeries s;
  s.variable = v;
  s.sampling = sampling;
  s.start = utc_hour(start);
  for (const auto& g : kGrid) s.gridpoint_ids.push_back(g.id);
  s.values = std::move(values);
  return s;
}

DemandModelParams true_demand_params() {
  DemandModelParams p;
  p.t_heat_c = 9.5;
  p.t_cool_c = 13.0;
  for (int h = 0; h < 24; ++h) {
    p.cycles(0, h) = 1.0 + 0.18 * std::cos(2.0 * kPi * (h - 13.0) / 24.0) +
                     0.07 * std::cos(4.0 * kPi * (h - 9.0) / 24.0);
    p.cycles(1, h) = 1.0 + 0.12 * std::cos(2.0 * kPi * (h - 12.0) / 24.0);
    p.cycles(2, h) = 1.0 + 0.10 * std::cos(2.0 * kPi * (h - 14.0) / 24.0);
  }
  p.zones = {ZoneId{"NORD"}, ZoneId{"SUD"}};

  ZoneDemandCoeffs nord;
  nord.a << 120.0, 180.0, 16000.0,   // work: heat, cool, level
      110.0, 150.0, 14500.0,         // saturday
      95.0, 130.0, 13000.0;          // sunday/holiday
  nord.noise_std_mw = 320.0;
  nord.demand_floor_mw = 100.0;
  p.coeffs["NORD"] = nord;

  ZoneDemandCoeffs sud;
  sud.a << 60.0, 110.0, 8000.0,
      55.0, 95.0, 7300.0,
      48.0, 80.0, 6600.0;
  sud.noise_std_mw = 160.0;
  sud.demand_floor_mw = 50.0;
  p.coeffs["SUD"] = sud;

  p.validate();
  return p;
}

void write_holidays(const fs::path& path) {
  // Italian national holidays 2008-2010, Easter Monday included.
  const std::vector<std::string> dates = {
      "2008-01-01", "2008-01-06", "2008-03-24", "2008-04-25", "2008-05-01",
      "2008-06-02", "2008-08-15", "2008-11-01", "2008-12-08", "2008-12-25",
      "2008-12-26",
      "2009-01-01", "2009-01-06", "2009-04-13", "2009-04-25", "2009-05-01",
      "2009-06-02", "2009-08-15", "2009-11-01", "2009-12-08", "2009-12-25",
      "2009-12-26",
      "2010-01-01", "2010-01-06", "2010-04-05", "2010-04-25", "2010-05-01",
      "2010-06-02", "2010-08-15", "2010-11-01", "2010-12-08", "2010-12-25",
      "2010-12-26",
  };
  CsvWriter csv(path);
  csv.row({"date"});
  for (const auto& d : dates) csv.row({d});
  csv.commit();
}

void write_component_table(const fs::path& path, const char* value_column,
                           const std::map<std::string, double>& rows) {
  CsvWriter csv(path);
  csv.row({"zone", "technology", value_column});
  for (const auto& [key, value] : rows) {
    auto slash = key.find('/');
    csv.row({key.substr(0, slash), key.substr(slash + 1),
             format_double(value)});
  }
  csv.commit();
}

const char* kConfigTemplate = R"INI(# Toy-Italy study: two zones, three gridpoints, 2008-2010 daily climate.
[study]
zones = NORD, SUD
technologies = pv, wind
seed = 42
metadata_file = grid_metadata.csv
holidays_file = holidays.csv
cf_targets_file = cf_targets.csv
capacities_file = capacities.csv

[wind]
speed_file = wind_speed_daily.csv
temperature_file = temperature_daily.csv
pressure_file = pressure_daily.csv
humidity_file = humidity_daily.csv
power_curve_file = power_curve.csv
training_speed_file = wind_speed_training_hourly.csv
sampling = daily

[pv]
irradiance_file = irradiance_daily.csv
temperature_file = temperature_daily.csv
wind_file = wind_speed_daily.csv
sampling = daily

[demand]
observations_file = demand_observed.csv
temperature_file = temperature_daily.csv
cv_blocks = 3

[optimizer]
total_capacity_mw = 27700
strategy = all

[analysis]
)INI";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Writes the bundled toy-Italy fixture dataset"};
  std::string dir;
  std::uint64_t seed = 7;
  app.add_option("--dir", dir, "Target directory")->required();
  app.add_option("--seed", seed, "Fixture generation seed (default 7)");
  CLI11_PARSE(app, argc, argv);

  try {
    fs::create_directories(dir);
    const fs::path out(dir);

    // Grid metadata.
    GridMetadata meta;
    for (const auto& g : kGrid)
      meta.points.push_back({g.id, g.lat, g.lon, ZoneId{g.zone}});
    save_grid_metadata(meta, out / "grid_metadata.csv");

    const std::int64_t first_day = days_from_epoch(kStart);
    const std::int64_t n_days = days_from_epoch(kEnd) - first_day + 1;
    const auto rows = Eigen::Index(n_days);
    const auto cols = Eigen::Index(kGrid.size());

    // Zone temperature paths, exported per gridpoint so the unweighted zone
    // mean reproduces the path exactly (paired offsets within NORD).
    std::map<std::string, DailySeries> zone_temps;
    zone_temps["NORD"] = DailySeries{kStart, std::vector<double>()};
    zone_temps["SUD"] = DailySeries{kStart, std::vector<double>()};
    Eigen::MatrixXd temperature_k(rows, cols);
    for (std::int64_t d = 0; d < n_days; ++d) {
      Date date = date_from_epoch_days(first_day + d);
      double nord = zone_temperature_c("NORD", date, seed, d);
      double sud = zone_temperature_c("SUD", date, seed, d);
      zone_temps["NORD"].values.push_back(nord);
      zone_temps["SUD"].values.push_back(sud);
      double offset = 0.5 + 0.3 * std::abs(std::sin(double(d)));
      temperature_k(d, 0) = nord + offset + 273.15;
      temperature_k(d, 1) = nord - offset + 273.15;
      temperature_k(d, 2) = sud + 273.15;
    }
    save_grid_series(make_series(ClimateVariable::Temperature2m,
                                 Sampling::Daily, kStart, temperature_k),
                     out / "temperature_daily.csv");

    // Daily wind speed, surface pressure, specific humidity.
    Eigen::MatrixXd speed(rows, cols), pressure(rows, cols),
        humidity(rows, cols);
    for (std::int64_t d = 0; d < n_days; ++d) {
      Date date = date_from_epoch_days(first_day + d);
      Rng common(Rng::key(seed, {Rng::label("wind-common"), std::uint64_t(d)}));
      double shared = common.normal();
      for (Eigen::Index g = 0; g < cols; ++g) {
        Rng rng(Rng::key(seed, {Rng::label("wind-daily"), std::uint64_t(g),
                                std::uint64_t(d)}));
        double z = std::sqrt(0.6) * shared + std::sqrt(0.4) * rng.normal();
        speed(d, g) = weibull_speed(wind_mean_ms(kGrid[std::size_t(g)], date), z);

        Rng met(Rng::key(seed, {Rng::label("met"), std::uint64_t(g),
                                std::uint64_t(d)}));
        double doy = double(day_of_year(date));
        pressure(d, g) = 101325.0 + 400.0 * std::sin(2.0 * kPi * doy / 365.25) +
                         100.0 * met.normal();
        double q = 0.006 + 0.002 * std::sin(2.0 * kPi * (doy - 170.0) / 365.25) +
                   0.0003 * met.normal();
        humidity(d, g) = std::min(std::max(q, 0.003), 0.012);
      }
    }
    save_grid_series(make_series(ClimateVariable::WindSpeed10m, Sampling::Daily,
                                 kStart, speed),
                     out / "wind_speed_daily.csv");
    save_grid_series(make_series(ClimateVariable::SurfacePressure,
                                 Sampling::Daily, kStart, pressure),
                     out / "pressure_daily.csv");
    save_grid_series(make_series(ClimateVariable::SpecificHumidity,
                                 Sampling::Daily, kStart, humidity),
                     out / "humidity_daily.csv");

    // Daily-mean surface irradiance from a seasonal clearness index.
    Eigen::MatrixXd irradiance(rows, cols);
    for (std::int64_t d = 0; d < n_days; ++d) {
      Date date = date_from_epoch_days(first_day + d);
      double doy = double(day_of_year(date));
      for (Eigen::Index g = 0; g < cols; ++g) {
        const Gridpoint& gp = kGrid[std::size_t(g)];
        Rng rng(Rng::key(seed, {Rng::label("clearness"), std::uint64_t(g),
                                std::uint64_t(d)}));
        double kt = 0.5 + 0.15 * std::sin(2.0 * kPi * (doy - 172.0) / 365.25) +
                    0.08 * rng.normal();
        kt = std::min(std::max(kt, 0.25), 0.75);
        irradiance(d, g) =
            kt * daily_extraterrestrial_mean(date, gp.lat, gp.lon);
      }
    }
    save_grid_series(make_series(ClimateVariable::SurfaceIrradiance,
                                 Sampling::Daily, kStart, irradiance),
                     out / "irradiance_daily.csv");

    // Hourly training wind: the first kTrainingDays, same copula structure
    // hour by hour, anchored to the day's mean.
    Eigen::MatrixXd training(Eigen::Index(kTrainingDays) * 24, cols);
    for (std::int64_t d = 0; d < kTrainingDays; ++d) {
      Date date = date_from_epoch_days(first_day + d);
      for (int h = 0; h < 24; ++h) {
        Rng common(Rng::key(seed, {Rng::label("train-common"),
                                   std::uint64_t(d), std::uint64_t(h)}));
        double shared = common.normal();
        for (Eigen::Index g = 0; g < cols; ++g) {
          Rng rng(Rng::key(seed, {Rng::label("train"), std::uint64_t(g),
                                  std::uint64_t(d), std::uint64_t(h)}));
          double z = std::sqrt(0.6) * shared + std::sqrt(0.4) * rng.normal();
          training(d * 24 + h, g) =
              weibull_speed(wind_mean_ms(kGrid[std::size_t(g)], date), z);
        }
      }
    }
    save_grid_series(make_series(ClimateVariable::WindSpeed10m,
                                 Sampling::Hourly, kStart, training),
                     out / "wind_speed_training_hourly.csv");

    // Turbine curve, calendars, component tables.
    PowerCurve::swt23_101().save(out / "power_curve.csv");
    write_holidays(out / "holidays.csv");
    write_component_table(out / "cf_targets.csv", "mean_cf",
                          {{"NORD/pv", 0.121},
                           {"NORD/wind", 0.204},
                           {"SUD/pv", 0.156},
                           {"SUD/wind", 0.209}});
    write_component_table(out / "capacities.csv", "capacity_mw",
                          {{"NORD/pv", 12000.0},
                           {"NORD/wind", 1500.0},
                           {"SUD/pv", 6800.0},
                           {"SUD/wind", 7400.0}});

    // Demand observations drawn from the known response model.
    HolidayCalendar holidays = load_holidays(out / "holidays.csv");
    DemandModelParams truth = true_demand_params();
    auto observed = predict_demand(truth, zone_temps, holidays, true,
                                   Rng::key(seed, {Rng::label("obs")}));
    save_zonal_demand(observed, out / "demand_observed.csv");

    write_text_atomic(out / "config.ini", kConfigTemplate);

    std::cout << "fixture written to " << out.string() << ": " << n_days
              << " days, " << kGrid.size() << " gridpoints, "
              << kTrainingDays << " training days\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "[vremix-fixture] error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "[vremix-fixture] internal error: " << e.what() << "\n";
    return 1;
  }
}
