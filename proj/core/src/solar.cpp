#include "vremix/solar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vremix/errors.hpp"

namespace vremix {

namespace {

constexpr double kSolarConstantWm2 = 1367.0;
constexpr double kDeg = std::numbers::pi / 180.0;

// Reduced two-predictor diffuse-fraction coefficients (interval bounds 0.3
// and 0.78). Each row is {intercept, k_T slope, sin(elevation) slope}.
constexpr double kDiffuseLow[3] = {1.020, -0.254, 0.0123};
constexpr double kDiffuseMid[3] = {1.400, -1.749, 0.177};
constexpr double kDiffuseHigh[3] = {0.0, 0.486, -0.182};
constexpr double kDiffuseMidMin = 0.1;
constexpr double kDiffuseMidMax = 0.97;
constexpr double kDiffuseHighMin = 0.1;

// Spencer series; returns minutes.
double equation_of_time_min(int day_of_year_n) {
  double b = 2.0 * std::numbers::pi * (day_of_year_n - 1) / 365.0;
  return 229.18 * (0.000075 + 0.001868 * std::cos(b) - 0.032077 * std::sin(b) -
                   0.014615 * std::cos(2.0 * b) - 0.04089 * std::sin(2.0 * b));
}

}  // namespace

void PvConstants::validate() const {
  if (!(nominal_power_w > 0.0) || !(module_area_m2 > 0.0) ||
      !(system_efficiency > 0.0) || !(temperature_coefficient_per_k > 0.0) ||
      !(noct_c > 0.0))
    throw ConfigError("pv constants must be positive");
  if (!(reference_efficiency > 0.0 && reference_efficiency < 1.0))
    throw ConfigError("pv reference efficiency must lie in (0,1)");
  if (!(albedo >= 0.0 && albedo <= 1.0))
    throw ConfigError("pv albedo must lie in [0,1]");
}

SolarPosition solar_position(const Date& date, double hour_utc, double lat_deg,
                             double lon_deg, double tilt_deg) {
  int n = day_of_year(date);
  SolarPosition pos;
  pos.eccentricity = 1.0 + 0.033 * std::cos(2.0 * std::numbers::pi * n / 365.0);
  pos.declination =
      23.45 * kDeg * std::sin(2.0 * std::numbers::pi * (284 + n) / 365.0);

  double solar_time_h =
      hour_utc + lon_deg / 15.0 + equation_of_time_min(n) / 60.0;
  pos.hour_angle = 15.0 * kDeg * (solar_time_h - 12.0);

  double phi = lat_deg * kDeg;
  double cz = std::sin(phi) * std::sin(pos.declination) +
              std::cos(phi) * std::cos(pos.declination) * std::cos(pos.hour_angle);
  pos.cos_zenith = std::clamp(cz, -1.0, 1.0);
  pos.elevation = std::numbers::pi / 2.0 - std::acos(pos.cos_zenith);

  // Equator-facing plane: effective latitude phi - sign(phi)*beta.
  double beta = tilt_deg * kDeg;
  double eff = phi >= 0.0 ? phi - beta : phi + beta;
  pos.cos_incidence =
      std::cos(eff) * std::cos(pos.declination) * std::cos(pos.hour_angle) +
      std::sin(eff) * std::sin(pos.declination);
  return pos;
}

double extraterrestrial_hourly(const Date& date, int hour, double lat_deg,
                               double lon_deg) {
  SolarPosition pos = solar_position(date, hour + 0.5, lat_deg, lon_deg, 0.0);
  if (pos.cos_zenith <= 0.0) return 0.0;
  return kSolarConstantWm2 * pos.eccentricity * pos.cos_zenith;
}

double daily_extraterrestrial_mean(const Date& date, double lat_deg,
                                   double lon_deg) {
  double sum = 0.0;
  for (int h = 0; h < 24; ++h)
    sum += extraterrestrial_hourly(date, h, lat_deg, lon_deg);
  return sum / 24.0;
}

double clearness_index(double daily_surface_wm2, double daily_extra_wm2) {
  if (daily_surface_wm2 < 0.0)
    throw DomainError("clearness_index: negative surface irradiance");
  if (daily_extra_wm2 <= 0.0) return 0.0;
  return std::clamp(daily_surface_wm2 / daily_extra_wm2, 0.0, 1.0);
}

double hourly_surface_irradiance(double k_t, double i0_hourly_wm2) {
  return k_t * i0_hourly_wm2;
}

double diffuse_fraction(double k_t, double sin_elevation) {
  if (!(k_t >= 0.0 && k_t <= 1.0))
    throw DomainError("diffuse_fraction: k_T outside [0,1]");
  if (!(sin_elevation >= -1.0 && sin_elevation <= 1.0))
    throw DomainError("diffuse_fraction: sin(elevation) outside [-1,1]");
  double d;
  if (k_t <= 0.3) {
    d = kDiffuseLow[0] + kDiffuseLow[1] * k_t + kDiffuseLow[2] * sin_elevation;
    d = std::min(d, 1.0);
  } else if (k_t < 0.78) {
    d = kDiffuseMid[0] + kDiffuseMid[1] * k_t + kDiffuseMid[2] * sin_elevation;
    d = std::clamp(d, kDiffuseMidMin, kDiffuseMidMax);
  } else {
    d = kDiffuseHigh[1] * k_t + kDiffuseHigh[2] * sin_elevation;
    d = std::max(d, kDiffuseHighMin);
  }
  return std::clamp(d, 0.0, 1.0);
}

TiltedIrradiance tilted_irradiance(double global_wm2, double diffuse_wm2,
                                   double direct_wm2, const SolarPosition& pos,
                                   double albedo, double tilt_deg,
                                   double extraterrestrial_wm2,
                                   double elevation_cutoff_deg) {
  if (global_wm2 < 0.0 || diffuse_wm2 < 0.0 || direct_wm2 < 0.0)
    throw DomainError("tilted_irradiance: negative component");
  if (std::fabs(global_wm2 - (diffuse_wm2 + direct_wm2)) >
      1e-9 * std::max(1.0, global_wm2))
    throw DomainError(
        "tilted_irradiance: direct + diffuse does not equal global");

  TiltedIrradiance out;
  if (global_wm2 == 0.0) return out;

  double beta = tilt_deg * kDeg;
  bool sun_usable = pos.elevation >= elevation_cutoff_deg * kDeg &&
                    pos.cos_incidence > 0.0 && pos.cos_zenith > 0.0;

  double rb = sun_usable ? pos.cos_incidence / pos.cos_zenith : 0.0;
  // Anisotropy index: share of diffuse treated as circumsolar. Zeroed along
  // with the direct component so R_b never multiplies grazing geometry.
  double anisotropy = 0.0;
  if (sun_usable && extraterrestrial_wm2 > 0.0)
    anisotropy = std::clamp(direct_wm2 / extraterrestrial_wm2, 0.0, 1.0);
  double brightening =
      1.0 + std::sqrt(direct_wm2 / global_wm2) *
                std::pow(std::sin(beta / 2.0), 3.0);
  double view_factor = (1.0 + std::cos(beta)) / 2.0;

  out.direct_wm2 = sun_usable ? direct_wm2 * rb : 0.0;
  out.diffuse_wm2 = diffuse_wm2 * (anisotropy * rb +
                                   (1.0 - anisotropy) * view_factor * brightening);
  out.reflected_wm2 = global_wm2 * albedo * (1.0 - std::cos(beta)) / 2.0;
  out.total_wm2 = std::max(
      out.direct_wm2 + out.diffuse_wm2 + out.reflected_wm2, 0.0);
  return out;
}

double cell_temperature(double t_air_k, double wind_ms, double g_t_wm2,
                        const PvConstants& c) {
  if (!(g_t_wm2 >= 0.0)) throw DomainError("cell_temperature: negative G_T");
  if (!(wind_ms >= 0.0)) throw DomainError("cell_temperature: negative wind");
  double rise = (g_t_wm2 / 800.0) * (c.noct_c - 20.0) *
                (9.5 / (5.7 + 3.8 * wind_ms)) *
                (1.0 - c.reference_efficiency / 0.9);
  return t_air_k + rise;
}

double pv_power(double g_t_wm2, double t_cell_k, const PvConstants& c) {
  if (!(g_t_wm2 >= 0.0)) throw DomainError("pv_power: negative G_T");
  double t_ref_k = c.reference_temperature_c + 273.15;
  double efficiency = c.reference_efficiency *
                      (1.0 - c.temperature_coefficient_per_k * (t_cell_k - t_ref_k));
  double p = efficiency * g_t_wm2 * c.module_area_m2 * c.system_efficiency;
  return std::clamp(p, 0.0, c.nominal_power_w);
}

namespace {

void check_solar_fields(const SolarFields& f) {
  const Eigen::Index g = Eigen::Index(f.gridpoint_ids.size());
  if (f.irradiance_wm2.cols() != g || Eigen::Index(f.lat_deg.size()) != g ||
      Eigen::Index(f.lon_deg.size()) != g)
    throw ValidationError("solar fields: column/id/coordinate count mismatch");
  if (f.irradiance_wm2.rows() == 0)
    throw ValidationError("solar fields: empty irradiance series");
  if ((f.irradiance_wm2.array() < 0.0).any())
    throw ValidationError("solar fields: negative irradiance");
  if (!f.daily && f.irradiance_wm2.rows() % 24 != 0)
    throw ValidationError("solar fields: hourly series must span whole days");
  if (hour_of_day(f.start) != 0)
    throw ValidationError("solar fields: series must start at hour 00");
  Eigen::Index days =
      f.daily ? f.irradiance_wm2.rows() : f.irradiance_wm2.rows() / 24;
  auto rows_ok = [&](const Eigen::MatrixXd& m) {
    return m.cols() == g && (m.rows() == days || m.rows() == days * 24);
  };
  if (!rows_ok(f.temperature_k) || !rows_ok(f.wind_ms))
    throw ValidationError(
        "solar fields: temperature/wind must have one row per day or hour");
  if ((f.temperature_k.array() <= 0.0).any())
    throw ValidationError("solar fields: nonpositive temperature");
  if ((f.wind_ms.array() < 0.0).any())
    throw ValidationError("solar fields: negative wind speed");
}

}  // namespace

GridPower hourly_pv_power(const SolarFields& fields, const PvConstants& c) {
  c.validate();
  check_solar_fields(fields);
  const Eigen::Index g_count = Eigen::Index(fields.gridpoint_ids.size());
  const Eigen::Index days =
      fields.daily ? fields.irradiance_wm2.rows() : fields.irradiance_wm2.rows() / 24;

  GridPower out;
  out.start = fields.start;
  out.gridpoint_ids = fields.gridpoint_ids;
  out.power_w.resize(days * 24, g_count);

  const std::int64_t first_day = fields.start.count / 24;
  for (Eigen::Index d = 0; d < days; ++d) {
    Date date = date_from_epoch_days(first_day + d);
    for (Eigen::Index g = 0; g < g_count; ++g) {
      double lat = fields.lat_deg[std::size_t(g)];
      double lon = fields.lon_deg[std::size_t(g)];
      double tilt = std::fabs(lat);

      double i0[24];
      for (int h = 0; h < 24; ++h)
        i0[h] = extraterrestrial_hourly(date, h, lat, lon);

      double kt_daily = 0.0;
      if (fields.daily) {
        double i0_mean = 0.0;
        for (int h = 0; h < 24; ++h) i0_mean += i0[h];
        i0_mean /= 24.0;
        kt_daily = clearness_index(fields.irradiance_wm2(d, g), i0_mean);
      }

      for (int h = 0; h < 24; ++h) {
        Eigen::Index t = d * 24 + h;
        double irr, kt;
        if (fields.daily) {
          kt = kt_daily;
          irr = hourly_surface_irradiance(kt, i0[h]);
        } else {
          irr = fields.irradiance_wm2(t, g);
          kt = i0[h] > 0.0 ? std::clamp(irr / i0[h], 0.0, 1.0) : 0.0;
        }

        SolarPosition pos = solar_position(date, h + 0.5, lat, lon, tilt);
        double dfrac = diffuse_fraction(kt, std::sin(pos.elevation));
        double diffuse = dfrac * irr;
        double direct = irr - diffuse;
        TiltedIrradiance tilted =
            tilted_irradiance(irr, diffuse, direct, pos, c.albedo, tilt, i0[h],
                              c.elevation_cutoff_deg);

        double t_air = fields.temperature_k.rows() == days
                           ? fields.temperature_k(d, g)
                           : fields.temperature_k(t, g);
        double wind = fields.wind_ms.rows() == days ? fields.wind_ms(d, g)
                                                    : fields.wind_ms(t, g);
        double t_cell = cell_temperature(t_air, wind, tilted.total_wm2, c);
        out.power_w(t, g) = pv_power(tilted.total_wm2, t_cell, c);
      }
    }
  }
  return out;
}

}  // namespace vremix
