#pragma once

#include <Eigen/Core>
#include <vector>

#include "vremix/series.hpp"
#include "vremix/wind.hpp"

namespace vremix {

/// Module-level PV constants. Defaults describe a 250 W multi-crystalline
/// module at NOCT 46 C with a 0.4 %/K power temperature coefficient behind
/// an 86 %-efficient balance of system.
struct PvConstants {
  double nominal_power_w = 250.0;
  double module_area_m2 = 1.675;
  double reference_efficiency = 250.0 / (1.675 * 1000.0);
  double temperature_coefficient_per_k = 0.004;
  double reference_temperature_c = 25.0;
  double noct_c = 46.0;
  double system_efficiency = 0.86;
  double albedo = 0.2;
  double elevation_cutoff_deg = 10.0;

  void validate() const;
};

/// Sun/panel geometry at one instant, for an equator-facing plane.
/// Angles in radians.
struct SolarPosition {
  double declination = 0.0;
  double hour_angle = 0.0;
  double cos_zenith = 0.0;
  double elevation = 0.0;      // pi/2 - zenith
  double cos_incidence = 0.0;  // on the tilted plane
  double eccentricity = 1.0;   // orbit factor E0
};

/// Geometry at a UTC instant (fractional hour). Solar time uses the
/// longitude offset plus the Spencer equation of time; the plane is tilted
/// by `tilt_deg` toward the equator.
SolarPosition solar_position(const Date& date, double hour_utc, double lat_deg,
                             double lon_deg, double tilt_deg);

/// Horizontal extraterrestrial irradiance for the hour slot [hour, hour+1)
/// UTC, sampled at the half hour: G_sc * E0 * cos(zenith), 0 at night.
double extraterrestrial_hourly(const Date& date, int hour, double lat_deg,
                               double lon_deg);

/// Mean of the 24 hourly extraterrestrial values of the date.
double daily_extraterrestrial_mean(const Date& date, double lat_deg,
                                   double lon_deg);

/// K_T = daily surface mean / daily extraterrestrial mean, clipped to [0,1];
/// 0 by convention when the extraterrestrial mean is 0 (polar night).
double clearness_index(double daily_surface_wm2, double daily_extra_wm2);

/// Hourly surface irradiance reconstructed from a constant daily K_T.
double hourly_surface_irradiance(double k_t, double i0_hourly_wm2);

/// Reduced two-predictor diffuse-fraction correlation, piecewise in k_T with
/// breaks at 0.3 and 0.78 and the published clamps; result clipped to [0,1].
double diffuse_fraction(double k_t, double sin_elevation);

/// Irradiance on the tilted plane, by component.
struct TiltedIrradiance {
  double total_wm2 = 0.0;
  double direct_wm2 = 0.0;
  double diffuse_wm2 = 0.0;
  double reflected_wm2 = 0.0;
};

/// Transposition to the tilted plane: direct via R_b = cos(theta)/cos(theta_z)
/// (zeroed below the elevation cutoff and when the sun is behind the array),
/// diffuse via the anisotropic HDKR combination (circumsolar share
/// A_i = direct/extraterrestrial, horizon brightening sqrt(direct/global)),
/// ground reflection I * albedo * (1-cos beta)/2.
TiltedIrradiance tilted_irradiance(double global_wm2, double diffuse_wm2,
                                   double direct_wm2, const SolarPosition& pos,
                                   double albedo, double tilt_deg,
                                   double extraterrestrial_wm2,
                                   double elevation_cutoff_deg);

/// NOCT cell-temperature model with wind-dependent heat removal:
/// T_cell = T_air + (G_T/800)(NOCT-20)(9.5/(5.7+3.8 v))(1 - eta_ref/0.9).
double cell_temperature(double t_air_k, double wind_ms, double g_t_wm2,
                        const PvConstants& c);

/// Module DC power behind the system efficiency:
/// P = eta_ref (1 - gamma (T_cell - T_ref)) G_T A eta_sys, in [0, nominal].
double pv_power(double g_t_wm2, double t_cell_k, const PvConstants& c);

/// Per-gridpoint solar inputs. Irradiance is a daily mean (daily = true) or
/// hourly values; temperature and wind rows may be per day (held constant
/// over the day) or per hour.
struct SolarFields {
  bool daily = true;
  UtcHour start;  // midnight of the first day (Daily) or first hour (Hourly)
  std::vector<std::string> gridpoint_ids;
  std::vector<double> lat_deg;
  std::vector<double> lon_deg;
  Eigen::MatrixXd irradiance_wm2;  // steps x gridpoints
  Eigen::MatrixXd temperature_k;   // days-or-steps x gridpoints
  Eigen::MatrixXd wind_ms;         // days-or-steps x gridpoints
};

/// Full chain per gridpoint and hour: geometry, clearness index, diffuse
/// split, transposition to a plane tilted at |latitude|, thermal derating.
/// Output in W per module.
GridPower hourly_pv_power(const SolarFields& fields, const PvConstants& c);

}  // namespace vremix
