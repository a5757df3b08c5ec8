#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "vremix/series.hpp"

namespace vremix {

class IntradaySampler;

/// Turbine transfer function: piecewise-linear table of (speed, power) knots.
/// Power is exactly zero below cut_in and at or beyond cut_out, and never
/// exceeds nominal_power.
class PowerCurve {
 public:
  PowerCurve(std::vector<double> speeds_ms, std::vector<double> powers_w,
             double nominal_power_w, double cut_in_ms, double cut_out_ms);

  /// Approximation of the Siemens SWT-2.3-101 (2.3 MW, cut-in 3 m/s,
  /// rated ~12 m/s, cut-out 25 m/s); the default shipped curve.
  static PowerCurve swt23_101();

  /// CSV `speed_ms,power_w` with `#`-prefixed metadata lines carrying
  /// nominal_power_w, cut_in_ms, cut_out_ms.
  static PowerCurve load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  double operator()(double speed_ms) const;

  double nominal_power_w() const { return nominal_power_w_; }
  double cut_in_ms() const { return cut_in_ms_; }
  double cut_out_ms() const { return cut_out_ms_; }
  const std::vector<double>& speeds() const { return speeds_; }
  const std::vector<double>& powers() const { return powers_; }

 private:
  std::vector<double> speeds_;
  std::vector<double> powers_;
  double nominal_power_w_;
  double cut_in_ms_;
  double cut_out_ms_;
};

/// Inputs of the moist-air ideal gas law.
struct DensityInputs {
  double temperature_k = 0.0;
  double pressure_pa = 0.0;
  double specific_humidity = 0.0;  // kg/kg
};

/// Wind-chain constants; defaults follow the hub and exponent used throughout.
struct WindModelConfig {
  double hub_height_m = 101.0;
  double reference_height_m = 10.0;
  double power_law_exponent = 1.0 / 7.0;
  double rho0_kg_m3 = 1.225;
};

/// Power-law vertical extrapolation v_hub = v_ref * (z_hub/z_ref)^exponent.
double extrapolate_hub_height(double speed_ref_ms, double z_ref_m,
                              double z_hub_m, double exponent);

/// rho = p / (R_d * T_v), T_v = T * (1 + 0.608 q), R_d = 287.058 J/(kg K).
double air_density(const DensityInputs& in);

/// Speed equivalent of the density correction: v * (rho/rho0)^(1/3).
/// Applied to the speed (not the power) so cut-in/cut-out are preserved.
double density_corrected_speed(double v_hub_ms, double rho, double rho0);

/// Per-gridpoint power matrix: rows = hours, cols = gridpoints.
struct GridPower {
  UtcHour start;
  std::vector<std::string> gridpoint_ids;
  Eigen::MatrixXd power_w;
};

/// Per-gridpoint wind fields feeding the chain. `speed` may be Hourly or
/// Daily (rows = steps, cols = gridpoints, same id order everywhere).
/// Density fields are daily means; when absent, rho = rho0 (no correction).
struct WindFields {
  bool daily = true;
  UtcHour start;  // midnight of the first day (Daily) or first hour (Hourly)
  std::vector<std::string> gridpoint_ids;
  Eigen::MatrixXd speed_ms;                      // steps x gridpoints
  std::optional<Eigen::MatrixXd> temperature_k;  // days x gridpoints
  std::optional<Eigen::MatrixXd> pressure_pa;
  std::optional<Eigen::MatrixXd> specific_humidity;
};

/// Full chain: extrapolate to hub height, density-correct with the day's
/// mean density, transfer through the power curve. Daily input is expanded
/// to 24 correlated hourly speeds per day by the sampler (required then);
/// the daily-mean density correction is applied to each sampled hour.
GridPower hourly_wind_power(const WindFields& fields, const PowerCurve& curve,
                            const WindModelConfig& config,
                            const IntradaySampler* sampler, std::uint64_t seed);

}  // namespace vremix
