#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vremix/series.hpp"
#include "vremix/solar.hpp"
#include "vremix/time.hpp"

namespace vremix {

/// Sectioned key-value file: `[section]` headers, `key = value` lines,
/// whole-line comments starting with '#' or ';'. Keys are tracked as they
/// are read so unknown keys can be rejected wholesale.
class ConfigFile {
 public:
  static ConfigFile load(const std::filesystem::path& path);
  static ConfigFile from_string(const std::string& text,
                                const std::string& label = "<string>");

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key);
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback);
  double get_double(const std::string& section, const std::string& key);
  double get_double(const std::string& section, const std::string& key,
                    double fallback);
  std::int64_t get_int(const std::string& section, const std::string& key,
                       std::int64_t fallback);
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback);
  std::optional<std::string> get_optional(const std::string& section,
                                          const std::string& key);

  /// Throws ConfigError when any key was never read or a section is unknown.
  void reject_unknown(const std::vector<std::string>& known_sections) const;

  /// The file the values came from ("<string>" for in-memory configs).
  const std::string& source() const { return source_; }

  /// Raw sections, for serialization into run manifests.
  const std::map<std::string, std::map<std::string, std::string>>& sections()
      const {
    return sections_;
  }

 private:
  std::string value_or_throw(const std::string& section,
                             const std::string& key);

  std::string source_;
  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::map<std::string, std::map<std::string, bool>> read_;
};

/// Wind-chain configuration and input paths.
struct WindConfig {
  std::string speed_file;  // either this or both component files
  std::string u_file;
  std::string v_file;
  std::string temperature_file;  // density trio: all present or all absent
  std::string pressure_file;
  std::string humidity_file;
  std::string power_curve_file;
  std::string intraday_shape_file;        // fitted marginals
  std::string intraday_correlation_file;  // fitted copula correlation
  std::string training_speed_file;        // hourly speeds for fitting
  Sampling sampling = Sampling::Daily;
  double hub_height_m = 101.0;
  double reference_height_m = 10.0;
  double shear_exponent = 1.0 / 7.0;

  bool density_correction() const { return !temperature_file.empty(); }
};

/// PV-chain configuration and input paths.
struct PvConfig {
  std::string irradiance_file;
  std::string temperature_file;
  std::string wind_file;
  Sampling sampling = Sampling::Daily;
  PvConstants constants;
};

/// Demand-model configuration and input paths.
struct DemandConfig {
  std::string observations_file;  // hourly zonal demand used for fitting
  std::string temperature_file;   // gridpoint temperature for zone means
  std::string params_file;        // fitted-parameter bundle prefix
  double t_heat_min_c = 5.0;
  double t_heat_max_c = 15.0;
  double t_cool_min_c = 10.0;
  double t_cool_max_c = 20.0;
  double grid_step_c = 0.5;
  int cv_blocks = 7;
  double ridge_tol = 1e-8;
  int ridge_max_iter = 300;
  bool sampled = true;  // predict with posterior noise by default
};

/// Frontier-computation configuration.
struct OptimizerConfig {
  double step = 0.001;
  double mu_max_cap = 1.0;  // penetration cap replacing the unbounded u_of2
  std::optional<double> total_capacity_mw;  // absent = unconstrained
  std::vector<Strategy> strategies;         // default: all three
  double dominance_tol = 1e-9;
  std::string demand_file;  // predicted hourly zonal demand
  std::string cf_file;      // predicted hourly zonal capacity factors
};

/// Diagnostics configuration.
struct AnalysisConfig {
  double conv_share = 0.8;  // conventional park covers this share of peak
  double sat_share = 0.4;   // saturation above this share of demand
  std::optional<double> reference_risk;
  std::string demand_file;
  std::string cf_file;
  std::string frontier_file;
  std::string mix_file;
  std::vector<std::string> spectrum_files;
  int year_window_days = 365;
  int day_window_hours = 24;
};

/// Whole-study configuration assembled from the sectioned file.
struct StudyConfig {
  std::vector<ZoneId> zones;
  std::vector<TechId> technologies{{"pv"}, {"wind"}};
  std::uint64_t seed = 42;
  std::optional<Date> period_start;  // inclusive bounds on the study period
  std::optional<Date> period_end;
  std::string metadata_file;
  std::string holidays_file;
  std::string cf_targets_file;
  std::string capacities_file;

  WindConfig wind;
  PvConfig pv;
  DemandConfig demand;
  OptimizerConfig optimizer;
  AnalysisConfig analysis;

  /// Ordered (zone, technology) component layout of the study.
  ComponentIndex component_index() const;

  void validate() const;
};

/// Parses and validates the full study configuration; unknown sections or
/// keys raise ConfigError naming them.
StudyConfig load_study_config(const std::filesystem::path& path);
StudyConfig parse_study_config(ConfigFile& file);

/// Splits on commas and trims whitespace; empty items rejected.
std::vector<std::string> split_list(const std::string& text,
                                    const std::string& context);

}  // namespace vremix
