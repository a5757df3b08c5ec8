#include "vremix/wind.hpp"

#include <cmath>

#include "vremix/csv.hpp"
#include "vremix/errors.hpp"
#include "vremix/intraday.hpp"
#include "vremix/time.hpp"

namespace vremix {

PowerCurve::PowerCurve(std::vector<double> speeds_ms,
                       std::vector<double> powers_w, double nominal_power_w,
                       double cut_in_ms, double cut_out_ms)
    : speeds_(std::move(speeds_ms)),
      powers_(std::move(powers_w)),
      nominal_power_w_(nominal_power_w),
      cut_in_ms_(cut_in_ms),
      cut_out_ms_(cut_out_ms) {
  if (speeds_.size() != powers_.size() || speeds_.size() < 2)
    throw ValidationError("power curve needs >= 2 (speed, power) knots");
  if (!(nominal_power_w_ > 0.0))
    throw ValidationError("power curve nominal power must be positive");
  if (!(0.0 <= cut_in_ms_ && cut_in_ms_ < cut_out_ms_))
    throw ValidationError("power curve requires 0 <= cut_in < cut_out");
  for (std::size_t i = 0; i < speeds_.size(); ++i) {
    if (i > 0 && !(speeds_[i] > speeds_[i - 1]))
      throw ValidationError("power curve speeds must be strictly increasing");
    if (i > 0 && powers_[i] < powers_[i - 1])
      throw ValidationError("power curve powers must be nondecreasing");
    if (powers_[i] < 0.0 || powers_[i] > nominal_power_w_)
      throw ValidationError("power curve powers must lie in [0, nominal]");
  }
}

PowerCurve PowerCurve::swt23_101() {
  return PowerCurve(
      {3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0, 25.0},
      {0.0, 120e3, 310e3, 580e3, 940e3, 1375e3, 1790e3, 2090e3, 2250e3,
       2300e3, 2300e3},
      2300e3, 3.0, 25.0);
}

double PowerCurve::operator()(double v) const {
  if (!(v >= 0.0)) throw DomainError("turbine_power: negative speed");
  if (v < cut_in_ms_ || v >= cut_out_ms_) return 0.0;
  if (v <= speeds_.front()) return v == speeds_.front() ? powers_.front() : 0.0;
  if (v >= speeds_.back()) return powers_.back();
  std::size_t hi = 1;
  while (speeds_[hi] < v) ++hi;
  double t = (v - speeds_[hi - 1]) / (speeds_[hi] - speeds_[hi - 1]);
  double p = powers_[hi - 1] + t * (powers_[hi] - powers_[hi - 1]);
  return std::min(p, nominal_power_w_);
}

PowerCurve PowerCurve::load(const std::filesystem::path& path) {
  CsvReader reader(path);
  if (reader.header() != std::vector<std::string>{"speed_ms", "power_w"})
    throw ParseError(path.string() + ": expected header 'speed_ms,power_w'");

  double nominal = -1.0, cut_in = -1.0, cut_out = -1.0;
  for (const std::string& raw : reader.comment_lines()) {
    std::string line = raw.substr(1);  // strip '#'
    std::size_t from = line.find_first_not_of(' ');
    std::size_t eq = line.find('=');
    if (from == std::string::npos || eq == std::string::npos) continue;
    std::string key = line.substr(from, eq - from);
    while (!key.empty() && key.back() == ' ') key.pop_back();
    std::string value = line.substr(eq + 1);
    std::size_t vfrom = value.find_first_not_of(' ');
    value = vfrom == std::string::npos ? "" : value.substr(vfrom);
    if (key == "nominal_power_w")
      nominal = parse_double(value, path.string());
    else if (key == "cut_in_ms")
      cut_in = parse_double(value, path.string());
    else if (key == "cut_out_ms")
      cut_out = parse_double(value, path.string());
  }
  if (nominal < 0.0 || cut_in < 0.0 || cut_out < 0.0)
    throw ParseError(path.string() +
                     ": missing '# nominal_power_w=', '# cut_in_ms=' or "
                     "'# cut_out_ms=' metadata line");

  std::vector<double> speeds, powers;
  std::vector<std::string> fields;
  while (reader.next_row(fields)) {
    speeds.push_back(parse_double(fields[0], reader.location()));
    powers.push_back(parse_double(fields[1], reader.location()));
  }
  return PowerCurve(std::move(speeds), std::move(powers), nominal, cut_in,
                    cut_out);
}

void PowerCurve::save(const std::filesystem::path& path) const {
  CsvWriter writer(path);
  writer.comment("nominal_power_w=" + format_double(nominal_power_w_));
  writer.comment("cut_in_ms=" + format_double(cut_in_ms_));
  writer.comment("cut_out_ms=" + format_double(cut_out_ms_));
  writer.row({"speed_ms", "power_w"});
  for (std::size_t i = 0; i < speeds_.size(); ++i)
    writer.row({format_double(speeds_[i]), format_double(powers_[i])});
  writer.commit();
}

double extrapolate_hub_height(double speed_ref_ms, double z_ref_m,
                              double z_hub_m, double exponent) {
  if (!(z_ref_m > 0.0) || !(z_hub_m > 0.0))
    throw DomainError("extrapolate_hub_height: heights must be positive");
  if (!(speed_ref_ms >= 0.0))
    throw DomainError("extrapolate_hub_height: negative speed");
  return speed_ref_ms * std::pow(z_hub_m / z_ref_m, exponent);
}

double air_density(const DensityInputs& in) {
  constexpr double kDryAirGasConstant = 287.058;  // J/(kg K)
  if (!(in.temperature_k > 0.0))
    throw DomainError("air_density: temperature must be positive");
  if (!(in.pressure_pa > 0.0))
    throw DomainError("air_density: pressure must be positive");
  if (!(in.specific_humidity >= 0.0 && in.specific_humidity < 0.1))
    throw DomainError("air_density: specific humidity must lie in [0, 0.1)");
  double virtual_t = in.temperature_k * (1.0 + 0.608 * in.specific_humidity);
  return in.pressure_pa / (kDryAirGasConstant * virtual_t);
}

double density_corrected_speed(double v_hub_ms, double rho, double rho0) {
  if (!(rho > 0.0) || !(rho0 > 0.0))
    throw DomainError("density_corrected_speed: densities must be positive");
  if (!(v_hub_ms >= 0.0))
    throw DomainError("density_corrected_speed: negative speed");
  return v_hub_ms * std::cbrt(rho / rho0);
}

namespace {

double density_at(const WindFields& f, const WindModelConfig& cfg,
                  Eigen::Index day, Eigen::Index g) {
  if (!f.temperature_k) return cfg.rho0_kg_m3;
  DensityInputs in;
  in.temperature_k = (*f.temperature_k)(day, g);
  in.pressure_pa = (*f.pressure_pa)(day, g);
  in.specific_humidity = (*f.specific_humidity)(day, g);
  return air_density(in);
}

void check_fields(const WindFields& f) {
  const Eigen::Index g = Eigen::Index(f.gridpoint_ids.size());
  if (f.speed_ms.cols() != g)
    throw ValidationError("wind fields: speed columns do not match gridpoints");
  if (f.speed_ms.rows() == 0)
    throw ValidationError("wind fields: empty speed series");
  if ((f.speed_ms.array() < 0.0).any())
    throw ValidationError("wind fields: negative wind speed");
  bool t = f.temperature_k.has_value(), p = f.pressure_pa.has_value(),
       q = f.specific_humidity.has_value();
  if (t != p || p != q)
    throw ConfigError(
        "wind fields: temperature, pressure and humidity must be given "
        "together or not at all");
  Eigen::Index days =
      f.daily ? f.speed_ms.rows() : f.speed_ms.rows() / 24;
  if (!f.daily && t && (f.speed_ms.rows() % 24 != 0 || hour_of_day(f.start) != 0))
    throw ValidationError(
        "wind fields: hourly speeds must start at hour 00 and span whole days "
        "when daily density fields are supplied");
  if (t && (f.temperature_k->rows() != days || f.temperature_k->cols() != g ||
            f.pressure_pa->rows() != days || f.pressure_pa->cols() != g ||
            f.specific_humidity->rows() != days ||
            f.specific_humidity->cols() != g))
    throw ValidationError("wind fields: density field shape mismatch");
}

}  // namespace

GridPower hourly_wind_power(const WindFields& fields, const PowerCurve& curve,
                            const WindModelConfig& config,
                            const IntradaySampler* sampler,
                            std::uint64_t seed) {
  check_fields(fields);
  const Eigen::Index g_count = Eigen::Index(fields.gridpoint_ids.size());

  GridPower out;
  out.start = fields.start;
  out.gridpoint_ids = fields.gridpoint_ids;

  if (!fields.daily) {
    const Eigen::Index hours = fields.speed_ms.rows();
    out.power_w.resize(hours, g_count);
    for (Eigen::Index t = 0; t < hours; ++t) {
      Eigen::Index day = t / 24;
      for (Eigen::Index g = 0; g < g_count; ++g) {
        double v = extrapolate_hub_height(
            fields.speed_ms(t, g), config.reference_height_m,
            config.hub_height_m, config.power_law_exponent);
        double rho = density_at(fields, config, day, g);
        out.power_w(t, g) =
            curve(density_corrected_speed(v, rho, config.rho0_kg_m3));
      }
    }
    return out;
  }

  if (sampler == nullptr)
    throw ConfigError(
        "hourly_wind_power: daily wind input requires an intraday sampler");
  if (sampler->params().gridpoint_ids != fields.gridpoint_ids)
    throw ConfigError(
        "hourly_wind_power: sampler gridpoints do not match wind fields");
  if (hour_of_day(fields.start) != 0)
    throw ValidationError("wind fields: daily series must start at hour 00");

  const Eigen::Index days = fields.speed_ms.rows();
  out.power_w.resize(days * 24, g_count);
  // Keying by epoch day keeps draws identical for a calendar day no matter
  // what period the study is restricted to.
  const std::int64_t first_day = fields.start.count / 24;
  for (Eigen::Index d = 0; d < days; ++d) {
    Eigen::VectorXd means = fields.speed_ms.row(d).transpose();
    Eigen::VectorXd hub_means(g_count);
    for (Eigen::Index g = 0; g < g_count; ++g)
      hub_means[g] = extrapolate_hub_height(means[g], config.reference_height_m,
                                            config.hub_height_m,
                                            config.power_law_exponent);
    Eigen::MatrixXd speeds = sampler->sample_day(hub_means, seed,
                                                 first_day + std::int64_t(d));
    for (Eigen::Index g = 0; g < g_count; ++g) {
      double rho = density_at(fields, config, d, g);
      double factor = std::cbrt(rho / config.rho0_kg_m3);
      for (Eigen::Index h = 0; h < 24; ++h)
        out.power_w(d * 24 + h, g) = curve(speeds(h, g) * factor);
    }
  }
  return out;
}

}  // namespace vremix
