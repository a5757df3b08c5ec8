#include "vremix/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "vremix/csv.hpp"
#include "vremix/errors.hpp"

namespace vremix {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_string(buffer.str(), path.string());
}

ConfigFile ConfigFile::from_string(const std::string& text,
                                   const std::string& label) {
  ConfigFile file;
  file.source_ = label;
  std::istringstream in(text);
  std::string line;
  std::string section;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    std::string where = label + ":" + std::to_string(line_no);
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3)
        throw ConfigError(where + ": malformed section header '" + t + "'");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      file.sections_.try_emplace(section);
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected 'key = value', got '" + t + "'");
    if (section.empty())
      throw ConfigError(where + ": key outside any [section]");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    auto [it, inserted] = file.sections_[section].try_emplace(key, value);
    if (!inserted)
      throw ConfigError(where + ": duplicate key '" + section + "." + key +
                        "'");
  }
  return file;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string ConfigFile::value_or_throw(const std::string& section,
                                       const std::string& key) {
  auto s = sections_.find(section);
  if (s == sections_.end() || s->second.count(key) == 0)
    throw ConfigError(source_ + ": missing required key '" + section + "." +
                      key + "'");
  read_[section][key] = true;
  return s->second.at(key);
}

std::string ConfigFile::get_string(const std::string& section,
                                   const std::string& key) {
  return value_or_throw(section, key);
}

std::string ConfigFile::get_string(const std::string& section,
                                   const std::string& key,
                                   const std::string& fallback) {
  if (!has(section, key)) return fallback;
  return value_or_throw(section, key);
}

double ConfigFile::get_double(const std::string& section,
                              const std::string& key) {
  std::string v = value_or_throw(section, key);
  try {
    return parse_double(v, source_ + ": " + section + "." + key);
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
}

double ConfigFile::get_double(const std::string& section,
                              const std::string& key, double fallback) {
  if (!has(section, key)) return fallback;
  return get_double(section, key);
}

std::int64_t ConfigFile::get_int(const std::string& section,
                                 const std::string& key,
                                 std::int64_t fallback) {
  if (!has(section, key)) return fallback;
  std::string v = value_or_throw(section, key);
  std::int64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError(source_ + ": " + section + "." + key +
                      ": not an integer: '" + v + "'");
  return out;
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) {
  if (!has(section, key)) return fallback;
  std::string v = value_or_throw(section, key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(source_ + ": " + section + "." + key +
                    ": not a boolean: '" + v + "'");
}

std::optional<std::string> ConfigFile::get_optional(const std::string& section,
                                                    const std::string& key) {
  if (!has(section, key)) return std::nullopt;
  return value_or_throw(section, key);
}

void ConfigFile::reject_unknown(
    const std::vector<std::string>& known_sections) const {
  for (const auto& [section, keys] : sections_) {
    if (std::find(known_sections.begin(), known_sections.end(), section) ==
        known_sections.end())
      throw ConfigError(source_ + ": unknown section '[" + section + "]'");
    auto r = read_.find(section);
    for (const auto& [key, value] : keys) {
      bool seen = r != read_.end() && r->second.count(key) > 0 &&
                  r->second.at(key);
      if (!seen)
        throw ConfigError(source_ + ": unknown key '" + section + "." + key +
                          "'");
    }
  }
}

std::vector<std::string> split_list(const std::string& text,
                                    const std::string& context) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = trim(comma == std::string::npos
                                ? text.substr(pos)
                                : text.substr(pos, comma - pos));
    if (item.empty())
      throw ConfigError(context + ": empty item in list '" + text + "'");
    out.push_back(item);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

namespace {

Sampling parse_sampling(const std::string& v, const std::string& context) {
  if (v == "hourly") return Sampling::Hourly;
  if (v == "daily") return Sampling::Daily;
  throw ConfigError(context + ": expected 'hourly' or 'daily', got '" + v +
                    "'");
}

std::optional<Date> parse_optional_date(ConfigFile& f,
                                        const std::string& section,
                                        const std::string& key) {
  auto v = f.get_optional(section, key);
  if (!v) return std::nullopt;
  try {
    return parse_date(*v);
  } catch (const Error& e) {
    throw ConfigError(f.source() + ": " + section + "." + key + ": " +
                      e.what());
  }
}

void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw ConfigError(what + " must be finite");
}

}  // namespace

ComponentIndex StudyConfig::component_index() const {
  std::vector<Component> items;
  for (const auto& z : zones)
    for (const auto& t : technologies) items.push_back({z, t});
  return ComponentIndex(std::move(items));
}

void StudyConfig::validate() const {
  if (zones.empty()) throw ConfigError("study.zones must be non-empty");
  std::set<std::string> zs;
  for (const auto& z : zones)
    if (!zs.insert(z.name).second)
      throw ConfigError("duplicate zone '" + z.name + "'");
  if (technologies.empty())
    throw ConfigError("study.technologies must be non-empty");
  std::set<std::string> ts;
  for (const auto& t : technologies)
    if (!ts.insert(t.name).second)
      throw ConfigError("duplicate technology '" + t.name + "'");
  if (period_start && period_end && *period_end < *period_start)
    throw ConfigError("study.period_end precedes study.period_start");

  require_finite(wind.hub_height_m, "wind.hub_height_m");
  require_finite(wind.shear_exponent, "wind.shear_exponent");
  if (wind.hub_height_m <= 0 || wind.reference_height_m <= 0)
    throw ConfigError("wind heights must be positive");
  bool have_speed = !wind.speed_file.empty();
  bool have_uv = !wind.u_file.empty() || !wind.v_file.empty();
  if (have_uv && (wind.u_file.empty() || wind.v_file.empty()))
    throw ConfigError("wind.u_file and wind.v_file must be given together");
  if (have_speed && have_uv)
    throw ConfigError(
        "give either wind.speed_file or the u/v component files, not both");
  int density_files = int(!wind.temperature_file.empty()) +
                      int(!wind.pressure_file.empty()) +
                      int(!wind.humidity_file.empty());
  if (density_files != 0 && density_files != 3)
    throw ConfigError(
        "wind density correction needs temperature_file, pressure_file, and "
        "humidity_file together");
  if ((wind.intraday_shape_file.empty()) !=
      (wind.intraday_correlation_file.empty()))
    throw ConfigError(
        "wind.intraday_shape_file and wind.intraday_correlation_file must be "
        "given together");

  pv.constants.validate();

  if (!(demand.grid_step_c > 0))
    throw ConfigError("demand.grid_step_c must be positive");
  if (demand.t_heat_min_c > demand.t_heat_max_c ||
      demand.t_cool_min_c > demand.t_cool_max_c)
    throw ConfigError("demand threshold grid bounds are inverted");
  if (demand.cv_blocks < 2)
    throw ConfigError("demand.cv_blocks must be at least 2");
  if (!(demand.ridge_tol > 0) || demand.ridge_max_iter < 1)
    throw ConfigError("demand ridge settings must be positive");

  if (!(optimizer.step > 0.0 && optimizer.step < 1.0))
    throw ConfigError("optimizer.step must lie in (0, 1)");
  if (!(optimizer.mu_max_cap > 0.0))
    throw ConfigError("optimizer.mu_max_cap must be positive");
  require_finite(optimizer.mu_max_cap, "optimizer.mu_max_cap");
  if (optimizer.total_capacity_mw && !(*optimizer.total_capacity_mw > 0.0))
    throw ConfigError("optimizer.total_capacity_mw must be positive");
  if (!(optimizer.dominance_tol >= 0.0))
    throw ConfigError("optimizer.dominance_tol must be nonnegative");
  if (optimizer.strategies.empty())
    throw ConfigError("optimizer.strategy must name at least one strategy");

  if (!(analysis.conv_share > 0.0 && analysis.conv_share < 1.0))
    throw ConfigError("analysis.conv_share must lie in (0, 1)");
  if (!(analysis.sat_share > 0.0 && analysis.sat_share < 1.0))
    throw ConfigError("analysis.sat_share must lie in (0, 1)");
  if (analysis.year_window_days < 2 || analysis.day_window_hours < 2)
    throw ConfigError("analysis window lengths are too small");
}

StudyConfig parse_study_config(ConfigFile& f) {
  StudyConfig c;

  for (const auto& name :
       split_list(f.get_string("study", "zones"), "study.zones"))
    c.zones.push_back(ZoneId{name});
  if (auto techs = f.get_optional("study", "technologies")) {
    c.technologies.clear();
    for (const auto& name : split_list(*techs, "study.technologies"))
      c.technologies.push_back(TechId{name});
  }
  c.seed = std::uint64_t(f.get_int("study", "seed", 42));
  c.period_start = parse_optional_date(f, "study", "period_start");
  c.period_end = parse_optional_date(f, "study", "period_end");
  c.metadata_file = f.get_string("study", "metadata_file", "");
  c.holidays_file = f.get_string("study", "holidays_file", "");
  c.cf_targets_file = f.get_string("study", "cf_targets_file", "");
  c.capacities_file = f.get_string("study", "capacities_file", "");

  c.wind.speed_file = f.get_string("wind", "speed_file", "");
  c.wind.u_file = f.get_string("wind", "u_file", "");
  c.wind.v_file = f.get_string("wind", "v_file", "");
  c.wind.temperature_file = f.get_string("wind", "temperature_file", "");
  c.wind.pressure_file = f.get_string("wind", "pressure_file", "");
  c.wind.humidity_file = f.get_string("wind", "humidity_file", "");
  c.wind.power_curve_file = f.get_string("wind", "power_curve_file", "");
  c.wind.intraday_shape_file = f.get_string("wind", "intraday_shape_file", "");
  c.wind.intraday_correlation_file =
      f.get_string("wind", "intraday_correlation_file", "");
  c.wind.training_speed_file = f.get_string("wind", "training_speed_file", "");
  c.wind.sampling = parse_sampling(f.get_string("wind", "sampling", "daily"),
                                   "wind.sampling");
  c.wind.hub_height_m = f.get_double("wind", "hub_height_m", 101.0);
  c.wind.reference_height_m = f.get_double("wind", "reference_height_m", 10.0);
  c.wind.shear_exponent = f.get_double("wind", "shear_exponent", 1.0 / 7.0);

  c.pv.irradiance_file = f.get_string("pv", "irradiance_file", "");
  c.pv.temperature_file = f.get_string("pv", "temperature_file", "");
  c.pv.wind_file = f.get_string("pv", "wind_file", "");
  c.pv.sampling =
      parse_sampling(f.get_string("pv", "sampling", "daily"), "pv.sampling");
  c.pv.constants.nominal_power_w =
      f.get_double("pv", "nominal_power_w", c.pv.constants.nominal_power_w);
  c.pv.constants.module_area_m2 =
      f.get_double("pv", "module_area_m2", c.pv.constants.module_area_m2);
  c.pv.constants.reference_efficiency =
      c.pv.constants.nominal_power_w /
      (c.pv.constants.module_area_m2 * 1000.0);
  c.pv.constants.temperature_coefficient_per_k =
      f.get_double("pv", "temperature_coefficient_per_k",
                   c.pv.constants.temperature_coefficient_per_k);
  c.pv.constants.reference_temperature_c =
      f.get_double("pv", "reference_temperature_c",
                   c.pv.constants.reference_temperature_c);
  c.pv.constants.noct_c = f.get_double("pv", "noct_c", c.pv.constants.noct_c);
  c.pv.constants.system_efficiency = f.get_double(
      "pv", "system_efficiency", c.pv.constants.system_efficiency);
  c.pv.constants.albedo = f.get_double("pv", "albedo", c.pv.constants.albedo);
  c.pv.constants.elevation_cutoff_deg =
      f.get_double("pv", "elevation_cutoff_deg",
                   c.pv.constants.elevation_cutoff_deg);

  c.demand.observations_file = f.get_string("demand", "observations_file", "");
  c.demand.temperature_file = f.get_string("demand", "temperature_file", "");
  c.demand.params_file = f.get_string("demand", "params_file", "");
  c.demand.t_heat_min_c = f.get_double("demand", "t_heat_min_c", 5.0);
  c.demand.t_heat_max_c = f.get_double("demand", "t_heat_max_c", 15.0);
  c.demand.t_cool_min_c = f.get_double("demand", "t_cool_min_c", 10.0);
  c.demand.t_cool_max_c = f.get_double("demand", "t_cool_max_c", 20.0);
  c.demand.grid_step_c = f.get_double("demand", "grid_step_c", 0.5);
  c.demand.cv_blocks = int(f.get_int("demand", "cv_blocks", 7));
  c.demand.ridge_tol = f.get_double("demand", "ridge_tol", 1e-8);
  c.demand.ridge_max_iter = int(f.get_int("demand", "ridge_max_iter", 300));
  c.demand.sampled = f.get_bool("demand", "sampled", true);

  c.optimizer.step = f.get_double("optimizer", "step", 0.001);
  c.optimizer.mu_max_cap = f.get_double("optimizer", "mu_max_cap", 1.0);
  if (auto total = f.get_optional("optimizer", "total_capacity_mw")) {
    if (*total != "none")
      c.optimizer.total_capacity_mw =
          parse_double(*total, f.source() + ": optimizer.total_capacity_mw");
  }
  std::string strategy = f.get_string("optimizer", "strategy", "all");
  if (strategy == "all") {
    c.optimizer.strategies = {Strategy::Global, Strategy::Technology,
                              Strategy::Base};
  } else {
    for (const auto& name : split_list(strategy, "optimizer.strategy")) {
      try {
        c.optimizer.strategies.push_back(parse_strategy(name));
      } catch (const Error& e) {
        throw ConfigError(f.source() + ": optimizer.strategy: " + e.what());
      }
    }
  }
  c.optimizer.dominance_tol = f.get_double("optimizer", "dominance_tol", 1e-9);
  c.optimizer.demand_file = f.get_string("optimizer", "demand_file", "");
  c.optimizer.cf_file = f.get_string("optimizer", "cf_file", "");

  c.analysis.conv_share = f.get_double("analysis", "conv_share", 0.8);
  c.analysis.sat_share = f.get_double("analysis", "sat_share", 0.4);
  if (f.has("analysis", "reference_risk"))
    c.analysis.reference_risk = f.get_double("analysis", "reference_risk");
  c.analysis.demand_file = f.get_string("analysis", "demand_file", "");
  c.analysis.cf_file = f.get_string("analysis", "cf_file", "");
  c.analysis.frontier_file = f.get_string("analysis", "frontier_file", "");
  c.analysis.mix_file = f.get_string("analysis", "mix_file", "");
  if (auto files = f.get_optional("analysis", "spectrum_files"))
    c.analysis.spectrum_files =
        split_list(*files, "analysis.spectrum_files");
  c.analysis.year_window_days =
      int(f.get_int("analysis", "year_window_days", 365));
  c.analysis.day_window_hours =
      int(f.get_int("analysis", "day_window_hours", 24));

  f.reject_unknown({"study", "wind", "pv", "demand", "optimizer", "analysis"});
  c.validate();
  return c;
}

StudyConfig load_study_config(const std::filesystem::path& path) {
  ConfigFile file = ConfigFile::load(path);
  return parse_study_config(file);
}

}  // namespace vremix
