#include "vremix/series.hpp"

#include <cmath>
#include <set>

#include "vremix/errors.hpp"

namespace vremix {

ComponentIndex::ComponentIndex(std::vector<Component> items)
    : items_(std::move(items)) {
  std::set<Component> seen;
  for (const auto& c : items_) {
    if (c.zone.name.empty()) throw ValidationError("component with empty zone id");
    if (c.tech.name.empty()) throw ValidationError("component with empty tech id");
    if (!seen.insert(c).second)
      throw ValidationError("duplicate component (" + c.zone.name + ", " +
                            c.tech.name + ")");
  }
}

std::size_t ComponentIndex::find(const ZoneId& zone, const TechId& tech) const {
  for (std::size_t k = 0; k < items_.size(); ++k)
    if (items_[k].zone == zone && items_[k].tech == tech) return k;
  return npos;
}

Date DailySeries::date_at(std::size_t i) const {
  return date_from_epoch_days(days_from_epoch(start) + std::int64_t(i));
}

DailySeries daily_means(const HourlySeries& s) {
  if (hour_of_day(s.start) != 0)
    throw ValidationError("daily_means: series must start at hour 00 UTC");
  if (s.values.empty() || s.values.size() % 24 != 0)
    throw ValidationError("daily_means: series must span whole days");
  DailySeries out{date_of(s.start), std::vector<double>(s.values.size() / 24)};
  for (std::size_t d = 0; d < out.values.size(); ++d) {
    double sum = 0.0;
    for (int h = 0; h < 24; ++h) sum += s.values[d * 24 + h];
    out.values[d] = sum / 24.0;
  }
  return out;
}

DailySeries slice(const DailySeries& s, const Date& from, const Date& to) {
  std::int64_t first = days_from_epoch(s.start);
  std::int64_t lo = days_from_epoch(from);
  std::int64_t hi = days_from_epoch(to);
  if (lo > hi)
    throw RangeError("slice: '" + format_date(from) + "' is after '" +
                     format_date(to) + "'");
  if (lo < first || hi >= first + std::int64_t(s.values.size()))
    throw RangeError("slice: [" + format_date(from) + ", " + format_date(to) +
                     "] outside the record [" + format_date(s.start) + ", " +
                     format_date(s.date_at(s.values.empty()
                                               ? 0
                                               : s.values.size() - 1)) +
                     "]");
  DailySeries out{from, {}};
  out.values.assign(s.values.begin() + (lo - first),
                    s.values.begin() + (hi - first + 1));
  return out;
}

void validate_finite(const HourlySeries& s, const std::string& label) {
  for (std::size_t i = 0; i < s.values.size(); ++i)
    if (!std::isfinite(s.values[i]))
      throw ValidationError(label + ": non-finite value at " +
                            format_utc_hour(s.time_at(i)));
}

bool aligned(const HourlySeries& a, const HourlySeries& b) {
  return a.start == b.start && a.values.size() == b.values.size();
}

HourlySeries day_average(const HourlySeries& s) {
  if (hour_of_day(s.start) != 0)
    throw ValidationError("day_average: series must start at hour 00 UTC");
  if (s.values.size() % 24 != 0)
    throw ValidationError("day_average: series must span whole days");
  HourlySeries out{s.start, std::vector<double>(s.values.size())};
  for (std::size_t d = 0; d < s.values.size() / 24; ++d) {
    double sum = 0.0;
    for (int h = 0; h < 24; ++h) sum += s.values[d * 24 + h];
    double mean = sum / 24.0;
    for (int h = 0; h < 24; ++h) out.values[d * 24 + h] = mean;
  }
  return out;
}

void Mix::validate() const {
  if (std::size_t(w.size()) != index.size())
    throw ValidationError("mix length does not match component index");
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (!std::isfinite(w[k]))
      throw ValidationError("mix has non-finite capacity at component " +
                            std::to_string(k));
    if (w[k] < 0.0) {
      const auto& c = index.at(std::size_t(k));
      throw ValidationError("negative capacity for (" + c.zone.name + ", " +
                            c.tech.name + ")");
    }
  }
}

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Global: return "global";
    case Strategy::Technology: return "technology";
    case Strategy::Base: return "base";
  }
  throw ValidationError("unknown strategy value");
}

Strategy parse_strategy(std::string_view name) {
  if (name == "global") return Strategy::Global;
  if (name == "technology") return Strategy::Technology;
  if (name == "base") return Strategy::Base;
  throw ValidationError("unknown strategy '" + std::string(name) +
                        "' (expected global, technology, or base)");
}

}  // namespace vremix
