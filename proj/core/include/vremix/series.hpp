#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "vremix/time.hpp"

namespace vremix {

/// Electricity-market zone identifier (e.g. "NORD").
struct ZoneId {
  std::string name;

  friend bool operator==(const ZoneId&, const ZoneId&) = default;
  friend auto operator<=>(const ZoneId&, const ZoneId&) = default;
};

/// Technology identifier, member of the configured set (default pv/wind).
struct TechId {
  std::string name;

  friend bool operator==(const TechId&, const TechId&) = default;
  friend auto operator<=>(const TechId&, const TechId&) = default;
};

/// One (zone, technology) component of the capacity vector.
struct Component {
  ZoneId zone;
  TechId tech;

  friend bool operator==(const Component&, const Component&) = default;
  friend auto operator<=>(const Component&, const Component&) = default;
};

/// Ordered, duplicate-free list of components. The ordering is fixed for the
/// lifetime of a study and defines the layout of capacity vectors, mean
/// vectors, and covariance matrices.
class ComponentIndex {
 public:
  ComponentIndex() = default;
  explicit ComponentIndex(std::vector<Component> items);

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const Component& at(std::size_t k) const { return items_.at(k); }
  const std::vector<Component>& items() const { return items_; }

  /// Position of (zone, tech), or npos when absent.
  std::size_t find(const ZoneId& zone, const TechId& tech) const;

  static constexpr std::size_t npos = std::size_t(-1);

  friend bool operator==(const ComponentIndex&, const ComponentIndex&) = default;

 private:
  std::vector<Component> items_;
};

/// Evenly spaced hourly series on the UTC axis. Units depend on context:
/// MW for demand, dimensionless for capacity factors.
struct HourlySeries {
  UtcHour start;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
  UtcHour time_at(std::size_t i) const { return start + std::int64_t(i); }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Evenly spaced daily series (one value per calendar date, UTC).
struct DailySeries {
  Date start;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
  Date date_at(std::size_t i) const;
  double operator[](std::size_t i) const { return values[i]; }
};

/// One value per whole UTC day: the day's mean. Requires an hour-00 start
/// and whole days.
DailySeries daily_means(const HourlySeries& s);

/// Subrange [from, to], both inclusive. Throws RangeError when either date
/// falls outside the series.
DailySeries slice(const DailySeries& s, const Date& from, const Date& to);

/// Throws ValidationError when any value is NaN or infinite.
void validate_finite(const HourlySeries& s, const std::string& label);

/// True when both series start together and have equal length.
bool aligned(const HourlySeries& a, const HourlySeries& b);

/// Replaces every value by the mean of its UTC day. Requires the series to
/// start at hour 00 and span whole days. Means are preserved exactly; all
/// intraday variance is removed.
HourlySeries day_average(const HourlySeries& s);

/// Installed capacities in MW, laid out by a ComponentIndex.
struct Mix {
  ComponentIndex index;
  Eigen::VectorXd w;

  /// Throws ValidationError unless w matches the index and is nonnegative.
  void validate() const;
};

/// Which covariances of the demand-normalized production enter the risk:
/// Global keeps all, Technology only those within a zone, Base none.
enum class Strategy { Global, Technology, Base };

const char* strategy_name(Strategy s);
Strategy parse_strategy(std::string_view name);

/// Time resolution of a gridded input series.
enum class Sampling { Hourly, Daily };

}  // namespace vremix
