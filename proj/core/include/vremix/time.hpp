#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>

namespace vremix {

/// Calendar date (proleptic Gregorian), no timezone attached.
struct Date {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31

  friend bool operator==(const Date&, const Date&) = default;
  friend auto operator<=>(const Date&, const Date&) = default;
};

/// One hour on the UTC axis, stored as whole hours since 1970-01-01T00:00Z.
/// Daily values are associated with hours 00..23 UTC of their date.
struct UtcHour {
  std::int64_t count = 0;

  friend bool operator==(const UtcHour&, const UtcHour&) = default;
  friend auto operator<=>(const UtcHour&, const UtcHour&) = default;
  UtcHour operator+(std::int64_t h) const { return UtcHour{count + h}; }
  std::int64_t operator-(const UtcHour& o) const { return count - o.count; }
};

/// Demand-relevant classification of a calendar date.
enum class DayType : std::uint8_t { Work = 0, Sat = 1, Off = 2 };

inline constexpr int kNumDayTypes = 3;

/// Dates treated as holidays; user-supplied data, never hard-coded.
using HolidayCalendar = std::set<Date>;

bool is_valid_date(const Date& d);

/// Days since 1970-01-01 (negative before).
std::int64_t days_from_epoch(const Date& d);
Date date_from_epoch_days(std::int64_t days);

/// Midnight UTC of the given date.
UtcHour utc_hour(const Date& d, int hour_of_day = 0);
Date date_of(UtcHour h);
int hour_of_day(UtcHour h);

/// 1 for Jan 1st, 365/366 for Dec 31st.
int day_of_year(const Date& d);

/// ISO weekday, Monday=1 .. Sunday=7.
int iso_weekday(const Date& d);

/// Saturdays (not holidays) -> Sat; Sundays or holidays -> Off; else Work.
DayType day_type(const Date& d, const HolidayCalendar& holidays);

const char* day_type_name(DayType t);
DayType day_type_from_name(std::string_view name);

/// Strict "YYYY-MM-DD".
Date parse_date(std::string_view text);

/// "YYYY-MM-DDTHH:MM" with optional ":SS" and optional trailing "Z";
/// minutes and seconds must be zero. Also accepts a space separator.
UtcHour parse_utc_hour(std::string_view text);

std::string format_date(const Date& d);

/// Canonical form "YYYY-MM-DDTHH:00:00Z".
std::string format_utc_hour(UtcHour h);

}  // namespace vremix
