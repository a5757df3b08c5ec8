#include "vremix/time.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "vremix/errors.hpp"

namespace vremix {

namespace {

namespace chr = std::chrono;

chr::year_month_day to_ymd(const Date& d) {
  return chr::year_month_day{chr::year{d.year}, chr::month{unsigned(d.month)},
                             chr::day{unsigned(d.day)}};
}

bool parse_int_field(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc{} && r.ptr == s.data() + s.size();
}

}  // namespace

bool is_valid_date(const Date& d) { return to_ymd(d).ok(); }

std::int64_t days_from_epoch(const Date& d) {
  return chr::sys_days{to_ymd(d)}.time_since_epoch().count();
}

Date date_from_epoch_days(std::int64_t days) {
  chr::year_month_day ymd{chr::sys_days{chr::days{days}}};
  return Date{int(ymd.year()), int(unsigned(ymd.month())), int(unsigned(ymd.day()))};
}

UtcHour utc_hour(const Date& d, int hour_of_day) {
  return UtcHour{days_from_epoch(d) * 24 + hour_of_day};
}

Date date_of(UtcHour h) {
  std::int64_t days = h.count >= 0 ? h.count / 24 : (h.count - 23) / 24;
  return date_from_epoch_days(days);
}

int hour_of_day(UtcHour h) {
  std::int64_t r = h.count % 24;
  return int(r < 0 ? r + 24 : r);
}

int day_of_year(const Date& d) {
  return int(days_from_epoch(d) - days_from_epoch(Date{d.year, 1, 1})) + 1;
}

int iso_weekday(const Date& d) {
  chr::weekday wd{chr::sys_days{to_ymd(d)}};
  return int(wd.iso_encoding());
}

DayType day_type(const Date& d, const HolidayCalendar& holidays) {
  if (holidays.count(d) > 0) return DayType::Off;
  int wd = iso_weekday(d);
  if (wd == 7) return DayType::Off;
  if (wd == 6) return DayType::Sat;
  return DayType::Work;
}

const char* day_type_name(DayType t) {
  switch (t) {
    case DayType::Work: return "work";
    case DayType::Sat: return "sat";
    case DayType::Off: return "off";
  }
  return "?";
}

DayType day_type_from_name(std::string_view name) {
  if (name == "work") return DayType::Work;
  if (name == "sat") return DayType::Sat;
  if (name == "off") return DayType::Off;
  throw ValidationError("unknown day type '" + std::string(name) + "'");
}

Date parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-')
    throw ParseError("bad date '" + std::string(text) + "', expected YYYY-MM-DD");
  Date d;
  if (!parse_int_field(text.substr(0, 4), d.year) ||
      !parse_int_field(text.substr(5, 2), d.month) ||
      !parse_int_field(text.substr(8, 2), d.day) || !is_valid_date(d))
    throw ParseError("bad date '" + std::string(text) + "'");
  return d;
}

UtcHour parse_utc_hour(std::string_view text) {
  std::string_view full = text;
  if (!text.empty() && (text.back() == 'Z' || text.back() == 'z'))
    text.remove_suffix(1);
  if (text.size() < 16 || (text[10] != 'T' && text[10] != ' '))
    throw ParseError("bad timestamp '" + std::string(full) +
                     "', expected YYYY-MM-DDTHH:MM[:SS][Z]");
  Date d = parse_date(text.substr(0, 10));
  int hh = 0, mm = 0, ss = 0;
  if (text[13] != ':' || !parse_int_field(text.substr(11, 2), hh) ||
      !parse_int_field(text.substr(14, 2), mm))
    throw ParseError("bad timestamp '" + std::string(full) + "'");
  if (text.size() > 16) {
    if (text.size() != 19 || text[16] != ':' ||
        !parse_int_field(text.substr(17, 2), ss))
      throw ParseError("bad timestamp '" + std::string(full) + "'");
  }
  if (hh < 0 || hh > 23)
    throw ParseError("hour out of range in '" + std::string(full) + "'");
  if (mm != 0 || ss != 0)
    throw ParseError("timestamp '" + std::string(full) +
                     "' is not hour-aligned (minutes and seconds must be 00)");
  return utc_hour(d, hh);
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

std::string format_utc_hour(UtcHour h) {
  char buf[32];
  Date d = date_of(h);
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:00:00Z", d.year, d.month,
                d.day, hour_of_day(h));
  return buf;
}

}  // namespace vremix
