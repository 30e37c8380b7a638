#pragma once

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "asyspill/error.hpp"

namespace asyspill {

using Date = std::chrono::year_month_day;

/// Minutes after midnight, exchange-local clock.
struct TimeOfDay {
  int minutes = 0;

  friend auto operator<=>(const TimeOfDay&, const TimeOfDay&) = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Parses exactly `width` decimal digits.
inline std::optional<int> parse_fixed_int(std::string_view s, std::size_t width) {
  if (s.size() != width) return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

}  // namespace detail

/// Parses `YYYY-MM-DD`; returns nullopt for anything else, including impossible dates.
inline std::optional<Date> parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  auto y = detail::parse_fixed_int(s.substr(0, 4), 4);
  auto m = detail::parse_fixed_int(s.substr(5, 2), 2);
  auto d = detail::parse_fixed_int(s.substr(8, 2), 2);
  if (!y || !m || !d) return std::nullopt;
  Date date{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
            std::chrono::day{static_cast<unsigned>(*d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

/// Parses `HH:MM` or `HH:MM:SS` into seconds after midnight.
inline std::optional<int> parse_clock_seconds(std::string_view s) {
  if (s.size() != 5 && s.size() != 8) return std::nullopt;
  if (s[2] != ':') return std::nullopt;
  auto h = detail::parse_fixed_int(s.substr(0, 2), 2);
  auto m = detail::parse_fixed_int(s.substr(3, 2), 2);
  int sec = 0;
  if (s.size() == 8) {
    if (s[5] != ':') return std::nullopt;
    auto parsed = detail::parse_fixed_int(s.substr(6, 2), 2);
    if (!parsed) return std::nullopt;
    sec = *parsed;
  }
  if (!h || !m || *h > 23 || *m > 59 || sec > 59) return std::nullopt;
  return *h * 3600 + *m * 60 + sec;
}

inline std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

inline std::string format_time(TimeOfDay t) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", t.minutes / 60, t.minutes % 60);
  return buf;
}

inline bool is_weekend(const Date& d) {
  std::chrono::weekday wd{std::chrono::sys_days{d}};
  return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

/// Dec 24-26 and Dec 31-Jan 2, the low-activity year-end days.
inline bool is_year_end_holiday(const Date& d) {
  unsigned m = static_cast<unsigned>(d.month());
  unsigned day = static_cast<unsigned>(d.day());
  if (m == 12) return (day >= 24 && day <= 26) || day == 31;
  if (m == 1) return day <= 2;
  return false;
}

/// Which dates are tradable and how the session is cut into bars.
struct TradingCalendar {
  std::set<Date> excluded_dates;
  TimeOfDay session_start{9 * 60 + 30};
  TimeOfDay session_end{16 * 60};
  int bar_minutes = 5;
  bool exclude_weekends = true;
  bool exclude_year_end = false;

  int session_minutes() const { return session_end.minutes - session_start.minutes; }
  int bars_per_day() const { return session_minutes() / bar_minutes; }

  /// Throws ValidationError when the session or bar grid is inconsistent.
  void validate() const {
    if (!(session_start < session_end))
      throw ValidationError("calendar: session_start must precede session_end");
    if (bar_minutes <= 0) throw ValidationError("calendar: bar_minutes must be positive");
    if (session_minutes() % bar_minutes != 0)
      throw ValidationError("calendar: bar_minutes (" + std::to_string(bar_minutes) +
                            ") does not divide the session length (" +
                            std::to_string(session_minutes()) + " min)");
  }

  bool is_trading_day(const Date& d) const {
    if (exclude_weekends && is_weekend(d)) return false;
    if (exclude_year_end && is_year_end_holiday(d)) return false;
    return !excluded_dates.contains(d);
  }
};

namespace detail {

inline bool parse_bool(std::string_view v, bool& out) {
  if (v == "true" || v == "1" || v == "yes") {
    out = true;
    return true;
  }
  if (v == "false" || v == "0" || v == "no") {
    out = false;
    return true;
  }
  return false;
}

}  // namespace detail

/// Reads a calendar file: `key=value` header lines plus one excluded `YYYY-MM-DD` per line.
/// Blank lines and lines starting with `#` are ignored.
inline TradingCalendar parse_calendar(std::istream& in, const std::string& source = "<calendar>") {
  TradingCalendar cal;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (auto eq = line.find('='); eq != std::string_view::npos) {
      auto key = detail::trim(line.substr(0, eq));
      auto value = detail::trim(line.substr(eq + 1));
      if (key == "session_start" || key == "session_end") {
        auto secs = value.size() == 5 ? parse_clock_seconds(value) : std::nullopt;
        if (!secs) throw ParseError(source, line_no, "expected HH:MM for " + std::string(key));
        (key == "session_start" ? cal.session_start : cal.session_end) = TimeOfDay{*secs / 60};
      } else if (key == "bar_minutes") {
        int v = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc{} || ptr != value.data() + value.size())
          throw ParseError(source, line_no, "bar_minutes is not an integer");
        cal.bar_minutes = v;
      } else if (key == "exclude_weekends") {
        if (!detail::parse_bool(value, cal.exclude_weekends))
          throw ParseError(source, line_no, "exclude_weekends expects true/false");
      } else if (key == "exclude_year_end") {
        if (!detail::parse_bool(value, cal.exclude_year_end))
          throw ParseError(source, line_no, "exclude_year_end expects true/false");
      } else {
        throw ParseError(source, line_no, "unknown calendar key '" + std::string(key) + "'");
      }
      continue;
    }
    auto date = parse_date(line);
    if (!date) throw ParseError(source, line_no, "expected YYYY-MM-DD, got '" + std::string(line) + "'");
    cal.excluded_dates.insert(*date);
  }
  cal.validate();
  return cal;
}

inline TradingCalendar load_calendar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open calendar file '" + path + "'");
  return parse_calendar(in, path);
}

}  // namespace asyspill
