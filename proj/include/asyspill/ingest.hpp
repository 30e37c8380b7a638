#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "asyspill/calendar.hpp"
#include "asyspill/error.hpp"

namespace asyspill {

struct Tick {
  Date date;
  int seconds = 0;  // after midnight
  double price = 0.0;
};

/// One asset's price observations, sorted with unique timestamps.
struct RawTickFile {
  std::string asset_id;
  std::vector<Tick> rows;
};

struct PanelWarning {
  Date date;
  std::string asset_id;
  std::string message;
};

/// Bar-boundary prices of N assets over D common trading days.
/// Storage is day-major: (day, asset, bar) with M + 1 boundaries per day.
struct IntradayPanel {
  std::vector<std::string> assets;
  std::vector<Date> days;
  std::vector<TimeOfDay> bar_times;  // M + 1 boundaries
  std::vector<double> prices;
  std::vector<double> log_prices;
  std::vector<PanelWarning> warnings;

  std::size_t num_assets() const { return assets.size(); }
  std::size_t num_days() const { return days.size(); }
  std::size_t bars_per_day() const { return bar_times.empty() ? 0 : bar_times.size() - 1; }

  std::size_t index(std::size_t day, std::size_t asset, std::size_t bar) const {
    return (day * num_assets() + asset) * bar_times.size() + bar;
  }

  double price(std::size_t day, std::size_t asset, std::size_t bar) const {
    return prices[index(day, asset, bar)];
  }
  double log_price(std::size_t day, std::size_t asset, std::size_t bar) const {
    return log_prices[index(day, asset, bar)];
  }

  /// The M + 1 log-prices of one (day, asset) cell.
  std::span<const double> day_log_prices(std::size_t day, std::size_t asset) const {
    return {log_prices.data() + index(day, asset, 0), bar_times.size()};
  }
};

namespace detail {

inline bool tick_before(const Tick& a, const Tick& b) {
  if (a.date != b.date) return a.date < b.date;
  return a.seconds < b.seconds;
}

inline bool same_stamp(const Tick& a, const Tick& b) {
  return a.date == b.date && a.seconds == b.seconds;
}

// Sorts by timestamp; for repeated timestamps the row appearing last in the input wins.
inline void normalize_ticks(std::vector<Tick>& rows) {
  std::stable_sort(rows.begin(), rows.end(), tick_before);
  std::vector<Tick> out;
  out.reserve(rows.size());
  for (const auto& t : rows) {
    if (!out.empty() && same_stamp(out.back(), t))
      out.back() = t;
    else
      out.push_back(t);
  }
  rows = std::move(out);
}

}  // namespace detail

/// Parses a `timestamp,price` tick stream. Timestamps are `YYYY-MM-DD HH:MM:SS`.
inline RawTickFile parse_ticks(std::istream& in, const std::string& asset_id,
                               const std::string& source = "<ticks>") {
  RawTickFile file{asset_id, {}};
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = detail::trim(raw);
    if (!header_seen) {
      // tolerate a UTF-8 byte-order mark
      if (line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
      if (line != "timestamp,price")
        throw ParseError(source, line_no, "expected header 'timestamp,price'");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
      throw ParseError(source, line_no, "expected exactly two fields");
    auto stamp = detail::trim(line.substr(0, comma));
    auto price_text = detail::trim(line.substr(comma + 1));
    if (stamp.size() != 19 || stamp[10] != ' ')
      throw ParseError(source, line_no, "timestamp must be 'YYYY-MM-DD HH:MM:SS'");
    auto date = parse_date(stamp.substr(0, 10));
    auto secs = parse_clock_seconds(stamp.substr(11));
    if (!date || !secs) throw ParseError(source, line_no, "invalid timestamp '" + std::string(stamp) + "'");
    double price = 0.0;
    auto [ptr, ec] = std::from_chars(price_text.data(), price_text.data() + price_text.size(), price);
    if (ec != std::errc{} || ptr != price_text.data() + price_text.size() || !std::isfinite(price))
      throw ParseError(source, line_no, "invalid price '" + std::string(price_text) + "'");
    if (price <= 0.0)
      throw DataError(source + ":" + std::to_string(line_no) + ": non-positive price " +
                      std::string(price_text));
    file.rows.push_back({*date, *secs, price});
  }
  if (!header_seen) throw ParseError(source, 1, "empty file, expected header 'timestamp,price'");
  detail::normalize_ticks(file.rows);
  return file;
}

inline RawTickFile load_ticks(const std::string& path, const std::string& asset_id) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open tick file '" + path + "'");
  return parse_ticks(in, asset_id, path);
}

/// Aligns tick files onto the calendar's bar grid over the dates common to every asset.
///
/// A boundary takes the last in-session price at or before it; boundaries ahead of the
/// day's first in-session trade take that first trade. Days on which any asset has no
/// in-session trade are dropped for all assets and reported in `warnings`.
inline IntradayPanel build_panel(std::span<const RawTickFile> files, const TradingCalendar& cal) {
  cal.validate();
  if (files.size() < 2) throw ValidationError("build_panel: need at least two assets");
  for (std::size_t a = 0; a < files.size(); ++a)
    for (std::size_t b = a + 1; b < files.size(); ++b)
      if (files[a].asset_id == files[b].asset_id)
        throw ValidationError("build_panel: duplicate asset id '" + files[a].asset_id + "'");

  using Range = std::pair<std::size_t, std::size_t>;  // [begin, end) into rows
  std::vector<std::map<Date, Range>> by_day(files.size());
  for (std::size_t a = 0; a < files.size(); ++a) {
    const auto& rows = files[a].rows;
    for (std::size_t i = 0; i < rows.size();) {
      std::size_t j = i;
      while (j < rows.size() && rows[j].date == rows[i].date) ++j;
      by_day[a][rows[i].date] = {i, j};
      i = j;
    }
  }

  std::vector<Date> common;
  for (const auto& [date, range] : by_day[0]) {
    bool everywhere = std::all_of(by_day.begin() + 1, by_day.end(),
                                  [&](const auto& m) { return m.contains(date); });
    if (everywhere) common.push_back(date);
  }
  if (common.empty()) throw AlignmentError("build_panel: assets share no common dates");

  IntradayPanel panel;
  for (const auto& f : files) panel.assets.push_back(f.asset_id);
  const int start = cal.session_start.minutes * 60;
  const int end = cal.session_end.minutes * 60;
  const int bars = cal.bars_per_day();
  for (int k = 0; k <= bars; ++k) panel.bar_times.push_back({cal.session_start.minutes + k * cal.bar_minutes});

  std::vector<double> day_prices(files.size() * panel.bar_times.size());
  for (const auto& date : common) {
    if (!cal.is_trading_day(date)) continue;
    bool complete = true;
    for (std::size_t a = 0; a < files.size(); ++a) {
      auto [lo, hi] = by_day[a].at(date);
      const auto& rows = files[a].rows;
      auto first = std::find_if(rows.begin() + lo, rows.begin() + hi,
                                [&](const Tick& t) { return t.seconds >= start; });
      if (first == rows.begin() + hi || first->seconds > end) {
        panel.warnings.push_back({date, files[a].asset_id, "no in-session observations; day dropped"});
        complete = false;
        continue;
      }
      auto cursor = first;
      auto stop = rows.begin() + hi;
      double current = first->price;
      for (int k = 0; k <= bars; ++k) {
        const int boundary = start + k * cal.bar_minutes * 60;
        while (cursor != stop && cursor->seconds <= boundary && cursor->seconds <= end) {
          current = cursor->price;
          ++cursor;
        }
        day_prices[a * panel.bar_times.size() + static_cast<std::size_t>(k)] = current;
      }
    }
    if (!complete) continue;
    panel.days.push_back(date);
    panel.prices.insert(panel.prices.end(), day_prices.begin(), day_prices.end());
  }
  if (panel.days.empty())
    throw AlignmentError("build_panel: no common trading day survives calendar and session filters");

  panel.log_prices.resize(panel.prices.size());
  std::transform(panel.prices.begin(), panel.prices.end(), panel.log_prices.begin(),
                 [](double p) { return std::log(p); });
  return panel;
}

inline IntradayPanel build_panel(const std::vector<RawTickFile>& files, const TradingCalendar& cal) {
  return build_panel(std::span<const RawTickFile>(files), cal);
}

/// Re-expresses a panel as one tick per bar boundary, e.g. to re-run alignment.
inline std::vector<RawTickFile> panel_to_ticks(const IntradayPanel& panel) {
  std::vector<RawTickFile> out;
  for (std::size_t a = 0; a < panel.num_assets(); ++a) {
    RawTickFile f{panel.assets[a], {}};
    for (std::size_t d = 0; d < panel.num_days(); ++d)
      for (std::size_t k = 0; k < panel.bar_times.size(); ++k)
        f.rows.push_back({panel.days[d], panel.bar_times[k].minutes * 60, panel.price(d, a, k)});
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace asyspill
