#pragma once

#include <Eigen/Dense>

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "asyspill/calendar.hpp"
#include "asyspill/error.hpp"
#include "asyspill/format.hpp"

namespace asyspill {

enum class MeasureKind { rv, rs_minus, rs_plus };

inline const char* to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::rv: return "rv";
    case MeasureKind::rs_minus: return "rs_minus";
    case MeasureKind::rs_plus: return "rs_plus";
  }
  return "?";
}

/// One daily realized measure for N assets over D days (rows are days).
struct MeasurePanel {
  MeasureKind kind = MeasureKind::rv;
  std::vector<std::string> assets;
  std::vector<Date> dates;
  Eigen::MatrixXd values;

  Eigen::Index num_days() const { return values.rows(); }
  Eigen::Index num_assets() const { return values.cols(); }

  /// Same measure with columns reordered: column k of the result is column order[k] here.
  MeasurePanel permuted(const std::vector<int>& order) const {
    MeasurePanel out{kind, {}, dates, Eigen::MatrixXd(values.rows(), values.cols())};
    for (std::size_t k = 0; k < order.size(); ++k) {
      out.assets.push_back(assets.at(static_cast<std::size_t>(order[k])));
      out.values.col(static_cast<Eigen::Index>(k)) = values.col(order[k]);
    }
    return out;
  }
};

/// `date,<asset1>,...` with every value at 17 significant digits.
inline void write_measure_csv(std::ostream& out, const MeasurePanel& panel) {
  out << "date";
  for (const auto& a : panel.assets) out << ',' << a;
  out << '\n';
  for (Eigen::Index d = 0; d < panel.num_days(); ++d) {
    out << format_date(panel.dates[static_cast<std::size_t>(d)]);
    for (Eigen::Index a = 0; a < panel.num_assets(); ++a) out << ',' << format_double(panel.values(d, a));
    out << '\n';
  }
}

inline MeasurePanel read_measure_csv(std::istream& in, MeasureKind kind, const std::string& source = "<measures>") {
  MeasurePanel panel;
  panel.kind = kind;
  std::string raw;
  std::size_t line_no = 0;
  std::vector<double> flat;
  auto split = [](std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
      auto comma = line.find(',', pos);
      fields.push_back(detail::trim(line.substr(pos, comma - pos)));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    return fields;
  };
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = detail::trim(raw);
    if (line.empty()) continue;
    auto fields = split(line);
    if (panel.assets.empty()) {
      if (fields.size() < 2 || fields[0] != "date")
        throw ParseError(source, line_no, "expected header 'date,<asset>,...'");
      for (std::size_t i = 1; i < fields.size(); ++i) panel.assets.emplace_back(fields[i]);
      continue;
    }
    if (fields.size() != panel.assets.size() + 1)
      throw ParseError(source, line_no, "expected " + std::to_string(panel.assets.size() + 1) + " fields");
    auto date = parse_date(fields[0]);
    if (!date) throw ParseError(source, line_no, "invalid date '" + std::string(fields[0]) + "'");
    if (!panel.dates.empty() && !(panel.dates.back() < *date))
      throw ParseError(source, line_no, "dates must be strictly increasing");
    panel.dates.push_back(*date);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double v = 0.0;
      auto f = fields[i];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc{} || ptr != f.data() + f.size() || !std::isfinite(v))
        throw ParseError(source, line_no, "invalid value '" + std::string(f) + "'");
      flat.push_back(v);
    }
  }
  if (panel.assets.empty()) throw ParseError(source, 1, "empty measure file");
  const auto n = static_cast<Eigen::Index>(panel.assets.size());
  const auto d = static_cast<Eigen::Index>(panel.dates.size());
  panel.values = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(flat.data(), d, n);
  return panel;
}

inline MeasurePanel load_measure_csv(const std::string& path, MeasureKind kind) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open measure file '" + path + "'");
  return read_measure_csv(in, kind, path);
}

}  // namespace asyspill
