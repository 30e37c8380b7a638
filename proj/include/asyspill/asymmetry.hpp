#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "asyspill/calendar.hpp"
#include "asyspill/error.hpp"
#include "asyspill/format.hpp"
#include "asyspill/measure_panel.hpp"
#include "asyspill/parallel.hpp"
#include "asyspill/spillover.hpp"

namespace asyspill {

struct RollingSpec {
  int window_length = 200;
  int step = 1;

  void validate(Eigen::Index num_assets, const VarSpec& var) const {
    if (step < 1) throw ValidationError("rolling step must be >= 1");
    if (window_length < var.min_window(num_assets))
      throw ValidationError("rolling window of " + std::to_string(window_length) + " days is too short for VAR(" +
                            std::to_string(var.lag_order) + ") on " + std::to_string(num_assets) +
                            " assets; need >= " + std::to_string(var.min_window(num_assets)));
  }
};

/// floor((D - L) / step) + 1, or 0 when the panel is shorter than one window.
inline std::size_t window_count(Eigen::Index days, const RollingSpec& roll) {
  if (days < roll.window_length) return 0;
  return static_cast<std::size_t>((days - roll.window_length) / roll.step) + 1;
}

struct WindowSpillover {
  Date start_date;
  Date end_date;
  std::optional<SpilloverSet> indices;  // empty when the fit failed
  std::optional<FevdResult> fevd;       // kept only on request
  double spectral_radius = std::numeric_limits<double>::quiet_NaN();
  std::string diagnostic;

  bool missing() const { return !indices.has_value(); }
  bool unstable() const { return !missing() && !(spectral_radius < 1.0); }
};

struct RollingSpillovers {
  MeasureKind kind = MeasureKind::rv;
  std::vector<std::string> assets;
  std::vector<WindowSpillover> windows;
};

struct RollingOptions {
  unsigned threads = 1;
  SigmaConvention convention = SigmaConvention::variance;
  bool keep_fevd = false;
};

/// Spillover indices for every window position; window w covers rows
/// [w*step, w*step + L). Windows whose VAR fit is singular or degenerate are kept as
/// missing entries carrying the diagnostic.
inline RollingSpillovers rolling_spillovers(const MeasurePanel& panel, const VarSpec& spec, const RollingSpec& roll,
                                            const RollingOptions& options = {}) {
  spec.validate();
  roll.validate(panel.num_assets(), spec);
  if (panel.num_days() < roll.window_length)
    throw ValidationError("panel has " + std::to_string(panel.num_days()) + " days, fewer than the window length " +
                          std::to_string(roll.window_length));

  RollingSpillovers out{panel.kind, panel.assets, std::vector<WindowSpillover>(window_count(panel.num_days(), roll))};
  parallel_for(out.windows.size(), options.threads, [&](std::size_t w) {
    const Eigen::Index first = static_cast<Eigen::Index>(w) * roll.step;
    const Eigen::Index last = first + roll.window_length - 1;
    WindowSpillover& slot = out.windows[w];
    slot.start_date = panel.dates[static_cast<std::size_t>(first)];
    slot.end_date = panel.dates[static_cast<std::size_t>(last)];
    try {
      auto est = estimate_spillovers(panel.values.middleRows(first, roll.window_length), spec, options.convention,
                                     format_date(slot.start_date));
      slot.indices = std::move(est.indices);
      slot.spectral_radius = est.spectral_radius;
      if (options.keep_fevd) slot.fevd = std::move(est.fevd);
    } catch (const NumericalError& e) {
      slot.diagnostic = e.what();
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Spillover asymmetry measure

enum class SamFlag { ok, degenerate, missing };

inline const char* to_string(SamFlag f) {
  switch (f) {
    case SamFlag::ok: return "ok";
    case SamFlag::degenerate: return "degenerate";
    case SamFlag::missing: return "missing";
  }
  return "?";
}

enum class Direction { from, to };

struct SamKind {
  enum class Type { total, from_asset, to_asset } type = Type::total;
  int asset = -1;

  static SamKind total() { return {}; }
  static SamKind directional(int asset, Direction d) {
    return {d == Direction::from ? Type::from_asset : Type::to_asset, asset};
  }
};

struct SamSeries {
  SamKind kind;
  std::string label;  // "total", "from_<asset>", "to_<asset>"
  std::vector<Date> dates;
  std::vector<double> sam;
  std::vector<SamFlag> flags;
  double ci_low = std::numeric_limits<double>::quiet_NaN();
  double ci_high = std::numeric_limits<double>::quiet_NaN();
};

struct SamValue {
  double value = 0.0;
  bool degenerate = false;
};

/// 100 (plus - minus) / ((plus + minus) / 2). Positive when upside spillovers dominate.
/// Both inputs zero gives 0 flagged as degenerate.
inline SamValue sam_value(double plus, double minus) {
  const double mid = 0.5 * (plus + minus);
  if (mid == 0.0) return {0.0, true};
  return {100.0 * (plus - minus) / mid, false};
}

namespace detail {

inline void check_aligned(const RollingSpillovers& plus, const RollingSpillovers& minus) {
  if (plus.assets != minus.assets) throw AlignmentError("SAM: plus and minus series cover different assets");
  std::string mismatch;
  const std::size_t n = std::max(plus.windows.size(), minus.windows.size());
  std::size_t count = 0;
  for (std::size_t w = 0; w < n; ++w) {
    const bool both = w < plus.windows.size() && w < minus.windows.size();
    if (both && plus.windows[w].end_date == minus.windows[w].end_date) continue;
    if (++count <= 10) {
      mismatch += mismatch.empty() ? "" : ", ";
      mismatch += w < plus.windows.size() ? format_date(plus.windows[w].end_date) : "<none>";
      mismatch += "/";
      mismatch += w < minus.windows.size() ? format_date(minus.windows[w].end_date) : "<none>";
    }
  }
  if (count > 0)
    throw AlignmentError("SAM: plus/minus window end dates differ at " + std::to_string(count) +
                         " positions: " + mismatch);
}

template <class Pick>
SamSeries sam_from(const RollingSpillovers& plus, const RollingSpillovers& minus, SamKind kind, std::string label,
                   Pick pick) {
  check_aligned(plus, minus);
  SamSeries s{kind, std::move(label), {}, {}, {}};
  for (std::size_t w = 0; w < plus.windows.size(); ++w) {
    const auto& p = plus.windows[w];
    const auto& m = minus.windows[w];
    s.dates.push_back(p.end_date);
    if (p.missing() || m.missing()) {
      s.sam.push_back(std::numeric_limits<double>::quiet_NaN());
      s.flags.push_back(SamFlag::missing);
      continue;
    }
    auto v = sam_value(pick(*p.indices), pick(*m.indices));
    s.sam.push_back(v.value);
    s.flags.push_back(v.degenerate ? SamFlag::degenerate : SamFlag::ok);
  }
  return s;
}

}  // namespace detail

/// SAM of the total spillover index, window by window.
inline SamSeries sam_total(const RollingSpillovers& plus, const RollingSpillovers& minus) {
  return detail::sam_from(plus, minus, SamKind::total(), "total", [](const SpilloverSet& s) { return s.total; });
}

/// SAM of the spillovers received by (Direction::from) or transmitted by (Direction::to) one asset.
inline SamSeries sam_directional(const RollingSpillovers& plus, const RollingSpillovers& minus, int asset,
                                 Direction direction) {
  if (asset < 0 || static_cast<std::size_t>(asset) >= plus.assets.size())
    throw ValidationError("sam_directional: asset index out of range");
  const std::string label = std::string(direction == Direction::from ? "from_" : "to_") +
                            plus.assets[static_cast<std::size_t>(asset)];
  return detail::sam_from(plus, minus, SamKind::directional(asset, direction), label,
                          [asset, direction](const SpilloverSet& s) {
                            return direction == Direction::from ? s.from_others(asset) : s.to_others(asset);
                          });
}

// ---------------------------------------------------------------------------
// CSV export

/// `date,total,from_*,to_*,net_*,spectral_radius,flag`; missing windows print `nan`.
inline void write_spillover_csv(std::ostream& out, const RollingSpillovers& series) {
  out << "date,total";
  for (const char* prefix : {"from_", "to_", "net_"})
    for (const auto& a : series.assets) out << ',' << prefix << a;
  out << ",spectral_radius,flag\n";
  const auto n = static_cast<Eigen::Index>(series.assets.size());
  for (const auto& w : series.windows) {
    out << format_date(w.end_date);
    if (w.missing()) {
      for (Eigen::Index k = 0; k < 3 * n + 2; ++k) out << ",nan";
      out << ",missing\n";
      continue;
    }
    const auto& s = *w.indices;
    out << ',' << format_double(s.total);
    for (const Eigen::VectorXd* v : {&s.from_others, &s.to_others, &s.net})
      for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_double((*v)(i));
    out << ',' << format_double(w.spectral_radius) << ',' << (w.unstable() ? "unstable" : "ok") << '\n';
  }
}

/// `date,sam,ci_low,ci_high,flag`.
inline void write_sam_csv(std::ostream& out, const SamSeries& s) {
  out << "date,sam,ci_low,ci_high,flag\n";
  for (std::size_t w = 0; w < s.sam.size(); ++w)
    out << format_date(s.dates[w]) << ',' << format_double(s.sam[w]) << ',' << format_double(s.ci_low) << ','
        << format_double(s.ci_high) << ',' << to_string(s.flags[w]) << '\n';
}

/// Receiving asset per row, source asset per column, 10 significant digits.
inline void write_fevd_csv(std::ostream& out, const std::vector<std::string>& assets, const FevdResult& fevd) {
  out << "receiver";
  for (const auto& a : assets) out << ',' << a;
  out << '\n';
  for (Eigen::Index i = 0; i < fevd.omega_norm.rows(); ++i) {
    out << assets[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < fevd.omega_norm.cols(); ++j) out << ',' << format_double(fevd.omega_norm(i, j), 10);
    out << '\n';
  }
}

}  // namespace asyspill
