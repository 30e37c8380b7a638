#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "asyspill/ingest.hpp"
#include "asyspill/measure_panel.hpp"

namespace asyspill {

/// Realized variance and its split into downside and upside semivariance.
struct Semivariances {
  double rv = 0.0;
  double rs_minus = 0.0;
  double rs_plus = 0.0;
};

/// Sum of squared returns, and the same sum restricted to strictly negative and strictly
/// positive returns. Zero returns add nothing to either side, so rv == rs_minus + rs_plus
/// up to rounding.
inline Semivariances semivariances(std::span<const double> returns) {
  Semivariances s;
  for (double r : returns) {
    const double sq = r * r;
    s.rv += sq;
    if (r < 0.0)
      s.rs_minus += sq;
    else if (r > 0.0)
      s.rs_plus += sq;
  }
  return s;
}

/// Realized correlation sum(a b) / sqrt(sum(a^2) sum(b^2)) of two same-length return vectors.
inline double realized_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("realized_correlation: length mismatch");
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

/// First differences of a log-price path.
inline std::vector<double> log_returns(std::span<const double> log_prices) {
  std::vector<double> out;
  if (log_prices.size() < 2) return out;
  out.reserve(log_prices.size() - 1);
  for (std::size_t i = 1; i < log_prices.size(); ++i) out.push_back(log_prices[i] - log_prices[i - 1]);
  return out;
}

/// Intraday returns of one (day, asset) cell; overnight moves are not included.
inline std::vector<double> daily_returns(const IntradayPanel& panel, std::size_t day, std::size_t asset) {
  if (day >= panel.num_days() || asset >= panel.num_assets())
    throw std::out_of_range("daily_returns: index out of range");
  return log_returns(panel.day_log_prices(day, asset));
}

struct RealizedPanels {
  MeasurePanel rv;
  MeasurePanel rs_minus;
  MeasurePanel rs_plus;
};

inline RealizedPanels realized_measures(const IntradayPanel& panel) {
  if (panel.num_days() == 0 || panel.num_assets() == 0)
    throw ValidationError("realized_measures: empty panel");
  const auto d = static_cast<Eigen::Index>(panel.num_days());
  const auto n = static_cast<Eigen::Index>(panel.num_assets());
  RealizedPanels out{{MeasureKind::rv, panel.assets, panel.days, Eigen::MatrixXd(d, n)},
                     {MeasureKind::rs_minus, panel.assets, panel.days, Eigen::MatrixXd(d, n)},
                     {MeasureKind::rs_plus, panel.assets, panel.days, Eigen::MatrixXd(d, n)}};
  for (Eigen::Index day = 0; day < d; ++day) {
    for (Eigen::Index a = 0; a < n; ++a) {
      auto r = daily_returns(panel, static_cast<std::size_t>(day), static_cast<std::size_t>(a));
      auto s = semivariances(r);
      out.rv.values(day, a) = s.rv;
      out.rs_minus.values(day, a) = s.rs_minus;
      out.rs_plus.values(day, a) = s.rs_plus;
    }
  }
  return out;
}

/// log(x + eps) elementwise; optional conditioning step before VAR estimation.
inline MeasurePanel log_transform(MeasurePanel panel, double eps = 1e-12) {
  panel.values = (panel.values.array() + eps).log().matrix();
  return panel;
}

}  // namespace asyspill
