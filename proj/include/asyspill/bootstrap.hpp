#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "asyspill/asymmetry.hpp"
#include "asyspill/parallel.hpp"
#include "asyspill/spillover.hpp"
#include "asyspill/sv_model.hpp"

namespace asyspill {

struct Quantiles {
  double q025 = 0.0;
  double q50 = 0.0;
  double q975 = 0.0;
};

/// Linear-interpolation sample quantile (R type 7) of sorted data.
inline double sorted_quantile(const std::vector<double>& sorted, double prob) {
  if (sorted.empty()) throw ValidationError("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline Quantiles quantiles_95(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return {sorted_quantile(values, 0.025), sorted_quantile(values, 0.5), sorted_quantile(values, 0.975)};
}

struct BootstrapConfig {
  SvParams params;
  int days = 200;
  int replications = 1000;
  std::uint64_t seed = 20240601;
  Subsample subsample = Subsample::five_minute;
  VarSpec var;
  SigmaConvention convention = SigmaConvention::variance;
  unsigned threads = 1;
};

/// Null distribution of total-spillover SAM under the symmetric SV model.
struct SamDistribution {
  int replications = 0;            // requested
  int dropped = 0;                 // failed fits, excluded from sam_values
  std::vector<double> sam_values;  // in replication order; NaN marks a dropped replication
  Quantiles quantiles;
  double mean = 0.0;

  /// The retained (non-dropped) draws.
  std::vector<double> retained() const {
    std::vector<double> out;
    for (double v : sam_values)
      if (!std::isnan(v)) out.push_back(v);
    return out;
  }
};

/// SAM of a single replication: simulate, then one full-panel window on each semivariance panel.
inline double replication_sam(const BootstrapConfig& cfg, std::uint64_t replication) {
  auto panel = simulate_panel(cfg.params, cfg.days, substream_seed(cfg.seed, replication), cfg.subsample);
  const auto plus = estimate_spillovers(panel.rs_plus.values, cfg.var, cfg.convention);
  const auto minus = estimate_spillovers(panel.rs_minus.values, cfg.var, cfg.convention);
  return sam_value(plus.indices.total, minus.indices.total).value;
}

/// Replications run in parallel on independent sub-streams; the result is identical for
/// any thread count. More than 1% failed replications is a NumericalError.
inline SamDistribution bootstrap_sam(const BootstrapConfig& cfg) {
  cfg.params.validate();
  cfg.var.validate();
  if (cfg.replications < 1) throw ValidationError("bootstrap: replications must be >= 1");
  if (cfg.days < cfg.var.min_window(2))
    throw ValidationError("bootstrap: " + std::to_string(cfg.days) + " days is too short for VAR(" +
                          std::to_string(cfg.var.lag_order) + "); need >= " + std::to_string(cfg.var.min_window(2)));

  SamDistribution dist;
  dist.replications = cfg.replications;
  dist.sam_values.assign(static_cast<std::size_t>(cfg.replications), std::numeric_limits<double>::quiet_NaN());
  parallel_for(dist.sam_values.size(), cfg.threads, [&](std::size_t r) {
    try {
      dist.sam_values[r] = replication_sam(cfg, r);
    } catch (const NumericalError&) {
      // left as NaN, counted below
    }
  });
  dist.dropped = static_cast<int>(std::count_if(dist.sam_values.begin(), dist.sam_values.end(),
                                                [](double v) { return std::isnan(v); }));
  if (dist.dropped * 100 > cfg.replications)
    throw NumericalError("bootstrap: " + std::to_string(dist.dropped) + " of " + std::to_string(cfg.replications) +
                         " replications failed (more than 1%)");
  auto kept = dist.retained();
  if (kept.empty()) throw NumericalError("bootstrap: every replication failed");
  dist.quantiles = quantiles_95(kept);
  double sum = 0.0;
  for (double v : kept) sum += v;
  dist.mean = sum / static_cast<double>(kept.size());
  return dist;
}

enum class SymmetryDecision { fail_to_reject, reject, not_available };

inline const char* to_string(SymmetryDecision d) {
  switch (d) {
    case SymmetryDecision::fail_to_reject: return "fail_to_reject";
    case SymmetryDecision::reject: return "reject";
    case SymmetryDecision::not_available: return "not_available";
  }
  return "?";
}

/// H0: SAM = 0. Rejects when the observed value lies outside the closed band [q2.5, q97.5].
inline SymmetryDecision test_symmetry(double sam, const Quantiles& band) {
  if (std::isnan(sam)) return SymmetryDecision::not_available;
  return (sam < band.q025 || sam > band.q975) ? SymmetryDecision::reject : SymmetryDecision::fail_to_reject;
}

inline std::vector<SymmetryDecision> test_symmetry(const SamSeries& series, const SamDistribution& dist) {
  std::vector<SymmetryDecision> out;
  out.reserve(series.sam.size());
  for (double v : series.sam) out.push_back(test_symmetry(v, dist.quantiles));
  return out;
}

}  // namespace asyspill
