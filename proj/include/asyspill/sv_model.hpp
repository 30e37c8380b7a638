#pragma once

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "asyspill/error.hpp"
#include "asyspill/measure_panel.hpp"
#include "asyspill/realized.hpp"

namespace asyspill {

using Rng = boost::random::mt19937_64;

/// SplitMix64 finalizer.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of sub-stream `index` under `root`: splitmix64(root XOR splitmix64(index)).
/// Streams depend only on (root, index), never on evaluation order.
inline std::uint64_t substream_seed(std::uint64_t root, std::uint64_t index) {
  return splitmix64(root ^ splitmix64(index));
}

/// Bivariate factor stochastic volatility with optional compound-Poisson jumps:
///
///   dX_i = mu_i dt + gamma_i s_i dB_i + sqrt(1 - gamma_i^2) s_i dW + c_i dN_i
///   s_i  = exp(beta0 + beta1 v_i)
///   dv_i = alpha v_i dt + dB_i
///
/// with time measured in trading days (t in [0, 1] per day). Jumps are off by default.
struct SvParams {
  std::array<double, 2> mu{0.0, 0.0};
  double beta0 = -5.0 / 16.0;
  double beta1 = 1.0 / 8.0;
  double alpha = -1.0 / 40.0;
  std::array<double, 2> gamma{-0.3, -0.3};
  double jump_sd = 0.01;
  double jump_intensity = 0.0;  // expected jumps per asset per day
  int steps_per_day = 23400;
  bool restart_v_each_day = true;

  /// Variance of the stationary distribution of v, 1 / (-2 alpha).
  double stationary_v_variance() const { return -1.0 / (2.0 * alpha); }

  /// Instantaneous correlation of the two diffusion parts.
  double spot_correlation() const {
    return std::sqrt((1.0 - gamma[0] * gamma[0]) * (1.0 - gamma[1] * gamma[1]));
  }

  void validate() const {
    for (double g : gamma)
      if (!(std::abs(g) < 1.0)) throw ValidationError("SV model: |gamma_i| must be < 1");
    if (!(alpha < 0.0)) throw ValidationError("SV model: alpha must be negative");
    if (steps_per_day < 1) throw ValidationError("SV model: steps_per_day must be positive");
    if (!(jump_intensity >= 0.0)) throw ValidationError("SV model: jump intensity must be >= 0");
    if (!(jump_sd >= 0.0)) throw ValidationError("SV model: jump_sd must be >= 0");
  }
};

struct SvState {
  std::array<double, 2> v{0.0, 0.0};
};

struct SimulatedDay {
  std::array<std::vector<double>, 2> log_prices;  // every `stride`-th grid point, from 0
  SvState end_state;
};

/// Euler scheme over one trading day starting from log-price 0. With
/// restart_v_each_day the incoming state is ignored and v is redrawn from its
/// stationary law.
inline SimulatedDay simulate_day(const SvParams& p, const SvState& state, Rng& rng, int stride = 1) {
  if (stride < 1 || p.steps_per_day % stride != 0)
    throw ValidationError("simulate_day: stride must divide steps_per_day");
  boost::random::normal_distribution<double> normal;

  std::array<double, 2> v = state.v;
  if (p.restart_v_each_day) {
    const double sd = std::sqrt(p.stationary_v_variance());
    for (double& vi : v) vi = sd * normal(rng);
  }

  // Jump schedule per asset: (step, size), sorted by step.
  std::array<std::vector<std::pair<int, double>>, 2> jumps;
  if (p.jump_intensity > 0.0) {
    boost::random::poisson_distribution<int, double> count(p.jump_intensity);
    boost::random::uniform_int_distribution<int> when(0, p.steps_per_day - 1);
    for (auto& list : jumps) {
      const int k = count(rng);
      for (int j = 0; j < k; ++j) {
        const int step = when(rng);
        list.emplace_back(step, p.jump_sd * normal(rng));
      }
      std::stable_sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    }
  }

  const double dt = 1.0 / p.steps_per_day;
  const double sqdt = std::sqrt(dt);
  const std::array<double, 2> idio{p.gamma[0] * sqdt, p.gamma[1] * sqdt};
  const std::array<double, 2> common{std::sqrt(1.0 - p.gamma[0] * p.gamma[0]) * sqdt,
                                     std::sqrt(1.0 - p.gamma[1] * p.gamma[1]) * sqdt};
  const std::array<double, 2> drift{p.mu[0] * dt, p.mu[1] * dt};
  const double decay = p.alpha * dt;

  SimulatedDay day;
  const auto samples = static_cast<std::size_t>(p.steps_per_day / stride) + 1;
  for (auto& lp : day.log_prices) {
    lp.reserve(samples);
    lp.push_back(0.0);
  }
  std::array<double, 2> x{0.0, 0.0};
  std::array<std::size_t, 2> next_jump{0, 0};
  for (int step = 0; step < p.steps_per_day; ++step) {
    const double zb0 = normal(rng);
    const double zb1 = normal(rng);
    const double zw = normal(rng);
    const double s0 = std::exp(p.beta0 + p.beta1 * v[0]);
    const double s1 = std::exp(p.beta0 + p.beta1 * v[1]);
    x[0] += drift[0] + s0 * (idio[0] * zb0 + common[0] * zw);
    x[1] += drift[1] + s1 * (idio[1] * zb1 + common[1] * zw);
    v[0] += decay * v[0] + sqdt * zb0;
    v[1] += decay * v[1] + sqdt * zb1;
    for (int i = 0; i < 2; ++i) {
      auto& list = jumps[static_cast<std::size_t>(i)];
      auto& next = next_jump[static_cast<std::size_t>(i)];
      while (next < list.size() && list[next].first == step) x[static_cast<std::size_t>(i)] += list[next++].second;
    }
    if ((step + 1) % stride == 0) {
      day.log_prices[0].push_back(x[0]);
      day.log_prices[1].push_back(x[1]);
    }
  }
  day.end_state.v = v;
  return day;
}

/// Intraday sampling of simulated paths before computing realized measures.
enum class Subsample {
  five_minute,  // 78 returns over a 6.5-hour day
  obs36,        // 36 equally spaced returns per day
};

inline int returns_per_day(Subsample s) { return s == Subsample::five_minute ? 78 : 36; }

inline const char* to_string(Subsample s) { return s == Subsample::five_minute ? "5min" : "36obs"; }

struct SimulatedPanel {
  MeasurePanel rv;
  MeasurePanel rs_minus;
  MeasurePanel rs_plus;
  std::uint64_t seed = 0;
};

/// Placeholder calendar for simulated panels: consecutive days from 2000-01-01.
inline std::vector<Date> synthetic_dates(std::size_t days) {
  std::vector<Date> out;
  const std::chrono::sys_days start{std::chrono::year{2000} / std::chrono::January / 1};
  for (std::size_t d = 0; d < days; ++d) out.emplace_back(start + std::chrono::days{static_cast<int>(d)});
  return out;
}

/// Simulates `days` trading days and computes daily RV/RS-/RS+ of both assets.
inline SimulatedPanel simulate_panel(const SvParams& params, int days, std::uint64_t seed,
                                     Subsample subsample = Subsample::five_minute) {
  params.validate();
  if (days < 1) throw ValidationError("simulate_panel: days must be >= 1");
  const int n_returns = returns_per_day(subsample);
  if (params.steps_per_day % n_returns != 0)
    throw ValidationError("simulate_panel: steps_per_day (" + std::to_string(params.steps_per_day) +
                          ") is not a multiple of " + std::to_string(n_returns));
  const int stride = params.steps_per_day / n_returns;

  const std::vector<std::string> assets{"X1", "X2"};
  const auto dates = synthetic_dates(static_cast<std::size_t>(days));
  SimulatedPanel out{{MeasureKind::rv, assets, dates, Eigen::MatrixXd(days, 2)},
                     {MeasureKind::rs_minus, assets, dates, Eigen::MatrixXd(days, 2)},
                     {MeasureKind::rs_plus, assets, dates, Eigen::MatrixXd(days, 2)},
                     seed};
  Rng rng(seed);
  SvState state;
  for (int d = 0; d < days; ++d) {
    auto day = simulate_day(params, state, rng, stride);
    state = day.end_state;
    for (int a = 0; a < 2; ++a) {
      auto s = semivariances(log_returns(day.log_prices[static_cast<std::size_t>(a)]));
      out.rv.values(d, a) = s.rv;
      out.rs_minus.values(d, a) = s.rs_minus;
      out.rs_plus.values(d, a) = s.rs_plus;
    }
  }
  return out;
}

}  // namespace asyspill
