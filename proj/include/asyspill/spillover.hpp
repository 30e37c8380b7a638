#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "asyspill/error.hpp"
#include "asyspill/var_model.hpp"

namespace asyspill {

/// How the scaling term sigma_jj of the generalized FEVD is read from Sigma_eps.
enum class SigmaConvention {
  variance,  // sigma_jj = (Sigma_eps)_jj, the generalized-impulse convention
  std_dev,   // sigma_jj = sqrt((Sigma_eps)_jj)
};

inline const char* to_string(SigmaConvention c) {
  return c == SigmaConvention::variance ? "variance" : "std_dev";
}

/// H-step generalized variance decomposition; row i is the variable being forecast.
struct FevdResult {
  Eigen::MatrixXd omega_raw;
  Eigen::MatrixXd omega_norm;  // rows sum to one
  int horizon = 0;
};

/// Generalized forecast-error variance shares
///
///   w_ij = s_jj^{-1} sum_h (e_i' Psi_h S e_j)^2 / sum_h (e_i' Psi_h S Psi_h' e_i)
///
/// over h = 0..H-1, then row-normalized. Throws DegenerateCovarianceError if a forecast
/// variance or a scaling term is not strictly positive.
inline FevdResult generalized_fevd(const Eigen::MatrixXd& sigma, const std::vector<Eigen::MatrixXd>& psi, int horizon,
                                   SigmaConvention convention = SigmaConvention::variance) {
  if (horizon < 1) throw ValidationError("generalized_fevd: horizon must be >= 1");
  if (psi.size() < static_cast<std::size_t>(horizon))
    throw ValidationError("generalized_fevd: fewer MA matrices than the horizon");
  const Eigen::Index n = sigma.rows();
  if (sigma.cols() != n || psi.front().rows() != n || psi.front().cols() != n)
    throw ValidationError("generalized_fevd: dimension mismatch");

  Eigen::VectorXd scale = sigma.diagonal();
  if (!(scale.array() > 0.0).all())
    throw DegenerateCovarianceError("generalized_fevd: non-positive residual variance");
  if (convention == SigmaConvention::std_dev) scale = scale.cwiseSqrt();

  Eigen::MatrixXd numer = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd denom = Eigen::VectorXd::Zero(n);
  for (int h = 0; h < horizon; ++h) {
    const Eigen::MatrixXd& p = psi[static_cast<std::size_t>(h)];
    const Eigen::MatrixXd ps = p * sigma;
    numer += ps.cwiseAbs2();
    denom += (ps * p.transpose()).diagonal();
  }
  if (!(denom.array() > 0.0).all())
    throw DegenerateCovarianceError("generalized_fevd: zero forecast-error variance");

  FevdResult out;
  out.horizon = horizon;
  out.omega_raw = denom.cwiseInverse().asDiagonal() * numer * scale.cwiseInverse().asDiagonal();
  out.omega_norm = out.omega_raw.array().colwise() / out.omega_raw.rowwise().sum().array();
  return out;
}

inline FevdResult generalized_fevd(const VarFit& fit, const std::vector<Eigen::MatrixXd>& psi, int horizon,
                                   SigmaConvention convention = SigmaConvention::variance) {
  return generalized_fevd(fit.sigma_eps, psi, horizon, convention);
}

/// Total, directional, net and pairwise spillovers, all in percent with the 1/N factor.
struct SpilloverSet {
  double total = 0.0;
  Eigen::VectorXd from_others;  // received by i
  Eigen::VectorXd to_others;    // transmitted by i
  Eigen::VectorXd net;
  Eigen::MatrixXd pairwise;     // S_ij = 100/N (w_ji - w_ij)
};

inline SpilloverSet spillover_indices(const Eigen::MatrixXd& omega_norm) {
  const Eigen::Index n = omega_norm.rows();
  const double k = 100.0 / static_cast<double>(n);
  Eigen::MatrixXd off = omega_norm;
  off.diagonal().setZero();

  SpilloverSet s;
  s.from_others = k * off.rowwise().sum();
  s.to_others = k * off.colwise().sum().transpose();
  s.net = s.to_others - s.from_others;
  s.total = k * off.sum();
  s.pairwise.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s.pairwise(i, i) = 0.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = k * (omega_norm(j, i) - omega_norm(i, j));
      s.pairwise(i, j) = v;
      s.pairwise(j, i) = -v;
    }
  }
  return s;
}

inline SpilloverSet spillover_indices(const FevdResult& fevd) { return spillover_indices(fevd.omega_norm); }

/// Fit -> MA coefficients -> FEVD -> indices for one window.
struct SpilloverEstimate {
  FevdResult fevd;
  SpilloverSet indices;
  double spectral_radius = 0.0;
};

inline SpilloverEstimate estimate_spillovers(const Eigen::Ref<const Eigen::MatrixXd>& window, const VarSpec& spec,
                                             SigmaConvention convention = SigmaConvention::variance,
                                             std::string_view label = {}) {
  VarFit fit = fit_var(window, spec, label);
  auto psi = ma_coefficients(fit, spec.horizon);
  auto fevd = generalized_fevd(fit, psi, spec.horizon, convention);
  auto indices = spillover_indices(fevd);
  return {std::move(fevd), std::move(indices), fit.spectral_radius};
}

}  // namespace asyspill
