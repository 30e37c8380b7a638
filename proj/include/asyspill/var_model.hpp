#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "asyspill/error.hpp"

namespace asyspill {

struct VarSpec {
  int lag_order = 2;
  bool include_intercept = true;
  int horizon = 10;

  int regressors_per_equation(Eigen::Index n) const {
    return lag_order * static_cast<int>(n) + (include_intercept ? 1 : 0);
  }

  /// Smallest window (rows) that leaves at least one residual degree of freedom.
  int min_window(Eigen::Index n) const { return lag_order + regressors_per_equation(n) + 1; }

  void validate() const {
    if (lag_order < 1) throw ValidationError("VAR lag order must be >= 1");
    if (horizon < 1) throw ValidationError("forecast horizon must be >= 1");
  }
};

/// Least-squares VAR(p) estimate: y_t = c + sum_i Phi_i y_{t-i} + e_t.
struct VarFit {
  std::vector<Eigen::MatrixXd> phi;  // Phi_1 .. Phi_p
  Eigen::VectorXd intercept;         // empty without intercept
  Eigen::MatrixXd sigma_eps;
  Eigen::MatrixXd residuals;         // (T - p) x N
  double spectral_radius = 0.0;
  double condition_number = 0.0;     // of the column-equilibrated regressor matrix

  Eigen::Index dim() const { return sigma_eps.rows(); }
  int lag_order() const { return static_cast<int>(phi.size()); }
  bool stable() const { return spectral_radius < 1.0; }
};

/// Regressors whose column-equilibrated condition number exceeds this are rejected.
inline constexpr double kMaxConditionNumber = 1e12;

/// The Np x Np first-order form of a VAR(p): top block row holds Phi_1..Phi_p,
/// identities on the sub-diagonal.
inline Eigen::MatrixXd companion_matrix(const std::vector<Eigen::MatrixXd>& phi) {
  const Eigen::Index n = phi.empty() ? 0 : phi.front().rows();
  const Eigen::Index np = n * static_cast<Eigen::Index>(phi.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(np, np);
  for (std::size_t i = 0; i < phi.size(); ++i) c.block(0, static_cast<Eigen::Index>(i) * n, n, n) = phi[i];
  if (np > n) c.bottomLeftCorner(np - n, np - n).setIdentity();
  return c;
}

inline double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue computation did not converge");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

namespace detail {

struct LeastSquares {
  Eigen::MatrixXd coef;  // k x N
  Eigen::MatrixXd residuals;
  double condition_number;
};

inline Eigen::MatrixXd lagged_regressors(const Eigen::Ref<const Eigen::MatrixXd>& y, int p, bool intercept) {
  const Eigen::Index t_eff = y.rows() - p;
  const Eigen::Index n = y.cols();
  Eigen::MatrixXd x(t_eff, p * n + (intercept ? 1 : 0));
  Eigen::Index col = 0;
  if (intercept) x.col(col++).setOnes();
  for (int lag = 1; lag <= p; ++lag, col += n) x.middleCols(col, n) = y.middleRows(p - lag, t_eff);
  return x;
}

inline LeastSquares least_squares(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, std::string_view label) {
  Eigen::VectorXd scale = x.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < scale.size(); ++j)
    if (!(scale(j) > 0.0)) throw SingularFitError("singular VAR fit" + std::string(label) + ": zero regressor column");
  Eigen::MatrixXd xs = x * scale.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(xs, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  if (!(cond <= kMaxConditionNumber))
    throw SingularFitError("singular VAR fit" + std::string(label) + ": regressor condition number " +
                           std::to_string(cond) + " exceeds 1e12");
  Eigen::MatrixXd coef = scale.cwiseInverse().asDiagonal() * svd.solve(y);
  Eigen::MatrixXd resid = y - x * coef;
  return {std::move(coef), std::move(resid), cond};
}

}  // namespace detail

/// Equation-by-equation OLS on a T x N window. `label` (e.g. the window start date) is
/// woven into error messages.
inline VarFit fit_var(const Eigen::Ref<const Eigen::MatrixXd>& window, const VarSpec& spec,
                      std::string_view label = {}) {
  spec.validate();
  const Eigen::Index t = window.rows();
  const Eigen::Index n = window.cols();
  const std::string where = label.empty() ? std::string{} : " (window starting " + std::string(label) + ")";
  if (n < 1) throw ValidationError("fit_var: window has no columns");
  if (t < spec.min_window(n))
    throw ValidationError("fit_var: window of " + std::to_string(t) + " rows is too short for VAR(" +
                          std::to_string(spec.lag_order) + ") in " + std::to_string(n) + " variables; need >= " +
                          std::to_string(spec.min_window(n)) + where);
  if (!window.allFinite()) throw DataError("fit_var: non-finite value in window" + where);

  const int p = spec.lag_order;
  const Eigen::MatrixXd x = detail::lagged_regressors(window, p, spec.include_intercept);
  const Eigen::MatrixXd y = window.bottomRows(t - p);
  auto ls = detail::least_squares(x, y, where);

  VarFit fit;
  Eigen::Index row = 0;
  if (spec.include_intercept) fit.intercept = ls.coef.row(row++).transpose();
  for (int lag = 0; lag < p; ++lag, row += n) fit.phi.push_back(ls.coef.middleRows(row, n).transpose());

  const double dof = static_cast<double>(x.rows() - x.cols());
  Eigen::MatrixXd s = ls.residuals.transpose() * ls.residuals / dof;
  fit.sigma_eps = 0.5 * (s + s.transpose());
  fit.residuals = std::move(ls.residuals);
  fit.condition_number = ls.condition_number;
  fit.spectral_radius = spectral_radius(companion_matrix(fit.phi));
  return fit;
}

/// Psi_0 .. Psi_{H-1} of the moving-average form, Psi_h = sum_{j=1}^{min(h,p)} Phi_j Psi_{h-j}.
inline std::vector<Eigen::MatrixXd> ma_coefficients(const std::vector<Eigen::MatrixXd>& phi, int horizon) {
  if (horizon < 1) throw ValidationError("ma_coefficients: horizon must be >= 1");
  if (phi.empty()) throw ValidationError("ma_coefficients: no coefficient matrices");
  const Eigen::Index n = phi.front().rows();
  std::vector<Eigen::MatrixXd> psi;
  psi.reserve(static_cast<std::size_t>(horizon));
  psi.push_back(Eigen::MatrixXd::Identity(n, n));
  for (int h = 1; h < horizon; ++h) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    const int terms = std::min<int>(h, static_cast<int>(phi.size()));
    for (int j = 1; j <= terms; ++j) acc.noalias() += phi[static_cast<std::size_t>(j - 1)] * psi[static_cast<std::size_t>(h - j)];
    psi.push_back(std::move(acc));
  }
  return psi;
}

inline std::vector<Eigen::MatrixXd> ma_coefficients(const VarFit& fit, int horizon) {
  return ma_coefficients(fit.phi, horizon);
}

struct LagCriterion {
  int lag_order;
  double aic;
  double bic;
};

/// AIC/BIC for p = 1..max_lag on a common estimation sample. Diagnostic only.
inline std::vector<LagCriterion> lag_order_criteria(const Eigen::Ref<const Eigen::MatrixXd>& window, int max_lag,
                                                    bool include_intercept = true) {
  std::vector<LagCriterion> out;
  const Eigen::Index n = window.cols();
  for (int p = 1; p <= max_lag; ++p) {
    const Eigen::Index skip = max_lag - p;
    auto sample = window.bottomRows(window.rows() - skip);
    const Eigen::MatrixXd x = detail::lagged_regressors(sample, p, include_intercept);
    if (x.rows() <= x.cols()) break;
    const Eigen::MatrixXd y = sample.bottomRows(sample.rows() - p);
    auto ls = detail::least_squares(x, y, {});
    const double t_eff = static_cast<double>(x.rows());
    const Eigen::MatrixXd sigma_ml = ls.residuals.transpose() * ls.residuals / t_eff;
    const double logdet = std::log(sigma_ml.determinant());
    const double params = static_cast<double>(x.cols() * n);
    out.push_back({p, logdet + 2.0 * params / t_eff, logdet + std::log(t_eff) * params / t_eff});
  }
  return out;
}

}  // namespace asyspill
