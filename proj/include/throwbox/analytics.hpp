#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace throwbox {

/// Inputs of the closed-form coverage formulas. `denominator` is
/// sigma^2 + psi (psi - 1); for a constant visit count mu it is mu^2 - mu.
template <typename Scalar = double>
struct FormulaParams {
  int n_places = 100;
  Scalar denominator = Scalar(380);
  Scalar threshold = Scalar(0);

  void validate() const {
    if (n_places < 2) throw std::invalid_argument("formula: N must be >= 2");
    if (!(denominator > Scalar(0))) throw std::domain_error("formula: denominator must be positive");
    if (threshold < Scalar(0)) throw std::invalid_argument("formula: threshold v must be >= 0");
  }
};

namespace detail {

/// base^(N-1) with base clamped at 0, computed as exp((N-1) log1p(base-1)).
template <typename Scalar>
Scalar clamped_power(Scalar one_minus, int exponent) {
  using std::exp;
  using std::log1p;
  if (one_minus >= Scalar(1)) return Scalar(0);
  return exp(Scalar(exponent) * log1p(-one_minus));
}

/// (N-1)^(1/(N-1)) - 1, without cancellation.
template <typename Scalar>
Scalar root_minus_one(int n_places) {
  using std::expm1;
  using std::log;
  const Scalar m = Scalar(n_places - 1);
  return expm1(log(m) / m);
}

}  // namespace detail

/// F_v(k): fraction of places whose thresholded-projection degree is >= k.
///   x = 1 - (k/(N-1))^(1/(N-1)),  F = (1 - v/(D x))^(N-1)
template <typename Scalar>
Scalar cumulative_degree(Scalar k, const FormulaParams<Scalar>& p) {
  using std::exp;
  using std::expm1;
  using std::log;
  p.validate();
  const Scalar m = Scalar(p.n_places - 1);
  if (k < Scalar(0) || !(k < m)) throw std::domain_error("cumulative_degree: k must lie in [0, N-1)");
  if (p.threshold == Scalar(0)) return Scalar(1);
  const Scalar x = k == Scalar(0) ? Scalar(1) : -expm1(log(k / m) / m);
  return detail::clamped_power(p.threshold / (p.denominator * x), p.n_places - 1);
}

/// Expected thresholded-projection degree of a place with attractiveness theta.
template <typename Scalar>
Scalar expected_degree(Scalar theta, const FormulaParams<Scalar>& p) {
  p.validate();
  if (!(theta > Scalar(0) && theta < Scalar(1))) throw std::domain_error("expected_degree: theta must lie in (0, 1)");
  return Scalar(p.n_places - 1) * detail::clamped_power(p.threshold / (p.denominator * theta), p.n_places - 1);
}

/// Analytic size of the largest component:
///   G_b = N [1 - r/(r-1) * v/D]^(N-1),  r = (N-1)^(1/(N-1)).
template <typename Scalar>
Scalar gb_analytic(const FormulaParams<Scalar>& p) {
  p.validate();
  if (p.n_places < 3) throw std::domain_error("gb_analytic: N must be >= 3");
  const Scalar rm1 = detail::root_minus_one<Scalar>(p.n_places);
  const Scalar factor = (rm1 + Scalar(1)) / rm1;
  const Scalar g = Scalar(p.n_places) * detail::clamped_power(factor * p.threshold / p.denominator, p.n_places - 1);
  return std::clamp(g, Scalar(0), Scalar(p.n_places));
}

/// Simplified coverage G_d = N - k N^2 p (N-1) / (mu (mu-1)), clamped to [0, N].
template <typename Scalar>
Scalar gd_simplified(Scalar p, int n_places, Scalar mu, Scalar k_const) {
  if (!(mu >= Scalar(2))) throw std::domain_error("gd_simplified: mu must be >= 2");
  if (p < Scalar(0) || p > Scalar(1)) throw std::invalid_argument("gd_simplified: p must lie in [0, 1]");
  if (!(k_const > Scalar(0))) throw std::invalid_argument("gd_simplified: k must be positive");
  const Scalar n = Scalar(n_places);
  const Scalar g = n - k_const * n * n * p * (n - Scalar(1)) / (mu * (mu - Scalar(1)));
  return std::clamp(g, Scalar(0), n);
}

/// Asymptotic growth rate of W(i, j) per agent: D theta_i theta_j.
template <typename Scalar>
Scalar weight_growth_rate(Scalar theta_i, Scalar theta_j, Scalar denominator) {
  return denominator * theta_i * theta_j;
}

/// Elementwise D theta theta^T: the expected projection weights per agent.
template <typename Derived>
auto weight_growth_matrix(const Eigen::MatrixBase<Derived>& theta, typename Derived::Scalar denominator) {
  return (denominator * theta * theta.transpose()).eval();
}

/// gb_analytic over a vector of thresholds.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> gb_analytic_curve(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v,
                                                         int n_places, Scalar denominator) {
  return v.unaryExpr([&](Scalar vi) { return gb_analytic(FormulaParams<Scalar>{n_places, denominator, vi}); });
}

}  // namespace throwbox
