#include "throwbox/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace throwbox {

MeanSem mean_sem(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean_sem: empty sample");
  const Eigen::Map<const Eigen::ArrayXd> a(xs.data(), static_cast<Eigen::Index>(xs.size()));
  MeanSem out;
  out.mean = a.mean();
  if (xs.size() > 1) {
    out.sd = std::sqrt((a - out.mean).square().sum() / static_cast<double>(xs.size() - 1));
    out.sem = out.sd / std::sqrt(static_cast<double>(xs.size()));
  }
  return out;
}

double coefficient_of_variation(std::span<const double> xs) {
  const MeanSem m = mean_sem(xs);
  if (m.mean == 0.0) throw std::domain_error("coefficient_of_variation: zero mean");
  return m.sd / std::abs(m.mean);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    // Step past every copy of the smaller value so ties are handled jointly.
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

LinearFit linear_regression(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) throw std::invalid_argument("linear_regression: need >= 3 paired points");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(n, 2);
  design.col(0).setOnes();
  design.col(1) = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
  const Eigen::Map<const Eigen::VectorXd> yy(y.data(), n);
  const Eigen::Vector2d beta = design.colPivHouseholderQr().solve(yy);
  const double rss = (yy - design * beta).squaredNorm();
  const Eigen::VectorXd xc = design.col(1).array() - design.col(1).mean();
  LinearFit out;
  out.intercept = beta[0];
  out.slope = beta[1];
  const double sxx = xc.squaredNorm();
  out.slope_se = sxx > 0.0 ? std::sqrt(rss / static_cast<double>(n - 2) / sxx) : 0.0;
  return out;
}

double beta_one_cdf(double x, int n) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(n - 1) * std::log1p(-x));
}

}  // namespace throwbox
