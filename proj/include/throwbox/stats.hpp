#pragma once

#include <functional>
#include <span>
#include <vector>

namespace throwbox {

struct MeanSem {
  double mean = 0.0;
  double sem = 0.0;
  double sd = 0.0;
};

/// Sample mean, sample standard deviation and its standard error.
MeanSem mean_sem(std::span<const double> xs);

/// Sample standard deviation over mean.
double coefficient_of_variation(std::span<const double> xs);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
double ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};

/// Ordinary least squares y = intercept + slope x.
LinearFit linear_regression(std::span<const double> x, std::span<const double> y);

/// CDF of Beta(1, n - 1): 1 - (1 - x)^(n - 1).
double beta_one_cdf(double x, int n);

}  // namespace throwbox
