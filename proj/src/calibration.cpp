#include "throwbox/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>
#include <unsupported/Eigen/LevenbergMarquardt>
#include <unsupported/Eigen/NumericalDiff>

namespace throwbox {

namespace {

struct ResidualFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  using QRSolver = Eigen::ColPivHouseholderQR<JacobianType>;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  std::span<const CurvePoint> curve;
  const AnalyticCurve* gb;

  int inputs() const { return 2; }
  int values() const { return static_cast<int>(curve.size()); }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    for (std::size_t i = 0; i < curve.size(); ++i) {
      const double v = std::max(0.0, x[0] * curve[i].p + x[1]);
      f[static_cast<Eigen::Index>(i)] = (*gb)(v) - curve[i].coverage;
    }
    return 0;
  }
};

double rmse_of(std::span<const CurvePoint> curve, const AnalyticCurve& gb, double m, double c) {
  double ss = 0.0;
  for (const auto& pt : curve) {
    const double r = gb(std::max(0.0, m * pt.p + c)) - pt.coverage;
    ss += r * r;
  }
  return std::sqrt(ss / static_cast<double>(curve.size()));
}

CalibrationResult fit_points(std::span<const CurvePoint> curve, const AnalyticCurve& gb,
                             const CalibrationOptions& options) {
  if (curve.size() < 2) throw std::invalid_argument("calibration: need at least two points");
  const CurvePoint& lo = curve.front();
  const CurvePoint& hi = curve.back();
  if (!(hi.p > lo.p)) throw std::invalid_argument("calibration: p grid must be increasing");
  if (lo.coverage - hi.coverage < options.min_drop) {
    throw std::runtime_error("calibration: simulated coverage does not decrease over the p range; no informative window");
  }

  CalibrationResult r;
  r.p_lo = lo.p;
  r.p_hi = hi.p;
  r.v_lo = solve_threshold(gb, lo.coverage, options.v_tolerance);
  r.v_hi = solve_threshold(gb, hi.coverage, options.v_tolerance);
  if (!(r.v_hi > r.v_lo)) throw std::runtime_error("calibration: endpoint coverages map to the same threshold");
  r.m = (r.v_hi - r.v_lo) / (r.p_hi - r.p_lo);
  r.c = r.v_lo - r.m * r.p_lo;

  if (options.refine && curve.size() > 2) {
    ResidualFunctor f{curve, &gb};
    Eigen::NumericalDiff<ResidualFunctor> nd(f);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<ResidualFunctor>> lm(nd);
    Eigen::VectorXd x(2);
    x << r.m, r.c;
    lm.minimize(x);
    r.iterations = static_cast<int>(lm.iterations());
    // Keep the refinement only if it helps and stays monotone.
    if (x[0] > 0.0 && rmse_of(curve, gb, x[0], x[1]) < rmse_of(curve, gb, r.m, r.c)) {
      r.m = x[0];
      r.c = x[1];
    }
  }
  r.rmse = rmse_of(curve, gb, r.m, r.c);
  return r;
}

}  // namespace

double solve_threshold(const AnalyticCurve& gb_of_v, double target, double tolerance) {
  if (gb_of_v(0.0) <= target) return 0.0;
  double lo = 0.0;
  double hi = 1e-3;
  int guard = 0;
  while (gb_of_v(hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 200) throw std::runtime_error("calibration: no threshold reaches the target coverage");
  }
  for (int i = 0; i < 200 && hi - lo > tolerance * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (gb_of_v(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

CalibrationResult fit(std::span<const CurvePoint> curve, const AnalyticCurve& gb_of_v,
                      const CalibrationOptions& options) {
  if (curve.size() < 5) throw std::invalid_argument("calibration: need at least five curve points");
  if (!std::is_sorted(curve.begin(), curve.end(), [](const auto& a, const auto& b) { return a.p < b.p; })) {
    throw std::invalid_argument("calibration: curve must be sorted by p");
  }
  CalibrationResult r = fit_points(curve, gb_of_v, options);

  std::vector<CurvePoint> even, odd;
  for (std::size_t i = 0; i < curve.size(); ++i) (i % 2 == 0 ? even : odd).push_back(curve[i]);
  const CalibrationResult train = fit_points(even, gb_of_v, options);
  r.holdout_rmse = rmse_of(odd, gb_of_v, train.m, train.c);
  return r;
}

double fit_k_const(std::span<const CurvePoint> curve, int n_places, double denominator) {
  if (curve.empty()) throw std::invalid_argument("fit_k_const: empty curve");
  if (!(denominator > 0.0)) throw std::domain_error("fit_k_const: denominator must be positive");
  const double n = n_places;
  Eigen::VectorXd x(static_cast<Eigen::Index>(curve.size()));
  Eigen::VectorXd y(x.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    x[static_cast<Eigen::Index>(i)] = n * n * curve[i].p * (n - 1.0) / denominator;
    y[static_cast<Eigen::Index>(i)] = n - curve[i].coverage;
  }
  const double xx = x.squaredNorm();
  if (!(xx > 0.0)) throw std::invalid_argument("fit_k_const: all p are zero");
  return x.dot(y) / xx;
}

Prediction predict_coverage(double p, const CalibrationResult& result, const FormulaParams<double>& params) {
  Prediction out;
  out.v = std::max(0.0, result.m * p + result.c);
  out.extrapolated = p < result.p_lo - 1e-12 || p > result.p_hi + 1e-12;
  FormulaParams<double> fp = params;
  fp.threshold = out.v;
  out.coverage = gb_analytic(fp);
  return out;
}

AnalyticCurve analytic_gb_curve(int n_places, double denominator) {
  return [n_places, denominator](double v) { return gb_analytic(FormulaParams<double>{n_places, denominator, v}); };
}

std::string to_json(const CalibrationResult& r) {
  nlohmann::ordered_json j;
  j["m"] = r.m;
  j["c"] = r.c;
  j["rmse"] = r.rmse;
  j["holdout_rmse"] = r.holdout_rmse;
  j["p_window"] = {r.p_lo, r.p_hi};
  j["v_window"] = {r.v_lo, r.v_hi};
  j["k_const"] = r.k_const;
  j["iterations"] = r.iterations;
  return j.dump(2);
}

}  // namespace throwbox
