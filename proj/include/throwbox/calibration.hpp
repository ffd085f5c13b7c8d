#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "throwbox/analytics.hpp"

namespace throwbox {

/// One point of a simulated coverage curve: stabilized G_d at refresh prob p.
struct CurvePoint {
  double p = 0.0;
  double coverage = 0.0;
  double sem = 0.0;
};

/// v -> G_b. Must be non-increasing in v.
using AnalyticCurve = std::function<double(double)>;

struct CalibrationResult {
  double m = 0.0;
  double c = 0.0;
  double rmse = 0.0;          // over every curve point, in places
  double holdout_rmse = 0.0;  // fit on even-index points, scored on odd-index points
  double v_lo = 0.0;          // matched window, v at p_lo
  double v_hi = 0.0;          // v at p_hi
  double p_lo = 0.0;
  double p_hi = 0.0;
  double k_const = 0.0;       // simplified-formula constant, 0 when not fitted
  int iterations = 0;
};

struct CalibrationOptions {
  /// Relative tolerance of the endpoint bisection in v.
  double v_tolerance = 1e-12;
  /// A curve whose end-to-end drop is below this many places is rejected.
  double min_drop = 1e-6;
  bool refine = true;
};

/// Endpoint matching followed by least-squares refinement of v = m p + c.
/// Throws std::runtime_error when the curve carries no information (flat) or
/// when no v reproduces an endpoint coverage.
CalibrationResult fit(std::span<const CurvePoint> curve, const AnalyticCurve& gb_of_v,
                      const CalibrationOptions& options = {});

/// Least-squares k in G_d = N - k N^2 p (N-1) / D over the curve.
double fit_k_const(std::span<const CurvePoint> curve, int n_places, double denominator);

/// Smallest v with gb_of_v(v) <= target (bisection on the monotone curve).
double solve_threshold(const AnalyticCurve& gb_of_v, double target, double tolerance = 1e-12);

struct Prediction {
  double coverage = 0.0;
  double v = 0.0;
  bool extrapolated = false;  // p outside the calibrated range
};

Prediction predict_coverage(double p, const CalibrationResult& result, const FormulaParams<double>& params);

/// Curve v -> gb_analytic for fixed N and D.
AnalyticCurve analytic_gb_curve(int n_places, double denominator);

std::string to_json(const CalibrationResult& result);

}  // namespace throwbox
