#include <doctest.h>

#include <cmath>
#include <vector>

#include "throwbox/calibration.hpp"

using namespace throwbox;

namespace {

std::vector<CurvePoint> synthetic(const AnalyticCurve& gb, double m, double c) {
  std::vector<CurvePoint> out;
  for (int i = 1; i <= 20; ++i) {
    const double p = 0.01 * i;
    out.push_back({p, gb(m * p + c), 0.0});
  }
  return out;
}

}  // namespace

TEST_CASE("self-consistent curve recovers the map") {
  const auto gb = analytic_gb_curve(100, 380.0);
  const auto curve = synthetic(gb, 2.0, 0.01);
  const auto r = fit(curve, gb);
  CHECK(r.m == doctest::Approx(2.0).epsilon(0.01));
  CHECK(r.c == doctest::Approx(0.01).epsilon(0.01));
  CHECK(r.rmse < 1e-6);
  CHECK(r.holdout_rmse < 1e-6);
  CHECK(r.p_lo == 0.01);
  CHECK(r.p_hi == doctest::Approx(0.2));
  CHECK(r.v_lo == doctest::Approx(0.03).epsilon(1e-6));
  CHECK(r.v_hi == doctest::Approx(0.41).epsilon(1e-6));
}

TEST_CASE("endpoints are reproduced without refinement") {
  const auto gb = analytic_gb_curve(100, 380.0);
  auto curve = synthetic(gb, 1.5, 0.02);
  curve[5].coverage += 3.0;  // perturb an interior point
  CalibrationOptions opt;
  opt.refine = false;
  const auto r = fit(curve, gb, opt);
  const FormulaParams<double> fp{100, 380.0, 0.0};
  CHECK(predict_coverage(curve.front().p, r, fp).coverage == doctest::Approx(curve.front().coverage).epsilon(1e-9));
  CHECK(predict_coverage(curve.back().p, r, fp).coverage == doctest::Approx(curve.back().coverage).epsilon(1e-9));
}

TEST_CASE("refinement does not increase the error") {
  const auto gb = analytic_gb_curve(100, 380.0);
  auto curve = synthetic(gb, 1.5, 0.02);
  for (std::size_t i = 0; i < curve.size(); ++i) curve[i].coverage += (i % 2 ? 2.0 : -2.0);
  CalibrationOptions raw;
  raw.refine = false;
  CHECK(fit(curve, gb).rmse <= fit(curve, gb, raw).rmse + 1e-12);
}

TEST_CASE("flat curve is rejected") {
  const auto gb = analytic_gb_curve(100, 380.0);
  std::vector<CurvePoint> flat;
  for (int i = 1; i <= 20; ++i) flat.push_back({0.01 * i, 100.0, 0.0});
  CHECK_THROWS_AS(fit(flat, gb), std::runtime_error);
}

TEST_CASE("input checks") {
  const auto gb = analytic_gb_curve(100, 380.0);
  const auto curve = synthetic(gb, 2.0, 0.01);
  CHECK_THROWS(fit(std::vector<CurvePoint>(curve.begin(), curve.begin() + 4), gb));
  auto shuffled = curve;
  std::swap(shuffled[0], shuffled[3]);
  CHECK_THROWS(fit(shuffled, gb));
}

TEST_CASE("prediction") {
  const auto gb = analytic_gb_curve(100, 380.0);
  const auto r = fit(synthetic(gb, 2.0, 0.01), gb);
  const FormulaParams<double> fp{100, 380.0, 0.0};
  double prev = 101;
  for (double p = 0.01; p <= 0.2; p += 0.005) {
    const auto pr = predict_coverage(p, r, fp);
    CHECK(pr.coverage < prev);
    CHECK_FALSE(pr.extrapolated);
    prev = pr.coverage;
  }
  CHECK(predict_coverage(0.3, r, fp).extrapolated);
  CHECK(predict_coverage(0.001, r, fp).extrapolated);
}

TEST_CASE("threshold solver") {
  const auto gb = analytic_gb_curve(100, 380.0);
  for (double target : {99.0, 75.0, 20.0, 1.0}) CHECK(gb(solve_threshold(gb, target)) == doctest::Approx(target));
  CHECK(solve_threshold(gb, 100.0) == 0.0);
}

TEST_CASE("simplified-formula constant") {
  std::vector<CurvePoint> curve;
  const double k = 0.0123;
  for (int i = 1; i <= 10; ++i) {
    const double p = 0.001 * i;
    curve.push_back({p, gd_simplified(p, 100, 20.0, k), 0.0});
  }
  CHECK(fit_k_const(curve, 100, 380.0) == doctest::Approx(k));
}

TEST_CASE("result serializes to JSON") {
  CalibrationResult r;
  r.m = 2;
  r.c = 0.5;
  const auto s = to_json(r);
  CHECK(s.find("\"m\": 2") != std::string::npos);
  CHECK(s.find("v_window") != std::string::npos);
}
