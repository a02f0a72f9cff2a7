#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "doctest.h"
#include "satac/calibration.hpp"
#include "satac/error.hpp"
#include "test_util.hpp"

using namespace satac;

namespace {

CalibrationSample temp_sample(double t, double b, int repeat = 0) {
  return {SampleKind::temperature, t, b, repeat};
}

std::vector<TempKnot> reference_curve() {
  return {{50.0, 0.2}, {180.0, 0.8}, {200.0, 0.6}};
}

}  // namespace

TEST_CASE("fit_temperature_curve keeps clean monotone samples as knots") {
  std::vector<CalibrationSample> samples = {
      temp_sample(50.0, 0.2), temp_sample(100.0, 0.43),
      temp_sample(180.0, 0.8), temp_sample(200.0, 0.6)};
  std::vector<TempKnot> knots = fit_temperature_curve(samples);
  REQUIRE(knots.size() == 4);
  CHECK(knots[0].temp_C == doctest::Approx(50.0));
  CHECK(knots[0].brightness == doctest::Approx(0.2));
  CHECK(knots[2].brightness == doctest::Approx(0.8));
  // descending tail survives untouched
  CHECK(knots[3].temp_C == doctest::Approx(200.0));
  CHECK(knots[3].brightness == doctest::Approx(0.6));
}

TEST_CASE("fit_temperature_curve averages repeats per temperature") {
  std::vector<CalibrationSample> samples = {
      temp_sample(50.0, 0.2), temp_sample(100.0, 0.4, 0),
      temp_sample(100.0, 0.5, 1)};
  std::vector<TempKnot> knots = fit_temperature_curve(samples);
  REQUIRE(knots.size() == 2);
  CHECK(knots[1].brightness == doctest::Approx(0.45));
}

TEST_CASE("fit_temperature_curve projects the rising branch isotonically") {
  // noisy, non-monotone means with the max at the last knot: the projection
  // must match an independent minimax-form isotonic regression
  std::vector<double> y = {0.20, 0.35, 0.30, 0.32, 0.50,
                           0.45, 0.55, 0.60, 0.58, 0.70};
  std::vector<CalibrationSample> samples;
  for (size_t i = 0; i < y.size(); ++i)
    samples.push_back(temp_sample(50.0 + 10.0 * i, y[i]));
  std::vector<TempKnot> knots = fit_temperature_curve(samples);
  std::vector<double> expect = testutil::isotonic_minimax(y);
  REQUIRE(knots.size() == y.size());
  for (size_t i = 0; i < y.size(); ++i)
    CHECK(knots[i].brightness == doctest::Approx(expect[i]).epsilon(1e-12));
  for (size_t i = 1; i < knots.size(); ++i)
    CHECK(knots[i].brightness >= knots[i - 1].brightness);
}

TEST_CASE("fit_temperature_curve leaves the post-peak tail as plain means") {
  std::vector<CalibrationSample> samples = {
      temp_sample(50.0, 0.2), temp_sample(120.0, 0.5),
      temp_sample(180.0, 0.8), temp_sample(190.0, 0.7),
      temp_sample(200.0, 0.72), temp_sample(210.0, 0.6)};
  std::vector<TempKnot> knots = fit_temperature_curve(samples);
  REQUIRE(knots.size() == 6);
  // the dip at 190 followed by 0.72 stays exactly as measured
  CHECK(knots[3].brightness == doctest::Approx(0.7));
  CHECK(knots[4].brightness == doctest::Approx(0.72));
  CHECK(knots[5].brightness == doctest::Approx(0.6));
}

TEST_CASE("fit_temperature_curve ignores mechanics samples") {
  std::vector<CalibrationSample> samples = {
      temp_sample(50.0, 0.2), temp_sample(100.0, 0.5),
      {SampleKind::pressure, 3.0, 0.9, 0}, {SampleKind::shear, 1.0, 4.0, 0}};
  std::vector<TempKnot> knots = fit_temperature_curve(samples);
  CHECK(knots.size() == 2);
}

TEST_CASE("fit_temperature_curve rejects unusable sample sets") {
  CHECK_THROWS_AS(fit_temperature_curve({temp_sample(50.0, 0.2)}), Error);
  CHECK_THROWS_AS(fit_temperature_curve(
                      {temp_sample(50.0, 0.2), temp_sample(60.0, 0.3)}),
                  Error);  // span under 20 C
  CHECK_THROWS_AS(fit_temperature_curve(
                      {temp_sample(50.0, 0.4), temp_sample(100.0, 0.4)}),
                  Error);  // flat response
}

TEST_CASE("fit_linear_gain recovers an exact line") {
  std::vector<CalibrationSample> samples;
  for (int i = 1; i <= 6; ++i)
    samples.push_back({SampleKind::pressure, 1.0 * i, 2.0 * i + 0.5, 0});
  LinearGain g = fit_linear_gain(samples);
  CHECK(g.fitted);
  CHECK(g.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(g.intercept == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(g.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit_linear_gain matches a normal-equations oracle on noisy data") {
  auto rng = testutil::make_rng(611);
  std::vector<double> xs, ys;
  std::vector<CalibrationSample> samples;
  std::normal_distribution<double> noise(0.0, 0.3);
  for (int i = 0; i < 40; ++i) {
    double x = 0.25 * i;
    double y = 1.7 * x - 0.9 + noise(rng);
    xs.push_back(x);
    ys.push_back(y);
    samples.push_back({SampleKind::shear, x, y, 0});
  }
  LinearGain g = fit_linear_gain(samples);
  testutil::OlsLine oracle = testutil::ols_line(xs, ys);
  CHECK(g.slope == doctest::Approx(oracle.slope).epsilon(1e-9));
  CHECK(g.intercept == doctest::Approx(oracle.intercept).epsilon(1e-9));
  CHECK(g.r2 == doctest::Approx(oracle.r2).epsilon(1e-9));
  CHECK(g.r2 > 0.9);
  CHECK(g.r2 < 1.0);

  // OLS residuals are orthogonal to the design: zero sum, zero x-moment
  double sum_res = 0.0, x_moment = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double res = ys[i] - (g.slope * xs[i] + g.intercept);
    sum_res += res;
    x_moment += xs[i] * res;
  }
  CHECK(sum_res == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(x_moment == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("fit_linear_gain rejects degenerate inputs") {
  CHECK_THROWS_AS(fit_linear_gain({{SampleKind::pressure, 1.0, 2.0, 0}}), Error);
  CHECK_THROWS_AS(fit_linear_gain({{SampleKind::pressure, 1.0, 2.0, 0},
                                   {SampleKind::pressure, 1.0, 3.0, 0}}),
                  Error);  // no stimulus variance
}

TEST_CASE("invert_temperature: nominal mid-range reading") {
  TempReading r = invert_temperature(0.523076923, reference_curve());
  CHECK(r.temp_C == doctest::Approx(120.0).epsilon(1e-6));
  CHECK(r.flag == TempFlag::in_range);
}

TEST_CASE("invert_temperature: background and the below-range boundary") {
  std::vector<TempKnot> curve = reference_curve();
  TempReading at = invert_temperature(0.2, curve);
  CHECK(at.flag == TempFlag::below_range);
  CHECK(at.temp_C == doctest::Approx(50.0));
  CHECK(invert_temperature(0.15, curve).flag == TempFlag::below_range);
  // a few ulp of slop still counts as background
  CHECK(invert_temperature(0.2 + 1e-12, curve).flag == TempFlag::below_range);
  CHECK(invert_temperature(0.2 + kBelowRangeEps, curve).flag ==
        TempFlag::below_range);
  // past the tolerance the reading is in range, barely above T_min
  TempReading just = invert_temperature(0.2 + 1e-6, curve);
  CHECK(just.flag == TempFlag::in_range);
  CHECK(just.temp_C > 50.0);
  CHECK(just.temp_C < 50.01);
}

TEST_CASE("invert_temperature: peak and beyond flag ambiguous") {
  std::vector<TempKnot> curve = reference_curve();
  TempReading above = invert_temperature(0.81, curve);
  CHECK(above.flag == TempFlag::ambiguous_above_peak);
  CHECK(above.temp_C == doctest::Approx(180.0));
  TempReading at_peak = invert_temperature(0.8, curve);
  CHECK(at_peak.flag == TempFlag::ambiguous_above_peak);
  CHECK(at_peak.temp_C == doctest::Approx(180.0));
}

TEST_CASE("invert_temperature: two-valued band flags ambiguous, keeps value") {
  std::vector<TempKnot> curve = reference_curve();
  // brightness 0.7 is hit at ~158 C rising and again at 190 C falling
  TempReading mid = invert_temperature(0.7, curve);
  CHECK(mid.flag == TempFlag::ambiguous_above_peak);
  CHECK(mid.temp_C == doctest::Approx(50.0 + 130.0 * 0.5 / 0.6).epsilon(1e-9));

  // the band extends kAmbiguityMargin below the post-peak minimum of 0.6
  TempReading near = invert_temperature(0.6 - kAmbiguityMargin + 1e-6, curve);
  CHECK(near.flag == TempFlag::ambiguous_above_peak);
  TempReading clear = invert_temperature(0.6 - kAmbiguityMargin - 1e-6, curve);
  CHECK(clear.flag == TempFlag::in_range);
  CHECK(clear.temp_C == doctest::Approx(135.583).epsilon(1e-3));
}

TEST_CASE("invert_temperature needs a fitted curve") {
  CHECK_THROWS_AS(invert_temperature(0.5, {}), Error);
  CHECK_THROWS_AS(invert_temperature(0.5, {{50.0, 0.2}}), Error);
}

TEST_CASE("interpolate_brightness clamps outside the knot range") {
  std::vector<TempKnot> curve = reference_curve();
  CHECK(interpolate_brightness(20.0, curve) == doctest::Approx(0.2));
  CHECK(interpolate_brightness(250.0, curve) == doctest::Approx(0.6));
  CHECK(interpolate_brightness(115.0, curve) ==
        doctest::Approx(0.2 + 0.6 * 65.0 / 130.0));
  CHECK(interpolate_brightness(190.0, curve) == doctest::Approx(0.7));
  CHECK_THROWS_AS(interpolate_brightness(100.0, {}), Error);
}

TEST_CASE("invert and interpolate agree along the rising branch") {
  std::vector<TempKnot> curve = reference_curve();
  for (double t = 51.0; t <= 179.0; t += 4.0) {
    TempReading r = invert_temperature(interpolate_brightness(t, curve), curve);
    CHECK(r.temp_C == doctest::Approx(t).epsilon(1e-9));
  }
}

TEST_CASE("fit_calibration fits every kind present") {
  std::vector<CalibrationSample> samples = {
      temp_sample(50.0, 0.2), temp_sample(120.0, 0.52), temp_sample(180.0, 0.8)};
  for (int i = 1; i <= 5; ++i) {
    samples.push_back({SampleKind::pressure, 1.0 * i, 0.07 * i, 0});
    samples.push_back({SampleKind::shear, 0.2 * i, 0.8 * i, 0});
  }
  CalibrationModel model = fit_calibration(samples, "bench");
  CHECK(model.source == "bench");
  CHECK(model.has_temp_curve());
  CHECK(model.temp_curve.size() == 3);
  CHECK(model.pressure_gain.fitted);
  CHECK(model.pressure_gain.slope == doctest::Approx(0.07));
  CHECK(model.shear_gain.fitted);
  CHECK(model.shear_gain.slope == doctest::Approx(4.0));
  CHECK(model.sample_counts.at("temperature") == 3);
  CHECK(model.sample_counts.at("pressure") == 5);
  CHECK(model.sample_counts.at("shear") == 5);
}

TEST_CASE("fit_calibration with mechanics samples only leaves no curve") {
  std::vector<CalibrationSample> samples;
  for (int i = 1; i <= 4; ++i)
    samples.push_back({SampleKind::pressure, 1.0 * i, 0.1 * i, 0});
  CalibrationModel model = fit_calibration(samples);
  CHECK_FALSE(model.has_temp_curve());
  CHECK(model.pressure_gain.fitted);
  CHECK_FALSE(model.shear_gain.fitted);
}

TEST_CASE("CalibrationModel::validate rejects malformed curves") {
  CalibrationModel m;
  m.temp_curve = {{50.0, 0.2}};
  CHECK_THROWS_AS(m.validate(), Error);
  m.temp_curve = {{50.0, 0.2}, {50.0, 0.3}, {80.0, 0.4}};
  CHECK_THROWS_AS(m.validate(), Error);  // temps not strictly increasing
  m.temp_curve = {{50.0, 0.2}, {60.0, 0.4}};
  CHECK_THROWS_AS(m.validate(), Error);  // span under 20 C
  m.temp_curve = {{50.0, 0.2}, {100.0, 0.1}, {180.0, 0.8}};
  CHECK_THROWS_AS(m.validate(), Error);  // dips before the peak
  m.temp_curve = reference_curve();
  CHECK_NOTHROW(m.validate());
  m.pressure_gain = {std::nan(""), 0.0, 0.0, true};
  CHECK_THROWS_AS(m.validate(), Error);
  m.pressure_gain = {std::nan(""), 0.0, 0.0, false};  // unfitted: ignored
  CHECK_NOTHROW(m.validate());
}

TEST_CASE("peak_index picks the first brightest knot") {
  CalibrationModel m;
  m.temp_curve = {{50.0, 0.2}, {120.0, 0.8}, {180.0, 0.8}, {200.0, 0.6}};
  CHECK(m.peak_index() == 1);
}

TEST_CASE("samples csv round trips exactly") {
  std::vector<CalibrationSample> samples = {
      {SampleKind::temperature, 57.5, 0.234375, 0},
      {SampleKind::pressure, 3.0, 0.21875, 2},
      {SampleKind::shear, 0.6, 2.4, 1}};
  const char* path = "calib_samples_test.csv";
  write_samples_csv(samples, path);
  std::vector<CalibrationSample> back = read_samples_csv(path);
  REQUIRE(back.size() == samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    CHECK(back[i].kind == samples[i].kind);
    CHECK(back[i].stimulus == doctest::Approx(samples[i].stimulus).epsilon(1e-12));
    CHECK(back[i].response == doctest::Approx(samples[i].response).epsilon(1e-12));
    CHECK(back[i].repeat_index == samples[i].repeat_index);
  }
  std::remove(path);
}

TEST_CASE("read_samples_csv accepts headerless files, rejects junk") {
  const char* path = "calib_samples_raw.csv";
  {
    std::ofstream out(path);
    out << "temperature,50,0.2,0\n";
    out << "temperature,100,0.5,0\n";
  }
  std::vector<CalibrationSample> samples = read_samples_csv(path);
  CHECK(samples.size() == 2);
  CHECK(samples[1].stimulus == doctest::Approx(100.0));
  {
    std::ofstream out(path);
    out << "kind,stimulus,response,repeat_index\n";
    out << "banana,1,2,0\n";
  }
  CHECK_THROWS_AS(read_samples_csv(path), Error);
  std::remove(path);
  CHECK_THROWS_AS(read_samples_csv("no_such_file.csv"), Error);
}
