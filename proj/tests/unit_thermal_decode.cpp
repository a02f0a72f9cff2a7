#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "satac/error.hpp"
#include "satac/eval_harness.hpp"
#include "satac/marker_detect.hpp"
#include "satac/simulator.hpp"
#include "satac/thermal_decode.hpp"
#include "test_util.hpp"

using namespace satac;

namespace {

SensorConfig small_config() {
  SensorConfig c;
  c.frame_width_px = 200;
  c.frame_height_px = 160;
  c.sensing_field_mm = {16.0, 12.0};
  c.marker_cols = 12;
  c.marker_rows = 8;
  return c;
}

// decoded brightness field for a frame, markers removed by the standard chain
ScalarField decode_brightness(const GrayFrame& f, const SensorConfig& c) {
  BinaryMask mask = adaptive_threshold(f, default_threshold_window(c));
  BinaryMask markers = filter_marker_mask(mask, c);
  return remove_markers(f, markers, thermal_params_for(c));
}

}  // namespace

TEST_CASE("thermal_params_for scales the radius with marker size") {
  SensorConfig c;
  ThermalDecodeParams p = thermal_params_for(c);
  CHECK(p.guided_radius_px == 4);  // 3 x 1.25 px rounded
  CHECK(p.guided_eps == doctest::Approx(1e-3));
  CHECK(p.mask_dilation_px == 2);
  SensorConfig fine = c;
  fine.px_per_mm = 5.0;
  CHECK(thermal_params_for(fine).guided_radius_px == 2);
}

TEST_CASE("decode_temperature: 120 C footprint reads within 2 C, in range") {
  SensorConfig c = small_config();
  TruthCurve curve;
  CalibrationModel calib = truth_calibration(curve);
  ContactPrimitive contact;
  contact.shape = FootprintShape::square;
  contact.size_mm = 8.0;
  contact.temperature_C = 120.0;
  ContactScenario sc;
  sc.contacts = {contact};
  GrayFrame f = render_frame(sc, c);
  BinaryMask mask =
      filter_marker_mask(adaptive_threshold(f, default_threshold_window(c)), c);
  TemperatureField temp = decode_temperature(f, mask, calib, thermal_params_for(c));
  // mean over the footprint core, clear of the blur band and filter halo
  Vec2 center = c.field_mm_to_px({0.0, 0.0});
  double sum = 0.0;
  int n = 0;
  for (int dy = -14; dy <= 14; ++dy) {
    for (int dx = -14; dx <= 14; ++dx) {
      int x = static_cast<int>(center.x) + dx;
      int y = static_cast<int>(center.y) + dy;
      sum += temp.values.at(x, y);
      CHECK(temp.flags[static_cast<size_t>(y) * c.frame_width_px + x] ==
            TempFlag::in_range);
      ++n;
    }
  }
  CHECK(sum / n == doctest::Approx(120.0).epsilon(0.02));
  CHECK(sum / n > 118.0);
  CHECK(sum / n < 122.0);
}

TEST_CASE("decode_temperature: empty render is below range everywhere") {
  SensorConfig c = small_config();
  TruthCurve curve;
  CalibrationModel calib = truth_calibration(curve);
  GrayFrame f = render_frame(ContactScenario{}, c);
  BinaryMask mask =
      filter_marker_mask(adaptive_threshold(f, default_threshold_window(c)), c);
  TemperatureField temp = decode_temperature(f, mask, calib, thermal_params_for(c));
  for (TempFlag flag : temp.flags) CHECK(flag == TempFlag::below_range);
}

TEST_CASE("decode_temperature: 200 C footprint flags ambiguous") {
  SensorConfig c = small_config();
  TruthCurve curve;
  CalibrationModel calib = truth_calibration(curve);
  ContactPrimitive contact;
  contact.shape = FootprintShape::square;
  contact.size_mm = 8.0;
  contact.temperature_C = 200.0;
  ContactScenario sc;
  sc.contacts = {contact};
  GrayFrame f = render_frame(sc, c);
  BinaryMask mask =
      filter_marker_mask(adaptive_threshold(f, default_threshold_window(c)), c);
  TemperatureField temp = decode_temperature(f, mask, calib, thermal_params_for(c));
  Vec2 center = c.field_mm_to_px({0.0, 0.0});
  for (int dy = -14; dy <= 14; ++dy) {
    for (int dx = -14; dx <= 14; ++dx) {
      int x = static_cast<int>(center.x) + dx;
      int y = static_cast<int>(center.y) + dy;
      CHECK(temp.flags[static_cast<size_t>(y) * c.frame_width_px + x] ==
            TempFlag::ambiguous_above_peak);
    }
  }
}

TEST_CASE("remove_markers: residual at former marker sites stays under 0.02") {
  SensorConfig c = small_config();
  ContactPrimitive contact;
  contact.size_mm = 4.0;
  contact.temperature_C = 150.0;
  contact.center_mm = {1.0, -1.0};
  ContactScenario sc;
  sc.contacts = {contact};
  GrayFrame with = render_frame(sc, c);
  RenderOptions bare;
  bare.draw_markers = false;
  GrayFrame without = render_frame(sc, c, {}, bare);

  BinaryMask mask = filter_marker_mask(
      adaptive_threshold(with, default_threshold_window(c)), c);
  ScalarField decoded = decode_brightness(with, c);
  double worst = 0.0;
  for (int y = 0; y < c.frame_height_px; ++y) {
    for (int x = 0; x < c.frame_width_px; ++x) {
      if (!mask.test(x, y)) continue;
      worst = std::max(worst, std::abs(decoded.at(x, y) - without.at(x, y)));
    }
  }
  CHECK(worst <= 0.02);
}

TEST_CASE("remove_markers rejects mismatched mask dimensions") {
  GrayFrame f = GrayFrame::filled(32, 32, 0.5);
  BinaryMask m = BinaryMask::empty(16, 16);
  CHECK_THROWS_AS(remove_markers(f, m, {}), Error);
}

TEST_CASE("invert_brightness_field agrees with the scalar inverter") {
  TruthCurve curve;
  CalibrationModel calib = truth_calibration(curve);
  auto rng = testutil::make_rng(301);
  ScalarField field = testutil::random_field(40, 30, rng, 0.0, 1.0);
  TemperatureField out = invert_brightness_field(field, calib);
  for (size_t i = 0; i < field.values.size(); ++i) {
    TempReading r = invert_temperature(field.values[i], calib.temp_curve);
    CHECK(out.values.values[i] == doctest::Approx(r.temp_C).epsilon(1e-12));
    CHECK(out.flags[i] == r.flag);
  }
}

TEST_CASE("decode then render round trip holds within 1 C on [50, 180]") {
  TruthCurve curve;
  CalibrationModel calib = truth_calibration(curve);
  for (double t = 50.0; t <= 180.0; t += 0.5) {
    TempReading r = invert_temperature(brightness_of(t, curve), calib.temp_curve);
    CHECK(std::abs(r.temp_C - t) <= 1.0);
  }
}

TEST_CASE("temperature csv lists every pixel with its flag") {
  TruthCurve curve;
  CalibrationModel calib = truth_calibration(curve);
  ScalarField b = ScalarField::filled(4, 3, 0.0);
  b.at(1, 1) = brightness_of(120.0, curve);
  b.at(2, 1) = 0.79;
  TemperatureField temp = invert_brightness_field(b, calib);
  const char* path = "temp_test_out.csv";
  write_temperature_csv(temp, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "x_px,y_px,temp_C,flag");
  int rows = 0;
  std::string line;
  bool saw_in_range = false, saw_below = false, saw_ambiguous = false;
  while (std::getline(in, line)) {
    ++rows;
    saw_in_range = saw_in_range || line.find("in-range") != std::string::npos;
    saw_below = saw_below || line.find("below-range") != std::string::npos;
    saw_ambiguous =
        saw_ambiguous || line.find("ambiguous-above-peak") != std::string::npos;
  }
  CHECK(rows == 12);
  CHECK(saw_in_range);
  CHECK(saw_below);
  CHECK(saw_ambiguous);
  std::remove(path);
}
