#include "satac/truth_curve.hpp"

#include "satac/error.hpp"

namespace satac {

void TruthCurve::validate() const {
  auto fail = [](const char* msg) {
    throw Error(ErrorKind::invalid_argument, msg);
  };
  if (!(rise_start_C < peak_C && peak_C < fall_end_C)) {
    fail("truth curve: knots must be ordered rise_start < peak < fall_end");
  }
  if (!(peak_brightness > base)) {
    fail("truth curve: peak brightness must exceed the base level");
  }
  if (!(fall_slope > 0.0)) {
    fail("truth curve: fall slope must be positive");
  }
  double floor = peak_brightness - fall_slope * (fall_end_C - peak_C);
  if (base < 0.0 || peak_brightness > 1.0 || floor < 0.0) {
    fail("truth curve: brightness range leaves [0,1]");
  }
}

double brightness_of(double temperature_C, const TruthCurve& curve) {
  if (temperature_C < curve.rise_start_C) return curve.base;
  if (temperature_C <= curve.peak_C) {
    double t = (temperature_C - curve.rise_start_C) /
               (curve.peak_C - curve.rise_start_C);
    return curve.base + t * (curve.peak_brightness - curve.base);
  }
  double t = temperature_C < curve.fall_end_C ? temperature_C : curve.fall_end_C;
  return curve.peak_brightness - curve.fall_slope * (t - curve.peak_C);
}

}  // namespace satac
