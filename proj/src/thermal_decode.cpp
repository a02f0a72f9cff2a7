#include "satac/thermal_decode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "satac/error.hpp"
#include "satac/guided_filter.hpp"
#include "satac/inpaint.hpp"

namespace satac {

namespace {

// Precomputed inverse of the rising branch. Mirrors invert_temperature
// exactly; binary search instead of a per-pixel linear scan.
struct CurveInverter {
  std::vector<double> rise_b;
  std::vector<double> rise_t;
  double first_b = 0.0;
  double first_t = 0.0;
  double peak_b = 0.0;
  double peak_t = 0.0;
  double ambiguity_threshold = 0.0;

  explicit CurveInverter(const std::vector<TempKnot>& curve) {
    size_t peak = 0;
    for (size_t i = 1; i < curve.size(); ++i) {
      if (curve[i].brightness > curve[peak].brightness) peak = i;
    }
    rise_b.reserve(peak + 1);
    rise_t.reserve(peak + 1);
    for (size_t i = 0; i <= peak; ++i) {
      rise_b.push_back(curve[i].brightness);
      rise_t.push_back(curve[i].temp_C);
    }
    first_b = curve.front().brightness;
    first_t = curve.front().temp_C;
    peak_b = curve[peak].brightness;
    peak_t = curve[peak].temp_C;
    ambiguity_threshold = peak_b;
    for (size_t i = peak; i < curve.size(); ++i) {
      ambiguity_threshold = std::min(ambiguity_threshold, curve[i].brightness);
    }
  }

  TempReading operator()(double b) const {
    if (b <= first_b + kBelowRangeEps) return {first_t, TempFlag::below_range};
    if (b >= peak_b) return {peak_t, TempFlag::ambiguous_above_peak};
    auto it = std::lower_bound(rise_b.begin(), rise_b.end(), b);
    size_t m = static_cast<size_t>(it - rise_b.begin());
    double temp = rise_t[m - 1] + (b - rise_b[m - 1]) *
                                      (rise_t[m] - rise_t[m - 1]) /
                                      (rise_b[m] - rise_b[m - 1]);
    TempFlag flag = b >= ambiguity_threshold - kAmbiguityMargin
                        ? TempFlag::ambiguous_above_peak
                        : TempFlag::in_range;
    return {temp, flag};
  }
};

}  // namespace

ThermalDecodeParams thermal_params_for(const SensorConfig& config) {
  ThermalDecodeParams params;
  params.guided_radius_px =
      std::max(1, static_cast<int>(std::lround(3.0 * config.marker_radius_px())));
  return params;
}

ScalarField remove_markers(const GrayFrame& frame, const BinaryMask& markers,
                           const ThermalDecodeParams& params) {
  frame.validate();
  if (markers.width != frame.width || markers.height != frame.height) {
    throw Error(ErrorKind::invalid_argument,
                "remove_markers: mask dims do not match frame");
  }
  ScalarField field = to_field(frame);
  ScalarField smoothed = guided_filter(field, field, params.guided_radius_px,
                                       params.guided_eps);
  BinaryMask grown = params.mask_dilation_px > 0
                         ? dilate(markers, params.mask_dilation_px)
                         : markers;
  return inpaint_mask(smoothed, grown, params.inpaint_tol);
}

TemperatureField invert_brightness_field(const ScalarField& brightness,
                                         const CalibrationModel& calib) {
  if (!calib.has_temp_curve()) {
    throw Error(ErrorKind::bad_state,
                "invert_brightness_field: calibration has no temperature curve");
  }
  calib.validate();
  TemperatureField out;
  out.values = ScalarField::filled(brightness.width, brightness.height, 0.0,
                                   FieldUnit::celsius);
  out.flags.assign(out.values.values.size(), TempFlag::in_range);
  CurveInverter invert(calib.temp_curve);
  for (size_t i = 0; i < brightness.values.size(); ++i) {
    TempReading r = invert(brightness.values[i]);
    out.values.values[i] = r.temp_C;
    out.flags[i] = r.flag;
  }
  return out;
}

TemperatureField decode_temperature(const GrayFrame& frame,
                                    const BinaryMask& markers,
                                    const CalibrationModel& calib,
                                    const ThermalDecodeParams& params) {
  if (!calib.has_temp_curve()) {
    throw Error(ErrorKind::bad_state,
                "decode_temperature: calibration has no temperature curve");
  }
  return invert_brightness_field(remove_markers(frame, markers, params), calib);
}

const char* temp_flag_name(TempFlag flag) {
  switch (flag) {
    case TempFlag::in_range: return "in-range";
    case TempFlag::below_range: return "below-range";
    case TempFlag::ambiguous_above_peak: return "ambiguous-above-peak";
  }
  return "unknown";
}

void write_temperature_csv(const TemperatureField& field,
                           const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
  out << "x_px,y_px,temp_C,flag\n";
  char buf[96];
  for (int y = 0; y < field.height(); ++y) {
    for (int x = 0; x < field.width(); ++x) {
      size_t i = static_cast<size_t>(y) * field.width() + x;
      std::snprintf(buf, sizeof(buf), "%d,%d,%.4f,%s\n", x, y,
                    field.values.values[i], temp_flag_name(field.flags[i]));
      out << buf;
    }
  }
}

RgbImage temperature_heatmap(const TemperatureField& field, double t_min,
                             double t_max) {
  if (!(t_max > t_min)) {
    throw Error(ErrorKind::invalid_argument,
                "temperature_heatmap: t_max must exceed t_min");
  }
  // Five-stop blue-to-red gradient.
  static const uint8_t stops[5][3] = {
      {0, 0, 255}, {0, 255, 255}, {0, 255, 0}, {255, 255, 0}, {255, 0, 0}};
  RgbImage img = RgbImage::filled(field.width(), field.height(), 0, 0, 0);
  for (int y = 0; y < field.height(); ++y) {
    for (int x = 0; x < field.width(); ++x) {
      size_t i = static_cast<size_t>(y) * field.width() + x;
      uint8_t r, g, b;
      switch (field.flags[i]) {
        case TempFlag::below_range:
          r = g = b = 40;
          break;
        case TempFlag::ambiguous_above_peak:
          r = 255, g = 0, b = 255;
          break;
        default: {
          double t = (field.values.values[i] - t_min) / (t_max - t_min);
          t = std::clamp(t, 0.0, 1.0) * 4.0;
          int s = std::min(3, static_cast<int>(t));
          double f = t - s;
          r = static_cast<uint8_t>(
              std::lround(stops[s][0] + f * (stops[s + 1][0] - stops[s][0])));
          g = static_cast<uint8_t>(
              std::lround(stops[s][1] + f * (stops[s + 1][1] - stops[s][1])));
          b = static_cast<uint8_t>(
              std::lround(stops[s][2] + f * (stops[s + 1][2] - stops[s][2])));
        }
      }
      img.set(x, y, r, g, b);
    }
  }
  return img;
}

}  // namespace satac
