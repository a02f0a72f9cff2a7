#pragma once

#include <string>
#include <vector>

#include "satac/calibration.hpp"
#include "satac/image.hpp"
#include "satac/image_io.hpp"
#include "satac/sensor_config.hpp"

namespace satac {

struct ThermalDecodeParams {
  int guided_radius_px = 4;
  double guided_eps = 1e-3;
  int mask_dilation_px = 2;
  double inpaint_tol = 1e-4;
};

// Radius scales with marker size: 3x the marker radius, at least 1 px.
ThermalDecodeParams thermal_params_for(const SensorConfig& config);

struct TemperatureField {
  ScalarField values;           // unit = celsius
  std::vector<TempFlag> flags;  // one per pixel, same row-major order

  int width() const { return values.width; }
  int height() const { return values.height; }
};

// Marker suppression: edge-preserving smoothing of the frame followed by a
// harmonic fill of the (dilated) marker mask. Output is a brightness field.
ScalarField remove_markers(const GrayFrame& frame, const BinaryMask& markers,
                           const ThermalDecodeParams& params);

// Per-pixel inversion of a marker-free brightness field. Agrees with
// invert_temperature at every pixel; precomputes the curve for speed.
TemperatureField invert_brightness_field(const ScalarField& brightness,
                                         const CalibrationModel& calib);

// Full thermal chain: remove markers, then invert the calibration curve per
// pixel. Requires a fitted temperature curve.
TemperatureField decode_temperature(const GrayFrame& frame,
                                    const BinaryMask& markers,
                                    const CalibrationModel& calib,
                                    const ThermalDecodeParams& params);

const char* temp_flag_name(TempFlag flag);

// Rows: x_px,y_px,temp_C,flag
void write_temperature_csv(const TemperatureField& field,
                           const std::string& path);

// False-color render over [t_min, t_max]. Below-range pixels are dark gray,
// ambiguous pixels magenta.
RgbImage temperature_heatmap(const TemperatureField& field, double t_min,
                             double t_max);

}  // namespace satac
