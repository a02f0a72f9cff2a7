#pragma once

namespace satac {

// Piecewise brightness-vs-temperature model of the luminescent film.
// Brightness sits at `base` below `rise_start_C`, climbs linearly to
// `peak_brightness` at `peak_C`, falls linearly at `fall_slope` per degree
// until `fall_end_C`, and stays constant beyond. Continuous everywhere.
struct TruthCurve {
  double base = 0.2;
  double rise_start_C = 50.0;
  double peak_C = 180.0;
  double peak_brightness = 0.8;
  double fall_slope = 0.01;  // brightness drop per degree C past the peak
  double fall_end_C = 200.0;

  // Temperature range the model claims validity for.
  static constexpr double kMinValidC = 20.0;
  static constexpr double kMaxValidC = 250.0;

  void validate() const;
};

double brightness_of(double temperature_C, const TruthCurve& curve = {});

}  // namespace satac
