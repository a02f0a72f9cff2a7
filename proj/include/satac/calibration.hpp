#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace satac {

enum class SampleKind { temperature, pressure, shear };

// One characterization measurement: a controlled stimulus (degrees C or
// newtons) and the sensor's scalar response.
struct CalibrationSample {
  SampleKind kind = SampleKind::temperature;
  double stimulus = 0.0;
  double response = 0.0;
  int repeat_index = 0;
};

struct LinearGain {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  bool fitted = false;
};

struct TempKnot {
  double temp_C = 0.0;
  double brightness = 0.0;
};

enum class TempFlag : uint8_t { in_range, below_range, ambiguous_above_peak };

struct TempReading {
  double temp_C = 0.0;
  TempFlag flag = TempFlag::in_range;
};

struct CalibrationModel {
  std::vector<TempKnot> temp_curve;  // sorted by temperature
  LinearGain pressure_gain;
  LinearGain shear_gain;
  std::string source;
  std::map<std::string, int> sample_counts;

  bool has_temp_curve() const { return temp_curve.size() >= 2; }
  // Index of the brightest knot (first one, when tied).
  size_t peak_index() const;
  void validate() const;
};

// Averages repeats per temperature and projects the rising branch onto a
// monotone curve with pool-adjacent-violators. Knots past the peak are kept
// as plain means; they record the descending branch.
std::vector<TempKnot> fit_temperature_curve(
    const std::vector<CalibrationSample>& samples);

// Ordinary least squares of response on stimulus. The decode gain is the
// reciprocal of the fitted slope.
LinearGain fit_linear_gain(const std::vector<CalibrationSample>& samples);

// Tolerance on the below-range boundary. A flat background at exactly the
// first knot's brightness jitters by a few ulp through the box sums, and a
// reading at the boundary carries no in-range information anyway.
inline constexpr double kBelowRangeEps = 1e-9;

// Safety margin on the ambiguity boundary, in brightness units. Marker
// removal leaves a small systematic droop (a filter window that contains a
// marker pulls the surrounding plateau toward the window mean), so a surface
// at the curve's fold point reads a couple of 1e-3 under its true brightness.
// The margin keeps such readings flagged as two-valued instead of letting
// them masquerade as mid-range temperatures.
inline constexpr double kAmbiguityMargin = 5e-3;

// Piecewise-linear inverse of the rising branch. Brightness at or below the
// first knot (plus kBelowRangeEps) reads as (T_min, below_range). Brightness
// reachable from the descending branch -- anything within kAmbiguityMargin of
// the curve's post-peak minimum or above -- is two-valued and flags
// ambiguous_above_peak; the value still comes from the rising branch until it
// clips to T_peak at the peak itself.
TempReading invert_temperature(double brightness,
                               const std::vector<TempKnot>& curve);

// Interpolates the curve at a temperature (clamping outside the knot range).
double interpolate_brightness(double temp_C, const std::vector<TempKnot>& curve);

// Fits every kind present in the sample set.
CalibrationModel fit_calibration(const std::vector<CalibrationSample>& samples,
                                 const std::string& source = "fit");

std::string sample_kind_name(SampleKind kind);
SampleKind sample_kind_from_name(const std::string& name);

// CSV rows: kind,stimulus,response,repeat_index (header line optional).
std::vector<CalibrationSample> read_samples_csv(const std::string& path);
void write_samples_csv(const std::vector<CalibrationSample>& samples,
                       const std::string& path);

}  // namespace satac
