#include "satac/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "satac/error.hpp"

namespace satac {

namespace {

constexpr double kMinCurveSpanC = 20.0;

// Increasing pool-adjacent-violators: least-squares projection onto the
// non-decreasing cone, uniform weights.
std::vector<double> pav_increasing(const std::vector<double>& y) {
  struct Block {
    double sum;
    int count;
  };
  std::vector<Block> blocks;
  blocks.reserve(y.size());
  for (double v : y) {
    blocks.push_back({v, 1});
    while (blocks.size() >= 2) {
      Block& prev = blocks[blocks.size() - 2];
      Block& last = blocks.back();
      if (prev.sum / prev.count <= last.sum / last.count) break;
      prev.sum += last.sum;
      prev.count += last.count;
      blocks.pop_back();
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (const Block& b : blocks) {
    double level = b.sum / b.count;
    for (int i = 0; i < b.count; ++i) out.push_back(level);
  }
  return out;
}

}  // namespace

size_t CalibrationModel::peak_index() const {
  size_t best = 0;
  for (size_t i = 1; i < temp_curve.size(); ++i) {
    if (temp_curve[i].brightness > temp_curve[best].brightness) best = i;
  }
  return best;
}

void CalibrationModel::validate() const {
  if (!temp_curve.empty()) {
    if (temp_curve.size() < 2) {
      throw Error(ErrorKind::invalid_argument,
                  "calibration: temperature curve needs at least 2 knots");
    }
    for (size_t i = 1; i < temp_curve.size(); ++i) {
      if (!(temp_curve[i].temp_C > temp_curve[i - 1].temp_C)) {
        throw Error(ErrorKind::invalid_argument,
                    "calibration: knot temperatures must be strictly increasing");
      }
    }
    if (temp_curve.back().temp_C - temp_curve.front().temp_C < kMinCurveSpanC) {
      throw Error(ErrorKind::invalid_argument,
                  "calibration: temperature knots must span at least 20 C");
    }
    size_t peak = peak_index();
    for (size_t i = 1; i <= peak; ++i) {
      if (temp_curve[i].brightness < temp_curve[i - 1].brightness) {
        throw Error(ErrorKind::invalid_argument,
                    "calibration: brightness not monotone up to the peak knot");
      }
    }
  }
  for (const LinearGain* g : {&pressure_gain, &shear_gain}) {
    if (g->fitted && !(std::isfinite(g->slope) && std::isfinite(g->intercept))) {
      throw Error(ErrorKind::invalid_argument, "calibration: non-finite gain");
    }
  }
}

std::vector<TempKnot> fit_temperature_curve(
    const std::vector<CalibrationSample>& samples) {
  std::map<double, std::pair<double, int>> grouped;  // T -> (sum, count)
  for (const CalibrationSample& s : samples) {
    if (s.kind != SampleKind::temperature) continue;
    auto& slot = grouped[s.stimulus];
    slot.first += s.response;
    slot.second += 1;
  }
  if (grouped.size() < 2) {
    throw Error(ErrorKind::invalid_argument,
                "temperature fit: need samples at >= 2 distinct temperatures");
  }

  std::vector<TempKnot> knots;
  knots.reserve(grouped.size());
  for (const auto& [temp, slot] : grouped) {
    knots.push_back({temp, slot.first / slot.second});
  }
  if (knots.back().temp_C - knots.front().temp_C < kMinCurveSpanC) {
    throw Error(ErrorKind::invalid_argument,
                "temperature fit: samples must span at least 20 C");
  }

  bool all_equal = std::all_of(knots.begin(), knots.end(), [&](const TempKnot& k) {
    return k.brightness == knots.front().brightness;
  });
  if (all_equal) {
    throw Error(ErrorKind::invalid_argument,
                "temperature fit: flat response curve is not invertible");
  }

  // Isotonic projection of the branch up to the raw peak; the descending
  // tail stays as measured.
  size_t peak = 0;
  for (size_t i = 1; i < knots.size(); ++i) {
    if (knots[i].brightness > knots[peak].brightness) peak = i;
  }
  std::vector<double> rising(peak + 1);
  for (size_t i = 0; i <= peak; ++i) rising[i] = knots[i].brightness;
  std::vector<double> projected = pav_increasing(rising);
  for (size_t i = 0; i <= peak; ++i) knots[i].brightness = projected[i];
  return knots;
}

LinearGain fit_linear_gain(const std::vector<CalibrationSample>& samples) {
  if (samples.size() < 2) {
    throw Error(ErrorKind::invalid_argument, "linear fit: need >= 2 samples");
  }
  double n = static_cast<double>(samples.size());
  double sx = 0.0, sy = 0.0;
  for (const CalibrationSample& s : samples) {
    sx += s.stimulus;
    sy += s.response;
  }
  double mean_x = sx / n;
  double mean_y = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const CalibrationSample& s : samples) {
    double dx = s.stimulus - mean_x;
    double dy = s.response - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) {
    throw Error(ErrorKind::invalid_argument,
                "linear fit: stimulus has zero variance");
  }

  LinearGain gain;
  gain.slope = sxy / sxx;
  gain.intercept = mean_y - gain.slope * mean_x;
  double ss_res = syy - gain.slope * sxy;
  gain.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  gain.fitted = true;
  return gain;
}

TempReading invert_temperature(double brightness,
                               const std::vector<TempKnot>& curve) {
  if (curve.size() < 2) {
    throw Error(ErrorKind::bad_state, "invert: temperature curve not fitted");
  }
  size_t peak = 0;
  for (size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].brightness > curve[peak].brightness) peak = i;
  }
  double peak_value = curve[peak].brightness;

  // Brightness values also reachable on the descending branch cannot be
  // inverted uniquely from a single frame.
  double ambiguity_threshold = peak_value;
  for (size_t i = peak; i < curve.size(); ++i) {
    ambiguity_threshold = std::min(ambiguity_threshold, curve[i].brightness);
  }

  if (brightness <= curve.front().brightness + kBelowRangeEps) {
    return {curve.front().temp_C, TempFlag::below_range};
  }
  if (brightness >= peak_value) {
    return {curve[peak].temp_C, TempFlag::ambiguous_above_peak};
  }

  // Locate the rising segment containing this brightness.
  size_t j = 0;
  while (j < peak && curve[j + 1].brightness < brightness) ++j;
  const TempKnot& lo = curve[j];
  const TempKnot& hi = curve[j + 1];
  double temp;
  if (hi.brightness == lo.brightness) {
    temp = lo.temp_C;
  } else {
    temp = lo.temp_C + (brightness - lo.brightness) *
                           (hi.temp_C - lo.temp_C) /
                           (hi.brightness - lo.brightness);
  }
  TempFlag flag = brightness >= ambiguity_threshold - kAmbiguityMargin
                      ? TempFlag::ambiguous_above_peak
                      : TempFlag::in_range;
  return {temp, flag};
}

double interpolate_brightness(double temp_C, const std::vector<TempKnot>& curve) {
  if (curve.empty()) {
    throw Error(ErrorKind::bad_state, "interpolate: empty curve");
  }
  if (temp_C <= curve.front().temp_C) return curve.front().brightness;
  if (temp_C >= curve.back().temp_C) return curve.back().brightness;
  size_t j = 0;
  while (j + 1 < curve.size() && curve[j + 1].temp_C < temp_C) ++j;
  const TempKnot& lo = curve[j];
  const TempKnot& hi = curve[j + 1];
  double t = (temp_C - lo.temp_C) / (hi.temp_C - lo.temp_C);
  return lo.brightness + t * (hi.brightness - lo.brightness);
}

CalibrationModel fit_calibration(const std::vector<CalibrationSample>& samples,
                                 const std::string& source) {
  CalibrationModel model;
  model.source = source;
  std::vector<CalibrationSample> pressure, shear;
  int temp_count = 0;
  for (const CalibrationSample& s : samples) {
    switch (s.kind) {
      case SampleKind::temperature: ++temp_count; break;
      case SampleKind::pressure: pressure.push_back(s); break;
      case SampleKind::shear: shear.push_back(s); break;
    }
  }
  if (temp_count > 0) model.temp_curve = fit_temperature_curve(samples);
  if (!pressure.empty()) model.pressure_gain = fit_linear_gain(pressure);
  if (!shear.empty()) model.shear_gain = fit_linear_gain(shear);
  model.sample_counts["temperature"] = temp_count;
  model.sample_counts["pressure"] = static_cast<int>(pressure.size());
  model.sample_counts["shear"] = static_cast<int>(shear.size());
  model.validate();
  return model;
}

std::string sample_kind_name(SampleKind kind) {
  switch (kind) {
    case SampleKind::temperature: return "temperature";
    case SampleKind::pressure: return "pressure";
    case SampleKind::shear: return "shear";
  }
  return "unknown";
}

SampleKind sample_kind_from_name(const std::string& name) {
  if (name == "temperature") return SampleKind::temperature;
  if (name == "pressure") return SampleKind::pressure;
  if (name == "shear") return SampleKind::shear;
  throw Error(ErrorKind::invalid_argument, "unknown sample kind: " + name);
}

std::vector<CalibrationSample> read_samples_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  std::vector<CalibrationSample> samples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string kind_str, stimulus_str, response_str, repeat_str;
    std::getline(ss, kind_str, ',');
    std::getline(ss, stimulus_str, ',');
    std::getline(ss, response_str, ',');
    std::getline(ss, repeat_str, ',');
    if (line_no == 1 && kind_str == "kind") continue;  // header
    try {
      CalibrationSample s;
      s.kind = sample_kind_from_name(kind_str);
      s.stimulus = std::stod(stimulus_str);
      s.response = std::stod(response_str);
      s.repeat_index = repeat_str.empty() ? 0 : std::stoi(repeat_str);
      samples.push_back(s);
    } catch (const std::exception&) {
      throw Error(ErrorKind::io, path + ":" + std::to_string(line_no) +
                                     ": malformed sample row");
    }
  }
  return samples;
}

void write_samples_csv(const std::vector<CalibrationSample>& samples,
                       const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
  out << "kind,stimulus,response,repeat_index\n";
  char buf[128];
  for (const CalibrationSample& s : samples) {
    std::snprintf(buf, sizeof(buf), "%s,%.9g,%.9g,%d\n",
                  sample_kind_name(s.kind).c_str(), s.stimulus, s.response,
                  s.repeat_index);
    out << buf;
  }
}

}  // namespace satac
