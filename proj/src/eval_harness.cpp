#include "satac/eval_harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "satac/error.hpp"
#include "satac/pipeline.hpp"
#include "satac/simulator.hpp"

namespace satac {

namespace {

constexpr double kSweepNoiseSigma = 0.005;
constexpr double kPi = 3.14159265358979323846;

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

GrayFrame render_rest(const SensorConfig& config, const TruthCurve& curve) {
  ContactScenario rest;
  return render_frame(rest, config, curve);
}

struct FrameStats {
  std::vector<double> decode_ms;
  double recall_sum = 0.0;
  int frames = 0;

  void note(const ModalityBundle& bundle, const SensorConfig& config) {
    decode_ms.push_back(bundle.total_ms);
    recall_sum += static_cast<double>(bundle.markers.markers.size()) /
                  config.marker_count();
    ++frames;
  }
};

// Mean of a field over an axis-aligned pixel rectangle (inclusive).
double rect_mean(const ScalarField& field, int x0, int y0, int x1, int y1) {
  double sum = 0.0;
  int count = 0;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      sum += field.at(x, y);
      ++count;
    }
  }
  return sum / count;
}

ProtocolMetrics run_temperature(const SensorConfig& config, int seeds) {
  const TruthCurve curve;
  CalibrationModel calib = truth_calibration(curve);
  DecodePipeline pipeline(config, calib, {});
  pipeline.set_reference(render_rest(config, curve));

  std::vector<double> temps;
  for (double t = 50.0; t <= 200.0 + 1e-9; t += 5.0) temps.push_back(t);
  const size_t peak_i = 26;  // 180 C

  const double side_mm = 0.25 * config.sensing_field_mm.x;
  auto contact_at = [&](double temp_C) {
    ContactPrimitive c;
    c.shape = FootprintShape::square;
    c.size_mm = side_mm;
    c.temperature_C = temp_C;
    return c;
  };

  // Footprint core: inset past the edge-blur blend zone plus the filter halo.
  ThermalDecodeParams thermal = thermal_params_for(config);
  ContactPrimitive probe = contact_at(120.0);
  int inset = static_cast<int>(std::lround(
                  3.0 * probe.edge_blur_mm * config.px_per_mm)) +
              thermal.guided_radius_px + 2;
  Vec2 center = config.field_mm_to_px({0.0, 0.0});
  int half = static_cast<int>(std::floor(0.5 * side_mm * config.px_per_mm)) -
             inset;
  if (half < 4) {
    throw Error(ErrorKind::invalid_argument,
                "temperature sweep: footprint too small for a core region");
  }
  int cx0 = static_cast<int>(center.x) - half;
  int cx1 = static_cast<int>(center.x) + half;
  int cy0 = static_cast<int>(center.y) - half;
  int cy1 = static_cast<int>(center.y) + half;

  ProtocolMetrics m;
  m.protocol = protocol_name(Protocol::temperature_sweep);
  m.seeds = seeds;

  FrameStats stats;
  std::vector<double> seed_maes;
  bool monotonic = true;
  for (int s = 0; s < seeds; ++s) {
    std::vector<double> brightness_by_temp;
    double abs_err_sum = 0.0;
    int err_count = 0;
    for (size_t ti = 0; ti < temps.size(); ++ti) {
      ContactScenario sc;
      sc.contacts = {contact_at(temps[ti])};
      sc.pixel_noise_sigma = kSweepNoiseSigma;
      sc.rng_seed = 1000000ull + 10000ull * s + ti;
      GrayFrame frame = render_frame(sc, config, curve);
      ModalityBundle bundle = pipeline.decode(frame, static_cast<int>(ti));
      stats.note(bundle, config);

      brightness_by_temp.push_back(
          rect_mean(bundle.brightness, cx0, cy0, cx1, cy1));
      if (temps[ti] <= 180.0 + 1e-9) {
        for (int y = cy0; y <= cy1; ++y) {
          for (int x = cx0; x <= cx1; ++x) {
            abs_err_sum += std::abs(bundle.temperature.values.at(x, y) -
                                    temps[ti]);
            ++err_count;
          }
        }
      }
    }
    seed_maes.push_back(abs_err_sum / err_count);
    for (size_t i = 0; i + 1 < brightness_by_temp.size(); ++i) {
      bool rising = i < peak_i;
      double delta = brightness_by_temp[i + 1] - brightness_by_temp[i];
      if ((rising && delta <= 0.0) || (!rising && delta >= 0.0)) {
        monotonic = false;
      }
    }
  }

  m.temp_mae_C =
      std::accumulate(seed_maes.begin(), seed_maes.end(), 0.0) / seeds;
  m.temp_mae_spread_C =
      *std::max_element(seed_maes.begin(), seed_maes.end()) -
      *std::min_element(seed_maes.begin(), seed_maes.end());
  m.monotonic = monotonic;

  // Flag correctness on noiseless renders: empty frame reads below range
  // everywhere; a 200 C footprint core is ambiguous; 120 C is in range.
  bool flags_ok = true;
  {
    ModalityBundle rest = pipeline.decode(render_rest(config, curve), 1000);
    for (TempFlag f : rest.temperature.flags) {
      flags_ok = flags_ok && f == TempFlag::below_range;
    }
    ContactScenario hot;
    hot.contacts = {contact_at(200.0)};
    ModalityBundle above =
        pipeline.decode(render_frame(hot, config, curve), 1001);
    ContactScenario mid;
    mid.contacts = {contact_at(120.0)};
    ModalityBundle in_range =
        pipeline.decode(render_frame(mid, config, curve), 1002);
    for (int y = cy0; y <= cy1; ++y) {
      for (int x = cx0; x <= cx1; ++x) {
        size_t i = static_cast<size_t>(y) * config.frame_width_px + x;
        flags_ok = flags_ok &&
                   above.temperature.flags[i] == TempFlag::ambiguous_above_peak;
        flags_ok =
            flags_ok && in_range.temperature.flags[i] == TempFlag::in_range;
      }
    }
  }
  m.flags_ok = flags_ok;

  m.median_decode_ms = median_of(stats.decode_ms);
  m.marker_recall = stats.recall_sum / stats.frames;
  m.pass = m.temp_mae_C <= 2.0 && m.monotonic && m.flags_ok;
  return m;
}

ProtocolMetrics run_pressure(const SensorConfig& config, int seeds) {
  const TruthCurve curve;
  DecodePipeline pipeline(config, std::nullopt, {});
  pipeline.set_reference(render_rest(config, curve));

  const double field = config.sensing_field_mm.x;
  const std::vector<double> offsets = {-0.375 * field, -0.1875 * field, 0.0,
                                       0.1875 * field, 0.375 * field};
  // Warm soft-edged probe. A cold hard-edged one leaves every marker at the
  // same sub-pixel phase against the threshold, so sub-0.3 px displacements
  // at 1 N vanish identically and the ramp goes flat at the low end. The
  // thermal gradient spreads local background levels across the footprint,
  // staggering per-marker quantization onsets enough that the aggregate rate
  // responds smoothly from 1 N up.
  const double probe_radius_mm = 0.075 * field;
  const double probe_blur_mm = 0.05 * field;
  const double probe_temp_C = 80.0;

  ProtocolMetrics m;
  m.protocol = protocol_name(Protocol::pressure_ramp);
  m.seeds = seeds;

  FrameStats stats;
  std::vector<double> slopes, r2s;
  int frame_counter = 0;
  for (double py : offsets) {
    for (double px : offsets) {
      std::vector<CalibrationSample> samples;
      for (int s = 0; s < seeds; ++s) {
        for (int f = 1; f <= 8; ++f) {
          ContactPrimitive c;
          c.center_mm = {px, py};
          c.shape = FootprintShape::disk;
          c.size_mm = probe_radius_mm;
          c.edge_blur_mm = probe_blur_mm;
          c.temperature_C = probe_temp_C;
          c.normal_force_N = f;
          ContactScenario sc;
          sc.contacts = {c};
          sc.pixel_noise_sigma = kSweepNoiseSigma;
          sc.rng_seed = 2000000ull + 10000ull * s + frame_counter;
          GrayFrame frame = render_frame(sc, config, curve);
          ModalityBundle bundle = pipeline.decode(frame, frame_counter++);
          stats.note(bundle, config);
          samples.push_back({SampleKind::pressure, static_cast<double>(f),
                             bundle.pressure.total_rate, s});
        }
      }
      LinearGain fit = fit_linear_gain(samples);
      slopes.push_back(fit.slope);
      r2s.push_back(fit.r2);
    }
  }

  m.pressure_r2_min = *std::min_element(r2s.begin(), r2s.end());
  m.pressure_r2_mean =
      std::accumulate(r2s.begin(), r2s.end(), 0.0) / r2s.size();
  double slope_min = *std::min_element(slopes.begin(), slopes.end());
  double slope_max = *std::max_element(slopes.begin(), slopes.end());
  double slope_mean =
      std::accumulate(slopes.begin(), slopes.end(), 0.0) / slopes.size();
  m.pressure_slope_variation = (slope_max - slope_min) / slope_mean;

  m.median_decode_ms = median_of(stats.decode_ms);
  m.marker_recall = stats.recall_sum / stats.frames;
  m.pass = m.pressure_r2_min >= 0.99 && m.pressure_slope_variation <= 0.10;
  return m;
}

ProtocolMetrics run_shear(const SensorConfig& config, int seeds) {
  const TruthCurve curve;
  DecodePipeline pipeline(config, std::nullopt, {});
  pipeline.set_reference(render_rest(config, curve));

  const double field = config.sensing_field_mm.x;
  const Vec2 dir{std::cos(kPi / 6.0), std::sin(kPi / 6.0)};

  ProtocolMetrics m;
  m.protocol = protocol_name(Protocol::shear_ramp);
  m.seeds = seeds;

  FrameStats stats;
  std::vector<CalibrationSample> samples;
  std::vector<double> dir_errors_deg;
  int frame_counter = 0;
  for (int s = 0; s < seeds; ++s) {
    for (int step = 1; step <= 5; ++step) {
      double force = 0.2 * step;
      ContactPrimitive c;
      c.shape = FootprintShape::disk;
      c.size_mm = 0.125 * field;
      c.temperature_C = 20.0;
      c.shear_force_N = dir * force;
      ContactScenario sc;
      sc.contacts = {c};
      sc.pixel_noise_sigma = kSweepNoiseSigma;
      sc.rng_seed = 3000000ull + 10000ull * s + step;
      GrayFrame frame = render_frame(sc, config, curve);
      ModalityBundle bundle = pipeline.decode(frame, frame_counter++);
      stats.note(bundle, config);

      samples.push_back({SampleKind::shear, force,
                         bundle.shear.total_displacement_px, s});
      Vec2 total{0.0, 0.0};
      for (const ShearSample& sample : bundle.shear.samples) {
        total += sample.shear;
      }
      double cosine = (total.dot(dir)) / (total.norm() * dir.norm());
      cosine = std::clamp(cosine, -1.0, 1.0);
      dir_errors_deg.push_back(std::acos(cosine) * 180.0 / kPi);
    }
  }

  LinearGain fit = fit_linear_gain(samples);
  m.shear_r2 = fit.r2;
  m.shear_direction_error_deg =
      std::accumulate(dir_errors_deg.begin(), dir_errors_deg.end(), 0.0) /
      dir_errors_deg.size();

  m.median_decode_ms = median_of(stats.decode_ms);
  m.marker_recall = stats.recall_sum / stats.frames;
  m.pass = m.shear_r2 >= 0.99 && m.shear_direction_error_deg <= 5.0;
  return m;
}

}  // namespace

Protocol protocol_from_name(const std::string& name) {
  if (name == "temp" || name == "temperature" || name == "temperature-sweep") {
    return Protocol::temperature_sweep;
  }
  if (name == "pressure" || name == "pressure-ramp") {
    return Protocol::pressure_ramp;
  }
  if (name == "shear" || name == "shear-ramp") {
    return Protocol::shear_ramp;
  }
  throw Error(ErrorKind::invalid_argument, "unknown protocol: " + name);
}

const char* protocol_name(Protocol protocol) {
  switch (protocol) {
    case Protocol::temperature_sweep: return "temperature-sweep";
    case Protocol::pressure_ramp: return "pressure-ramp";
    case Protocol::shear_ramp: return "shear-ramp";
  }
  return "unknown";
}

CalibrationModel truth_calibration(const TruthCurve& curve) {
  std::vector<CalibrationSample> samples;
  for (double t = 50.0; t <= 200.0 + 1e-9; t += 5.0) {
    samples.push_back({SampleKind::temperature, t, brightness_of(t, curve), 0});
  }
  // Unit mechanics gains keep decoded values in native units.
  for (int i = 1; i <= 2; ++i) {
    samples.push_back(
        {SampleKind::pressure, static_cast<double>(i), static_cast<double>(i), 0});
    samples.push_back(
        {SampleKind::shear, static_cast<double>(i), static_cast<double>(i), 0});
  }
  return fit_calibration(samples, "truth-curve");
}

ProtocolMetrics eval_protocol(Protocol protocol, const SensorConfig& config,
                              int seeds) {
  config.validate();
  if (seeds < 1) {
    throw Error(ErrorKind::invalid_argument, "eval: seeds must be >= 1");
  }
  switch (protocol) {
    case Protocol::temperature_sweep: return run_temperature(config, seeds);
    case Protocol::pressure_ramp: return run_pressure(config, seeds);
    case Protocol::shear_ramp: return run_shear(config, seeds);
  }
  throw Error(ErrorKind::invalid_argument, "eval: bad protocol enum");
}

void write_report_json(const EvalReport& report, const std::string& path) {
  nlohmann::json j;
  j["schema"] = 1;
  j["entries"] = nlohmann::json::array();
  for (const ProtocolMetrics& m : report.entries) {
    nlohmann::json e;
    e["protocol"] = m.protocol;
    e["seeds"] = m.seeds;
    e["pass"] = m.pass;
    e["median_decode_ms"] = m.median_decode_ms;
    e["marker_recall"] = m.marker_recall;
    if (m.protocol == protocol_name(Protocol::temperature_sweep)) {
      e["temp_mae_C"] = m.temp_mae_C;
      e["temp_mae_spread_C"] = m.temp_mae_spread_C;
      e["monotonic"] = m.monotonic;
      e["flags_ok"] = m.flags_ok;
    } else if (m.protocol == protocol_name(Protocol::pressure_ramp)) {
      e["pressure_r2_min"] = m.pressure_r2_min;
      e["pressure_r2_mean"] = m.pressure_r2_mean;
      e["pressure_slope_variation"] = m.pressure_slope_variation;
    } else {
      e["shear_r2"] = m.shear_r2;
      e["shear_direction_error_deg"] = m.shear_direction_error_deg;
    }
    j["entries"].push_back(e);
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

}  // namespace satac
