#include "satac/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "satac/error.hpp"

namespace satac {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string padded(const char* stem, int index, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%04d%s", stem, index, ext);
  return buf;
}

GrayFrame brightness_to_frame(const ScalarField& field) {
  GrayFrame f = GrayFrame::filled(field.width, field.height, 0.0);
  for (size_t i = 0; i < field.values.size(); ++i) {
    f.pixels[i] = std::clamp(field.values[i], 0.0, 1.0);
  }
  return f;
}

}  // namespace

double ModalityBundle::stage_sum_ms() const {
  double sum = 0.0;
  for (const StageTiming& t : timings) sum += t.ms;
  return sum;
}

DecodePipeline::DecodePipeline(const SensorConfig& config,
                               std::optional<CalibrationModel> calib,
                               const PipelineParams& params)
    : config_(config), calib_(std::move(calib)), params_(params) {
  config_.validate();
  if (calib_.has_value()) {
    calib_->validate();
    if (!calib_->has_temp_curve()) {
      throw Error(ErrorKind::bad_state,
                  "pipeline: calibration lacks a temperature curve (use raw "
                  "mode for mechanics-only decoding)");
    }
  }
  if (params_.threshold_window_px == 0) {
    params_.threshold_window_px = default_threshold_window(config_);
  }
  if (params_.gate_px == 0.0) params_.gate_px = 0.5 * config_.pitch_px();
  if (!params_.thermal_params_set) params_.thermal = thermal_params_for(config_);
}

void DecodePipeline::set_reference(const GrayFrame& rest_frame) {
  BinaryMask mask = adaptive_threshold(rest_frame, params_.threshold_window_px,
                                       params_.threshold_offset);
  MarkerSet markers = extract_markers(mask, config_);
  if (static_cast<int>(markers.markers.size()) != config_.marker_count()) {
    throw Error(ErrorKind::invalid_argument,
                "bad rest frame: found " +
                    std::to_string(markers.markers.size()) + " markers, grid has " +
                    std::to_string(config_.marker_count()));
  }
  std::vector<int> ids;
  std::vector<Vec2> seeds;
  ids.reserve(markers.markers.size());
  seeds.reserve(markers.markers.size());
  for (const Marker& m : markers.markers) {
    ids.push_back(m.id);
    seeds.push_back(m.centroid_px);
  }
  ref_tess_ = voronoi_tessellate(ids, seeds, config_.field_rect_px());
  ref_markers_ = std::move(markers);
}

ModalityBundle DecodePipeline::decode(const GrayFrame& frame, int frame_index) {
  if (!has_reference()) {
    throw Error(ErrorKind::bad_state, "pipeline: reference frame not set");
  }
  frame.validate();
  if (frame.width != config_.frame_width_px ||
      frame.height != config_.frame_height_px) {
    throw Error(ErrorKind::invalid_argument,
                "pipeline: frame dims do not match the sensor config");
  }

  ModalityBundle bundle;
  bundle.frame_index = frame_index;
  auto whole = Clock::now();
  auto stage = Clock::now();
  auto lap = [&](const char* name) {
    bundle.timings.push_back({name, ms_since(stage)});
    stage = Clock::now();
  };

  BinaryMask mask = adaptive_threshold(frame, params_.threshold_window_px,
                                       params_.threshold_offset);
  lap("threshold");

  bundle.markers = extract_markers(mask, config_);
  BinaryMask marker_mask = filter_marker_mask(mask, config_);
  lap("detect");

  bundle.brightness = remove_markers(frame, marker_mask, params_.thermal);
  lap("remove_markers");

  if (calib_.has_value()) {
    // Reuses the marker-free field instead of re-running removal.
    bundle.temperature = invert_brightness_field(bundle.brightness, *calib_);
  }
  lap("invert_temperature");

  bundle.displacement =
      track_markers(ref_markers_, bundle.markers, params_.gate_px);
  lap("track");

  const Rect bounds = config_.field_rect_px();
  std::vector<int> ids;
  std::vector<Vec2> seeds;
  ids.reserve(bundle.displacement.matches.size());
  seeds.reserve(bundle.displacement.matches.size());
  for (const MatchedPair& m : bundle.displacement.matches) {
    if (!bounds.strictly_contains(m.cur_px)) continue;
    ids.push_back(m.marker_id);
    seeds.push_back(m.cur_px);
  }
  Tessellation cur_tess = voronoi_tessellate(ids, seeds, bounds);
  lap("tessellate");

  double pressure_gain =
      calib_.has_value() ? decode_gain(calib_->pressure_gain) : 1.0;
  std::map<int, double> rates = area_change_rates(ref_tess_, cur_tess);
  bundle.pressure = decode_pressure(rates, cur_tess, pressure_gain,
                                    config_.frame_width_px,
                                    config_.frame_height_px);
  lap("decode_pressure");

  double shear_gain = calib_.has_value() ? decode_gain(calib_->shear_gain) : 1.0;
  bundle.shear = decode_shear(bundle.displacement, shear_gain);
  lap("decode_shear");

  bundle.total_ms = ms_since(whole);
  return bundle;
}

void write_bundle_outputs(const ModalityBundle& bundle, const std::string& dir,
                          const DecodePipeline& pipeline) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create directory " + dir);
  const int idx = bundle.frame_index;
  const fs::path base(dir);

  if (bundle.has_temperature()) {
    write_temperature_csv(bundle.temperature,
                          (base / padded("temp", idx, ".csv")).string());
    // Heatmap spans the calibrated range, first knot to peak knot.
    const std::vector<TempKnot>& curve = pipeline.calibration()->temp_curve;
    double t_lo = curve.front().temp_C;
    double t_hi = curve[pipeline.calibration()->peak_index()].temp_C;
    if (!(t_hi > t_lo)) t_hi = t_lo + 1.0;
    write_png_rgb(temperature_heatmap(bundle.temperature, t_lo, t_hi),
                  (base / padded("temp", idx, ".png")).string());
  } else {
    std::ofstream out((base / padded("brightness", idx, ".csv")).string(),
                      std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write brightness csv");
    out << "x_px,y_px,value\n";
    char buf[64];
    for (int y = 0; y < bundle.brightness.height; ++y) {
      for (int x = 0; x < bundle.brightness.width; ++x) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.6f\n", x, y,
                      bundle.brightness.at(x, y));
        out << buf;
      }
    }
    write_png_gray(brightness_to_frame(bundle.brightness),
                   (base / padded("brightness", idx, ".png")).string());
  }

  write_pressure_csv(bundle.pressure,
                     (base / padded("pressure", idx, ".csv")).string());
  GrayFrame pressure_gray = GrayFrame::filled(bundle.pressure.render.width,
                                              bundle.pressure.render.height, 0.0);
  for (size_t i = 0; i < pressure_gray.pixels.size(); ++i) {
    pressure_gray.pixels[i] = bundle.pressure.render.values[i] / 255.0;
  }
  write_png_gray(pressure_gray, (base / padded("pressure", idx, ".png")).string());

  write_shear_csv(bundle.shear, (base / padded("shear", idx, ".csv")).string());
  write_png_rgb(shear_quiver(bundle.shear, pipeline.config().frame_width_px,
                             pipeline.config().frame_height_px),
                (base / padded("shear", idx, ".png")).string());

  write_displacement_csv(bundle.displacement,
                         (base / padded("displacement", idx, ".csv")).string());
  write_markers_csv(bundle.markers,
                    (base / padded("markers", idx, ".csv")).string());
}

void write_timings_json(const std::vector<ModalityBundle>& bundles,
                        const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
  std::vector<double> totals;
  totals.reserve(bundles.size());
  for (const ModalityBundle& b : bundles) totals.push_back(b.total_ms);
  std::sort(totals.begin(), totals.end());
  double median = 0.0;
  if (!totals.empty()) {
    size_t mid = totals.size() / 2;
    median = totals.size() % 2 ? totals[mid]
                               : 0.5 * (totals[mid - 1] + totals[mid]);
  }

  out << "{\n  \"median_total_ms\": " << median << ",\n  \"frames\": [\n";
  for (size_t i = 0; i < bundles.size(); ++i) {
    const ModalityBundle& b = bundles[i];
    out << "    {\"index\": " << b.frame_index << ", \"total_ms\": "
        << b.total_ms << ", \"stages\": {";
    for (size_t j = 0; j < b.timings.size(); ++j) {
      out << "\"" << b.timings[j].name << "\": " << b.timings[j].ms;
      if (j + 1 < b.timings.size()) out << ", ";
    }
    out << "}}" << (i + 1 < bundles.size() ? "," : "") << "\n";
  }
  out << "  ]\n}\n";
}

}  // namespace satac
