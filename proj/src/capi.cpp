#include "satac.h"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "satac/calibration.hpp"
#include "satac/error.hpp"
#include "satac/eval_harness.hpp"
#include "satac/image_io.hpp"
#include "satac/json_io.hpp"
#include "satac/pipeline.hpp"
#include "satac/scenario.hpp"
#include "satac/sensor_config.hpp"
#include "satac/simulator.hpp"

namespace {

thread_local std::string g_last_error;

satac_status status_of(const satac::Error& e) {
  switch (e.kind()) {
    case satac::ErrorKind::invalid_argument:
      return SATAC_ERROR_INVALID_ARGUMENT;
    case satac::ErrorKind::io:
      return SATAC_ERROR_IO;
    case satac::ErrorKind::bad_state:
      return SATAC_ERROR_BAD_STATE;
  }
  return SATAC_ERROR_RUNTIME;
}

template <typename Fn>
satac_status guarded(Fn&& fn) {
  try {
    fn();
    return SATAC_OK;
  } catch (const satac::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SATAC_ERROR_RUNTIME;
  } catch (...) {
    g_last_error = "unknown failure";
    return SATAC_ERROR_RUNTIME;
  }
}

satac_status fail_null(const char* what) {
  g_last_error = std::string(what) + " must not be null";
  return SATAC_ERROR_INVALID_ARGUMENT;
}

}  // namespace

struct satac_config {
  satac::SensorConfig value;
};
struct satac_scenario {
  satac::ScenarioDocument value;
};
struct satac_frame {
  satac::GrayFrame value;
};
struct satac_calibration {
  satac::CalibrationModel value;
};
struct satac_pipeline {
  satac::DecodePipeline value;
};
struct satac_bundle {
  satac::ModalityBundle value;
};

extern "C" {

const char* satac_version(void) { return "1.0.0"; }

const char* satac_last_error(void) { return g_last_error.c_str(); }

/* ---- config ---- */

satac_status satac_config_create_default(satac_config** out) {
  if (!out) return fail_null("out");
  return guarded([&] { *out = new satac_config{satac::SensorConfig{}}; });
}

satac_status satac_config_load(const char* path, satac_config** out) {
  if (!path) return fail_null("path");
  if (!out) return fail_null("out");
  return guarded(
      [&] { *out = new satac_config{satac::load_sensor_config(path)}; });
}

satac_status satac_config_save(const satac_config* config, const char* path) {
  if (!config) return fail_null("config");
  if (!path) return fail_null("path");
  return guarded([&] { satac::save_sensor_config(config->value, path); });
}

satac_status satac_config_frame_size(const satac_config* config, int* width,
                                     int* height) {
  if (!config) return fail_null("config");
  if (width) *width = config->value.frame_width_px;
  if (height) *height = config->value.frame_height_px;
  return SATAC_OK;
}

satac_status satac_config_marker_count(const satac_config* config, int* count) {
  if (!config) return fail_null("config");
  if (!count) return fail_null("count");
  *count = config->value.marker_count();
  return SATAC_OK;
}

void satac_config_destroy(satac_config* config) { delete config; }

/* ---- scenario ---- */

satac_status satac_scenario_load(const char* path, const satac_config* config,
                                 satac_scenario** out) {
  if (!path) return fail_null("path");
  if (!config) return fail_null("config");
  if (!out) return fail_null("out");
  return guarded([&] {
    *out = new satac_scenario{satac::load_scenario(path, config->value)};
  });
}

satac_status satac_scenario_parse(const char* json_text,
                                  const satac_config* config,
                                  satac_scenario** out) {
  if (!json_text) return fail_null("json_text");
  if (!config) return fail_null("config");
  if (!out) return fail_null("out");
  return guarded([&] {
    *out =
        new satac_scenario{satac::scenario_from_json(json_text, config->value)};
  });
}

satac_status satac_scenario_frame_count(const satac_scenario* scenario,
                                        size_t* count) {
  if (!scenario) return fail_null("scenario");
  if (!count) return fail_null("count");
  *count = scenario->value.frames.size();
  return SATAC_OK;
}

void satac_scenario_destroy(satac_scenario* scenario) { delete scenario; }

/* ---- frames ---- */

satac_status satac_render_frame(const satac_scenario* scenario,
                                const satac_config* config, size_t frame_index,
                                satac_frame** out) {
  if (!scenario) return fail_null("scenario");
  if (!config) return fail_null("config");
  if (!out) return fail_null("out");
  return guarded([&] {
    satac::ContactScenario frame_scenario = scenario->value.frame(frame_index);
    *out = new satac_frame{
        satac::render_frame(frame_scenario, config->value)};
  });
}

satac_status satac_render_rest_frame(const satac_config* config,
                                     satac_frame** out) {
  if (!config) return fail_null("config");
  if (!out) return fail_null("out");
  return guarded([&] {
    satac::ContactScenario rest;
    *out = new satac_frame{satac::render_frame(rest, config->value)};
  });
}

satac_status satac_frame_load(const char* path, satac_frame** out) {
  if (!path) return fail_null("path");
  if (!out) return fail_null("out");
  return guarded([&] { *out = new satac_frame{satac::read_frame(path)}; });
}

satac_status satac_frame_save(const satac_frame* frame, const char* path) {
  if (!frame) return fail_null("frame");
  if (!path) return fail_null("path");
  return guarded([&] { satac::write_frame(frame->value, path); });
}

satac_status satac_frame_size(const satac_frame* frame, int* width,
                              int* height) {
  if (!frame) return fail_null("frame");
  if (width) *width = frame->value.width;
  if (height) *height = frame->value.height;
  return SATAC_OK;
}

satac_status satac_frame_pixels(const satac_frame* frame, const double** data,
                                size_t* count) {
  if (!frame) return fail_null("frame");
  if (!data) return fail_null("data");
  if (!count) return fail_null("count");
  *data = frame->value.pixels.data();
  *count = frame->value.pixels.size();
  return SATAC_OK;
}

void satac_frame_destroy(satac_frame* frame) { delete frame; }

/* ---- calibration ---- */

satac_status satac_calibration_load(const char* path, satac_calibration** out) {
  if (!path) return fail_null("path");
  if (!out) return fail_null("out");
  return guarded(
      [&] { *out = new satac_calibration{satac::load_calibration(path)}; });
}

satac_status satac_calibration_save(const satac_calibration* calib,
                                    const char* path) {
  if (!calib) return fail_null("calib");
  if (!path) return fail_null("path");
  return guarded([&] { satac::save_calibration(calib->value, path); });
}

satac_status satac_calibrate_dir(const char* samples_dir,
                                 const char* out_path) {
  if (!samples_dir) return fail_null("samples_dir");
  if (!out_path) return fail_null("out_path");
  return guarded([&] {
    namespace fs = std::filesystem;
    if (!fs::is_directory(samples_dir)) {
      throw satac::Error(satac::ErrorKind::io,
                         std::string(samples_dir) + " is not a directory");
    }
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(samples_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") {
        files.push_back(entry.path().string());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      throw satac::Error(satac::ErrorKind::invalid_argument,
                         std::string("no .csv sample files in ") + samples_dir);
    }
    std::vector<satac::CalibrationSample> samples;
    for (const std::string& f : files) {
      std::vector<satac::CalibrationSample> part = satac::read_samples_csv(f);
      samples.insert(samples.end(), part.begin(), part.end());
    }
    satac::CalibrationModel model =
        satac::fit_calibration(samples, "calibrate");
    satac::save_calibration(model, out_path);
  });
}

void satac_calibration_destroy(satac_calibration* calib) { delete calib; }

/* ---- pipeline ---- */

satac_status satac_pipeline_create(const satac_config* config,
                                   const satac_calibration* calib,
                                   satac_pipeline** out) {
  if (!config) return fail_null("config");
  if (!out) return fail_null("out");
  return guarded([&] {
    std::optional<satac::CalibrationModel> model;
    if (calib) model = calib->value;
    *out = new satac_pipeline{
        satac::DecodePipeline(config->value, std::move(model))};
  });
}

satac_status satac_pipeline_set_reference(satac_pipeline* pipeline,
                                          const satac_frame* rest_frame) {
  if (!pipeline) return fail_null("pipeline");
  if (!rest_frame) return fail_null("rest_frame");
  return guarded([&] { pipeline->value.set_reference(rest_frame->value); });
}

satac_status satac_pipeline_decode(satac_pipeline* pipeline,
                                   const satac_frame* frame, int frame_index,
                                   satac_bundle** out) {
  if (!pipeline) return fail_null("pipeline");
  if (!frame) return fail_null("frame");
  if (!out) return fail_null("out");
  return guarded([&] {
    *out = new satac_bundle{pipeline->value.decode(frame->value, frame_index)};
  });
}

void satac_pipeline_destroy(satac_pipeline* pipeline) { delete pipeline; }

/* ---- bundle ---- */

satac_status satac_bundle_write_outputs(const satac_bundle* bundle,
                                        const satac_pipeline* pipeline,
                                        const char* dir) {
  if (!bundle) return fail_null("bundle");
  if (!pipeline) return fail_null("pipeline");
  if (!dir) return fail_null("dir");
  return guarded(
      [&] { satac::write_bundle_outputs(bundle->value, dir, pipeline->value); });
}

satac_status satac_bundle_total_ms(const satac_bundle* bundle, double* ms) {
  if (!bundle) return fail_null("bundle");
  if (!ms) return fail_null("ms");
  *ms = bundle->value.total_ms;
  return SATAC_OK;
}

satac_status satac_bundle_stage_count(const satac_bundle* bundle,
                                      size_t* count) {
  if (!bundle) return fail_null("bundle");
  if (!count) return fail_null("count");
  *count = bundle->value.timings.size();
  return SATAC_OK;
}

satac_status satac_bundle_stage_name(const satac_bundle* bundle, size_t index,
                                     const char** name) {
  if (!bundle) return fail_null("bundle");
  if (!name) return fail_null("name");
  if (index >= bundle->value.timings.size()) {
    g_last_error = "stage index out of range";
    return SATAC_ERROR_INVALID_ARGUMENT;
  }
  *name = bundle->value.timings[index].name.c_str();
  return SATAC_OK;
}

satac_status satac_bundle_stage_ms(const satac_bundle* bundle, size_t index,
                                   double* ms) {
  if (!bundle) return fail_null("bundle");
  if (!ms) return fail_null("ms");
  if (index >= bundle->value.timings.size()) {
    g_last_error = "stage index out of range";
    return SATAC_ERROR_INVALID_ARGUMENT;
  }
  *ms = bundle->value.timings[index].ms;
  return SATAC_OK;
}

satac_status satac_bundle_marker_count(const satac_bundle* bundle,
                                       size_t* count) {
  if (!bundle) return fail_null("bundle");
  if (!count) return fail_null("count");
  *count = bundle->value.markers.markers.size();
  return SATAC_OK;
}

satac_status satac_bundle_match_count(const satac_bundle* bundle,
                                      size_t* count) {
  if (!bundle) return fail_null("bundle");
  if (!count) return fail_null("count");
  *count = bundle->value.displacement.matches.size();
  return SATAC_OK;
}

satac_status satac_bundle_has_temperature(const satac_bundle* bundle,
                                          int* has) {
  if (!bundle) return fail_null("bundle");
  if (!has) return fail_null("has");
  *has = bundle->value.has_temperature() ? 1 : 0;
  return SATAC_OK;
}

satac_status satac_bundle_temperature_at(const satac_bundle* bundle, int x,
                                         int y, double* temp_c,
                                         satac_temp_flag* flag) {
  if (!bundle) return fail_null("bundle");
  const satac::TemperatureField& field = bundle->value.temperature;
  if (!bundle->value.has_temperature()) {
    g_last_error = "bundle has no temperature field (raw mode)";
    return SATAC_ERROR_BAD_STATE;
  }
  if (x < 0 || x >= field.width() || y < 0 || y >= field.height()) {
    g_last_error = "pixel out of range";
    return SATAC_ERROR_INVALID_ARGUMENT;
  }
  size_t i = static_cast<size_t>(y) * field.width() + x;
  if (temp_c) *temp_c = field.values.values[i];
  if (flag) {
    switch (field.flags[i]) {
      case satac::TempFlag::in_range: *flag = SATAC_TEMP_IN_RANGE; break;
      case satac::TempFlag::below_range: *flag = SATAC_TEMP_BELOW_RANGE; break;
      case satac::TempFlag::ambiguous_above_peak:
        *flag = SATAC_TEMP_AMBIGUOUS_ABOVE_PEAK;
        break;
    }
  }
  return SATAC_OK;
}

satac_status satac_bundle_pressure_total_rate(const satac_bundle* bundle,
                                              double* total_rate) {
  if (!bundle) return fail_null("bundle");
  if (!total_rate) return fail_null("total_rate");
  *total_rate = bundle->value.pressure.total_rate;
  return SATAC_OK;
}

satac_status satac_bundle_shear_aggregate(const satac_bundle* bundle,
                                          double* aggregate) {
  if (!bundle) return fail_null("bundle");
  if (!aggregate) return fail_null("aggregate");
  *aggregate = bundle->value.shear.aggregate;
  return SATAC_OK;
}

void satac_bundle_destroy(satac_bundle* bundle) { delete bundle; }

satac_status satac_timings_write(const satac_bundle* const* bundles,
                                 size_t count, const char* path) {
  if (!bundles && count > 0) return fail_null("bundles");
  if (!path) return fail_null("path");
  return guarded([&] {
    std::vector<satac::ModalityBundle> list;
    list.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (!bundles[i]) {
        throw satac::Error(satac::ErrorKind::invalid_argument,
                           "bundles array contains a null entry");
      }
      list.push_back(bundles[i]->value);
    }
    satac::write_timings_json(list, path);
  });
}

/* ---- eval ---- */

satac_status satac_eval_run(const char* protocol, const satac_config* config,
                            int seeds, const char* report_path, int* pass) {
  if (!protocol) return fail_null("protocol");
  if (!config) return fail_null("config");
  if (!report_path) return fail_null("report_path");
  return guarded([&] {
    satac::Protocol p = satac::protocol_from_name(protocol);
    satac::ProtocolMetrics metrics =
        satac::eval_protocol(p, config->value, seeds);
    satac::EvalReport report;
    report.entries.push_back(metrics);
    satac::write_report_json(report, report_path);
    if (pass) *pass = metrics.pass ? 1 : 0;
  });
}

}  // extern "C"
