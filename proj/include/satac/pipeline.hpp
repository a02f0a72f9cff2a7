#pragma once

#include <optional>
#include <string>
#include <vector>

#include "satac/calibration.hpp"
#include "satac/image.hpp"
#include "satac/marker_detect.hpp"
#include "satac/mechanics.hpp"
#include "satac/sensor_config.hpp"
#include "satac/thermal_decode.hpp"
#include "satac/voronoi.hpp"

namespace satac {

struct PipelineParams {
  int threshold_window_px = 0;  // 0 derives the default from the config
  double threshold_offset = kDefaultThresholdOffset;
  double gate_px = 0.0;  // 0 = half the marker pitch
  ThermalDecodeParams thermal;
  bool thermal_params_set = false;  // false derives radius from the config
};

struct StageTiming {
  std::string name;
  double ms = 0.0;
};

// Everything decoded from one frame. In raw (uncalibrated) mode the
// temperature field is absent and mechanics stay in native units (rates and
// pixels); the marker-free brightness field is always populated.
struct ModalityBundle {
  int frame_index = 0;
  ScalarField brightness;
  TemperatureField temperature;
  PressureField pressure;
  ShearField shear;
  MarkerSet markers;
  DisplacementField displacement;
  std::vector<StageTiming> timings;
  double total_ms = 0.0;

  bool has_temperature() const { return temperature.width() > 0; }
  double stage_sum_ms() const;
};

class DecodePipeline {
 public:
  // No calibration = raw mode. With a calibration, a temperature curve is
  // required; mechanics gains fall back to unit when not fitted only in raw
  // mode, otherwise unfitted gains are an error at decode time.
  DecodePipeline(const SensorConfig& config,
                 std::optional<CalibrationModel> calib,
                 const PipelineParams& params = {});

  // Captures reference markers and the reference tessellation from a rest
  // frame. Errors when the detected marker count differs from the grid size.
  void set_reference(const GrayFrame& rest_frame);
  bool has_reference() const { return !ref_markers_.markers.empty(); }

  const MarkerSet& reference_markers() const { return ref_markers_; }
  const Tessellation& reference_tessellation() const { return ref_tess_; }
  const SensorConfig& config() const { return config_; }
  const std::optional<CalibrationModel>& calibration() const { return calib_; }
  bool raw_mode() const { return !calib_.has_value(); }

  ModalityBundle decode(const GrayFrame& frame, int frame_index);

 private:
  SensorConfig config_;
  std::optional<CalibrationModel> calib_;
  PipelineParams params_;
  MarkerSet ref_markers_;
  Tessellation ref_tess_;
};

// Writes the per-frame artifact set into `dir` using zero-padded names:
// temp_0000.csv/.png (or brightness_0000.csv/.png in raw mode),
// pressure_0000.csv/.png, shear_0000.csv/.png, displacement_0000.csv,
// markers_0000.csv.
void write_bundle_outputs(const ModalityBundle& bundle, const std::string& dir,
                          const DecodePipeline& pipeline);

// timings.json with per-frame stage breakdowns and the median total.
void write_timings_json(const std::vector<ModalityBundle>& bundles,
                        const std::string& path);

}  // namespace satac
