#pragma once

#include <string>
#include <vector>

#include "satac/calibration.hpp"
#include "satac/sensor_config.hpp"
#include "satac/truth_curve.hpp"

namespace satac {

enum class Protocol { temperature_sweep, pressure_ramp, shear_ramp };

Protocol protocol_from_name(const std::string& name);
const char* protocol_name(Protocol protocol);

// Closed-loop metrics for one protocol: simulate the characterization sweep,
// decode every frame, compare to scenario truth. `seeds` controls how many
// independent noise seeds the sweep repeats with.
struct ProtocolMetrics {
  std::string protocol;
  int seeds = 0;
  bool pass = false;
  double median_decode_ms = 0.0;
  double marker_recall = 0.0;  // mean detected / grid count over all frames

  // temperature sweep
  double temp_mae_C = 0.0;
  double temp_mae_spread_C = 0.0;  // max - min across seeds
  bool monotonic = false;
  bool flags_ok = false;

  // pressure ramp
  double pressure_r2_min = 0.0;
  double pressure_r2_mean = 0.0;
  double pressure_slope_variation = 0.0;  // (max-min)/mean over grid points

  // shear ramp
  double shear_r2 = 0.0;
  double shear_direction_error_deg = 0.0;
};

struct EvalReport {
  std::vector<ProtocolMetrics> entries;
};

// Calibration whose temperature curve samples the truth curve at 5 C steps
// over the sweep range; mechanics gains are unit (raw-equivalent).
CalibrationModel truth_calibration(const TruthCurve& curve);

ProtocolMetrics eval_protocol(Protocol protocol, const SensorConfig& config,
                              int seeds);

void write_report_json(const EvalReport& report, const std::string& path);

}  // namespace satac
