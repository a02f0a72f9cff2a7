#pragma once

#include <string>

#include "satac/calibration.hpp"
#include "satac/scenario.hpp"
#include "satac/sensor_config.hpp"
#include "satac/truth_curve.hpp"

namespace satac {

// All loaders validate the parsed object before returning and throw
// Error(io) on unreadable files or Error(invalid_argument) on bad content.
// Unknown keys are rejected so that typos in hand-written files fail loudly.

SensorConfig load_sensor_config(const std::string& path);
void save_sensor_config(const SensorConfig& config, const std::string& path);

TruthCurve load_truth_curve(const std::string& path);
void save_truth_curve(const TruthCurve& curve, const std::string& path);

ScenarioDocument load_scenario(const std::string& path,
                               const SensorConfig& config);
void save_scenario(const ScenarioDocument& doc, const std::string& path);

CalibrationModel load_calibration(const std::string& path);
void save_calibration(const CalibrationModel& model, const std::string& path);

std::string scenario_to_json(const ScenarioDocument& doc);
ScenarioDocument scenario_from_json(const std::string& text,
                                    const SensorConfig& config);

}  // namespace satac
