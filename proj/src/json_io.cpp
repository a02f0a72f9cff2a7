#include "satac/json_io.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "satac/error.hpp"

namespace satac {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw Error(ErrorKind::invalid_argument, path + ": malformed JSON");
  }
  return j;
}

void write_file(const json& j, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

void require_object(const json& j, const std::string& what) {
  if (!j.is_object()) {
    throw Error(ErrorKind::invalid_argument, what + ": expected a JSON object");
  }
}

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& what) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) {
      throw Error(ErrorKind::invalid_argument,
                  what + ": unknown key \"" + it.key() + "\"");
    }
  }
}

double get_number(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) {
    throw Error(ErrorKind::invalid_argument, key + ": expected a number");
  }
  return j[key].get<double>();
}

int get_int(const json& j, const std::string& key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) {
    throw Error(ErrorKind::invalid_argument, key + ": expected an integer");
  }
  return j[key].get<int>();
}

Vec2 get_vec2(const json& j, const std::string& key, Vec2 fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j[key];
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw Error(ErrorKind::invalid_argument,
                key + ": expected a number pair [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

json vec2_json(const Vec2& v) { return json::array({v.x, v.y}); }

ContactPrimitive contact_from_json(const json& j) {
  require_object(j, "contact");
  reject_unknown_keys(j,
                      {"center_mm", "shape", "size_mm", "temperature_C",
                       "normal_force_N", "shear_force_N", "edge_blur_mm"},
                      "contact");
  ContactPrimitive c;
  c.center_mm = get_vec2(j, "center_mm", c.center_mm);
  if (j.contains("shape")) {
    std::string s = j["shape"].get<std::string>();
    if (s == "disk") {
      c.shape = FootprintShape::disk;
    } else if (s == "square") {
      c.shape = FootprintShape::square;
    } else {
      throw Error(ErrorKind::invalid_argument,
                  "contact shape must be \"disk\" or \"square\", got \"" + s +
                      "\"");
    }
  }
  c.size_mm = get_number(j, "size_mm", c.size_mm);
  c.temperature_C = get_number(j, "temperature_C", c.temperature_C);
  c.normal_force_N = get_number(j, "normal_force_N", c.normal_force_N);
  c.shear_force_N = get_vec2(j, "shear_force_N", c.shear_force_N);
  c.edge_blur_mm = get_number(j, "edge_blur_mm", c.edge_blur_mm);
  return c;
}

json contact_to_json(const ContactPrimitive& c) {
  json j;
  j["center_mm"] = vec2_json(c.center_mm);
  j["shape"] = c.shape == FootprintShape::disk ? "disk" : "square";
  j["size_mm"] = c.size_mm;
  j["temperature_C"] = c.temperature_C;
  j["normal_force_N"] = c.normal_force_N;
  j["shear_force_N"] = vec2_json(c.shear_force_N);
  j["edge_blur_mm"] = c.edge_blur_mm;
  return j;
}

ContactScenario scenario_from(const json& j) {
  require_object(j, "scenario");
  reject_unknown_keys(j, {"contacts", "pixel_noise_sigma", "rng_seed"},
                      "scenario");
  ContactScenario s;
  if (j.contains("contacts")) {
    if (!j["contacts"].is_array()) {
      throw Error(ErrorKind::invalid_argument, "contacts: expected an array");
    }
    for (const json& cj : j["contacts"]) s.contacts.push_back(contact_from_json(cj));
  }
  s.pixel_noise_sigma = get_number(j, "pixel_noise_sigma", 0.0);
  if (j.contains("rng_seed")) {
    if (!j["rng_seed"].is_number_unsigned() && !j["rng_seed"].is_number_integer()) {
      throw Error(ErrorKind::invalid_argument, "rng_seed: expected an integer");
    }
    s.rng_seed = j["rng_seed"].get<std::uint64_t>();
  }
  return s;
}

json scenario_to(const ContactScenario& s) {
  json j;
  j["contacts"] = json::array();
  for (const ContactPrimitive& c : s.contacts) j["contacts"].push_back(contact_to_json(c));
  j["pixel_noise_sigma"] = s.pixel_noise_sigma;
  j["rng_seed"] = s.rng_seed;
  return j;
}

ScenarioDocument document_from(const json& j, const SensorConfig& config) {
  ScenarioDocument doc;
  if (j.is_object() && j.contains("frames")) {
    reject_unknown_keys(j, {"frames"}, "scenario file");
    if (!j["frames"].is_array() || j["frames"].empty()) {
      throw Error(ErrorKind::invalid_argument,
                  "frames: expected a non-empty array of scenarios");
    }
    doc.explicit_sequence = true;
    for (const json& fj : j["frames"]) doc.frames.push_back(scenario_from(fj));
  } else {
    doc.frames.push_back(scenario_from(j));
  }
  for (const ContactScenario& s : doc.frames) s.validate(config);
  return doc;
}

}  // namespace

SensorConfig load_sensor_config(const std::string& path) {
  json j = parse_file(path);
  require_object(j, "sensor config");
  reject_unknown_keys(j,
                      {"frame_width_px", "frame_height_px", "sensing_field_mm",
                       "px_per_mm", "marker_cols", "marker_rows",
                       "marker_pitch_mm", "marker_diameter_mm", "frame_rate_hz",
                       "base_brightness"},
                      "sensor config");
  SensorConfig c;
  c.frame_width_px = get_int(j, "frame_width_px", c.frame_width_px);
  c.frame_height_px = get_int(j, "frame_height_px", c.frame_height_px);
  c.sensing_field_mm = get_vec2(j, "sensing_field_mm", c.sensing_field_mm);
  c.px_per_mm = get_number(j, "px_per_mm", c.px_per_mm);
  c.marker_cols = get_int(j, "marker_cols", c.marker_cols);
  c.marker_rows = get_int(j, "marker_rows", c.marker_rows);
  c.marker_pitch_mm = get_number(j, "marker_pitch_mm", c.marker_pitch_mm);
  c.marker_diameter_mm = get_number(j, "marker_diameter_mm", c.marker_diameter_mm);
  c.frame_rate_hz = get_number(j, "frame_rate_hz", c.frame_rate_hz);
  c.base_brightness = get_number(j, "base_brightness", c.base_brightness);
  c.validate();
  return c;
}

void save_sensor_config(const SensorConfig& config, const std::string& path) {
  config.validate();
  json j;
  j["frame_width_px"] = config.frame_width_px;
  j["frame_height_px"] = config.frame_height_px;
  j["sensing_field_mm"] = vec2_json(config.sensing_field_mm);
  j["px_per_mm"] = config.px_per_mm;
  j["marker_cols"] = config.marker_cols;
  j["marker_rows"] = config.marker_rows;
  j["marker_pitch_mm"] = config.marker_pitch_mm;
  j["marker_diameter_mm"] = config.marker_diameter_mm;
  j["frame_rate_hz"] = config.frame_rate_hz;
  j["base_brightness"] = config.base_brightness;
  write_file(j, path);
}

TruthCurve load_truth_curve(const std::string& path) {
  json j = parse_file(path);
  require_object(j, "truth curve");
  reject_unknown_keys(j,
                      {"base", "rise_start_C", "peak_C", "peak_brightness",
                       "fall_slope", "fall_end_C"},
                      "truth curve");
  TruthCurve c;
  c.base = get_number(j, "base", c.base);
  c.rise_start_C = get_number(j, "rise_start_C", c.rise_start_C);
  c.peak_C = get_number(j, "peak_C", c.peak_C);
  c.peak_brightness = get_number(j, "peak_brightness", c.peak_brightness);
  c.fall_slope = get_number(j, "fall_slope", c.fall_slope);
  c.fall_end_C = get_number(j, "fall_end_C", c.fall_end_C);
  c.validate();
  return c;
}

void save_truth_curve(const TruthCurve& curve, const std::string& path) {
  curve.validate();
  json j;
  j["base"] = curve.base;
  j["rise_start_C"] = curve.rise_start_C;
  j["peak_C"] = curve.peak_C;
  j["peak_brightness"] = curve.peak_brightness;
  j["fall_slope"] = curve.fall_slope;
  j["fall_end_C"] = curve.fall_end_C;
  write_file(j, path);
}

ScenarioDocument load_scenario(const std::string& path,
                               const SensorConfig& config) {
  return document_from(parse_file(path), config);
}

void save_scenario(const ScenarioDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
  out << scenario_to_json(doc);
}

std::string scenario_to_json(const ScenarioDocument& doc) {
  json j;
  if (doc.explicit_sequence) {
    j["frames"] = json::array();
    for (const ContactScenario& s : doc.frames) j["frames"].push_back(scenario_to(s));
  } else {
    if (doc.frames.empty()) {
      throw Error(ErrorKind::invalid_argument, "scenario document is empty");
    }
    j = scenario_to(doc.frames.front());
  }
  return j.dump(2) + "\n";
}

ScenarioDocument scenario_from_json(const std::string& text,
                                    const SensorConfig& config) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw Error(ErrorKind::invalid_argument, "malformed scenario JSON");
  }
  return document_from(j, config);
}

CalibrationModel load_calibration(const std::string& path) {
  json j = parse_file(path);
  require_object(j, "calibration");
  reject_unknown_keys(
      j, {"schema", "temp_curve", "pressure_gain", "shear_gain", "metadata"},
      "calibration");
  if (get_int(j, "schema", 1) != 1) {
    throw Error(ErrorKind::invalid_argument,
                path + ": unsupported calibration schema");
  }
  CalibrationModel m;
  if (j.contains("temp_curve")) {
    if (!j["temp_curve"].is_array()) {
      throw Error(ErrorKind::invalid_argument, "temp_curve: expected an array");
    }
    for (const json& kj : j["temp_curve"]) {
      if (!kj.is_array() || kj.size() != 2) {
        throw Error(ErrorKind::invalid_argument,
                    "temp_curve: knots are [temp_C, brightness] pairs");
      }
      m.temp_curve.push_back({kj[0].get<double>(), kj[1].get<double>()});
    }
  }
  auto read_gain = [&](const char* key, LinearGain& gain) {
    if (!j.contains(key)) return;
    const json& g = j[key];
    require_object(g, key);
    reject_unknown_keys(g, {"slope", "intercept", "r2"}, key);
    gain.slope = get_number(g, "slope", 0.0);
    gain.intercept = get_number(g, "intercept", 0.0);
    gain.r2 = get_number(g, "r2", 0.0);
    gain.fitted = true;
  };
  read_gain("pressure_gain", m.pressure_gain);
  read_gain("shear_gain", m.shear_gain);
  if (j.contains("metadata")) {
    const json& meta = j["metadata"];
    require_object(meta, "metadata");
    if (meta.contains("source")) m.source = meta["source"].get<std::string>();
    if (meta.contains("sample_counts")) {
      for (auto it = meta["sample_counts"].begin();
           it != meta["sample_counts"].end(); ++it) {
        m.sample_counts[it.key()] = it.value().get<int>();
      }
    }
  }
  m.validate();
  return m;
}

void save_calibration(const CalibrationModel& model, const std::string& path) {
  model.validate();
  json j;
  j["schema"] = 1;
  if (!model.temp_curve.empty()) {
    j["temp_curve"] = json::array();
    for (const TempKnot& k : model.temp_curve) {
      j["temp_curve"].push_back(json::array({k.temp_C, k.brightness}));
    }
  }
  auto write_gain = [&](const char* key, const LinearGain& gain) {
    if (!gain.fitted) return;
    j[key] = {{"slope", gain.slope},
              {"intercept", gain.intercept},
              {"r2", gain.r2}};
  };
  write_gain("pressure_gain", model.pressure_gain);
  write_gain("shear_gain", model.shear_gain);
  json meta;
  if (!model.source.empty()) meta["source"] = model.source;
  if (!model.sample_counts.empty()) {
    json counts;
    for (const auto& [k, v] : model.sample_counts) counts[k] = v;
    meta["sample_counts"] = counts;
  }
  if (!meta.is_null()) j["metadata"] = meta;
  write_file(j, path);
}

}  // namespace satac
