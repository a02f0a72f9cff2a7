#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "satac.h"

namespace fs = std::filesystem;

namespace {

template <typename T>
using Handle = std::unique_ptr<T, void (*)(T*)>;

int fail(satac_status status) {
  std::cerr << "error: " << satac_last_error() << "\n";
  return static_cast<int>(status);
}

Handle<satac_config> load_config_or_default(const std::string& path,
                                            satac_status& status) {
  satac_config* raw = nullptr;
  status = path.empty() ? satac_config_create_default(&raw)
                        : satac_config_load(path.c_str(), &raw);
  return Handle<satac_config>(raw, satac_config_destroy);
}

std::string frame_name(size_t index, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%04zu", index);
  return std::string(buf) + ext;
}

std::vector<std::string> list_frames(const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".pgm") files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  return files;
}

int run_simulate(const std::string& scenario_path, const std::string& config_path,
                 int frames, const std::string& out_dir, bool rest_first,
                 const std::string& format) {
  satac_status st;
  auto config = load_config_or_default(config_path, st);
  if (st != SATAC_OK) return fail(st);

  satac_scenario* scenario_raw = nullptr;
  st = satac_scenario_load(scenario_path.c_str(), config.get(), &scenario_raw);
  if (st != SATAC_OK) return fail(st);
  Handle<satac_scenario> scenario(scenario_raw, satac_scenario_destroy);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create directory " << out_dir << "\n";
    return 1;
  }

  const std::string ext = "." + format;
  size_t out_index = 0;
  if (rest_first) {
    satac_frame* rest = nullptr;
    st = satac_render_rest_frame(config.get(), &rest);
    if (st != SATAC_OK) return fail(st);
    Handle<satac_frame> holder(rest, satac_frame_destroy);
    fs::path path = fs::path(out_dir) / frame_name(out_index++, ext);
    st = satac_frame_save(rest, path.string().c_str());
    if (st != SATAC_OK) return fail(st);
  }
  for (int i = 0; i < frames; ++i) {
    satac_frame* frame = nullptr;
    st = satac_render_frame(scenario.get(), config.get(),
                            static_cast<size_t>(i), &frame);
    if (st != SATAC_OK) return fail(st);
    Handle<satac_frame> holder(frame, satac_frame_destroy);
    fs::path path = fs::path(out_dir) / frame_name(out_index++, ext);
    st = satac_frame_save(frame, path.string().c_str());
    if (st != SATAC_OK) return fail(st);
  }
  std::cout << "wrote " << out_index << " frames to " << out_dir << "\n";
  return 0;
}

int run_decode(const std::string& frames_dir, const std::string& calib_path,
               bool raw, const std::string& ref_path,
               const std::string& config_path, const std::string& out_dir) {
  if (!raw && calib_path.empty()) {
    std::cerr << "error: decode needs --calib (or --raw)\n";
    return 1;
  }
  if (raw && !calib_path.empty()) {
    std::cerr << "error: --raw and --calib are mutually exclusive\n";
    return 1;
  }

  satac_status st;
  auto config = load_config_or_default(config_path, st);
  if (st != SATAC_OK) return fail(st);

  Handle<satac_calibration> calib(nullptr, satac_calibration_destroy);
  if (!raw) {
    satac_calibration* raw_calib = nullptr;
    st = satac_calibration_load(calib_path.c_str(), &raw_calib);
    if (st != SATAC_OK) return fail(st);
    calib.reset(raw_calib);
  }

  std::vector<std::string> files = list_frames(frames_dir);
  if (files.empty()) {
    std::cerr << "error: no .png/.pgm frames in " << frames_dir << "\n";
    return 1;
  }

  satac_pipeline* pipeline_raw = nullptr;
  st = satac_pipeline_create(config.get(), calib.get(), &pipeline_raw);
  if (st != SATAC_OK) return fail(st);
  Handle<satac_pipeline> pipeline(pipeline_raw, satac_pipeline_destroy);

  {
    const std::string& ref_file = ref_path.empty() ? files.front() : ref_path;
    satac_frame* ref = nullptr;
    st = satac_frame_load(ref_file.c_str(), &ref);
    if (st != SATAC_OK) return fail(st);
    Handle<satac_frame> holder(ref, satac_frame_destroy);
    st = satac_pipeline_set_reference(pipeline.get(), ref);
    if (st != SATAC_OK) return fail(st);
  }

  std::vector<Handle<satac_bundle>> bundles;
  for (size_t i = 0; i < files.size(); ++i) {
    satac_frame* frame = nullptr;
    st = satac_frame_load(files[i].c_str(), &frame);
    if (st != SATAC_OK) return fail(st);
    Handle<satac_frame> holder(frame, satac_frame_destroy);

    satac_bundle* bundle = nullptr;
    st = satac_pipeline_decode(pipeline.get(), frame, static_cast<int>(i),
                               &bundle);
    if (st != SATAC_OK) return fail(st);
    bundles.emplace_back(bundle, satac_bundle_destroy);

    st = satac_bundle_write_outputs(bundle, pipeline.get(), out_dir.c_str());
    if (st != SATAC_OK) return fail(st);
  }

  std::vector<const satac_bundle*> raw_bundles;
  raw_bundles.reserve(bundles.size());
  for (const auto& b : bundles) raw_bundles.push_back(b.get());
  fs::path timings = fs::path(out_dir) / "timings.json";
  st = satac_timings_write(raw_bundles.data(), raw_bundles.size(),
                           timings.string().c_str());
  if (st != SATAC_OK) return fail(st);

  std::cout << "decoded " << files.size() << " frames into " << out_dir << "\n";
  return 0;
}

int run_calibrate(const std::string& samples_dir, const std::string& out_path) {
  satac_status st = satac_calibrate_dir(samples_dir.c_str(), out_path.c_str());
  if (st != SATAC_OK) return fail(st);
  std::cout << "wrote calibration to " << out_path << "\n";
  return 0;
}

int run_eval(const std::string& protocol, const std::string& config_path,
             int seeds, const std::string& out_path) {
  satac_status st;
  auto config = load_config_or_default(config_path, st);
  if (st != SATAC_OK) return fail(st);
  int pass = 0;
  st = satac_eval_run(protocol.c_str(), config.get(), seeds, out_path.c_str(),
                      &pass);
  if (st != SATAC_OK) return fail(st);
  std::cout << protocol << ": " << (pass ? "pass" : "fail") << " (report "
            << out_path << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tactile sensing toolkit: simulate, decode, calibrate, eval"};
  app.require_subcommand(1);

  std::string scenario_path, config_path, out_dir, format = "png";
  int frames = 1;
  bool rest_first = false;
  CLI::App* simulate = app.add_subcommand("simulate", "Render synthetic frames");
  simulate->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  simulate->add_option("--config", config_path, "Sensor config JSON");
  simulate->add_option("--frames", frames, "Number of frames")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--out", out_dir, "Output directory")->required();
  simulate->add_flag("--rest-first", rest_first,
                     "Prepend a noise-free rest frame");
  simulate->add_option("--format", format, "Frame format")
      ->check(CLI::IsMember({"png", "pgm"}));

  std::string frames_dir, calib_path, ref_path, decode_out, decode_config;
  bool raw = false;
  CLI::App* decode = app.add_subcommand("decode", "Decode a frame directory");
  decode->add_option("--frames", frames_dir, "Directory of frames")->required();
  decode->add_option("--calib", calib_path, "Calibration JSON");
  decode->add_flag("--raw", raw, "Decode without calibration");
  decode->add_option("--ref", ref_path, "Reference (rest) frame path");
  decode->add_option("--config", decode_config, "Sensor config JSON");
  decode->add_option("--out", decode_out, "Output directory")->required();

  std::string samples_dir, calib_out;
  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Fit calibration from sample CSVs");
  calibrate->add_option("--samples", samples_dir, "Directory of sample CSVs")
      ->required();
  calibrate->add_option("--out", calib_out, "Calibration JSON path")->required();

  std::string protocol, eval_config, report_path;
  int seeds = 1;
  CLI::App* eval = app.add_subcommand("eval", "Closed-loop protocol evaluation");
  eval->add_option("--protocol", protocol, "temp | pressure | shear")
      ->required();
  eval->add_option("--config", eval_config, "Sensor config JSON");
  eval->add_option("--seeds", seeds, "Noise seed repeats")
      ->check(CLI::PositiveNumber);
  eval->add_option("--out", report_path, "Report JSON path")->required();

  CLI11_PARSE(app, argc, argv);

  if (simulate->parsed()) {
    return run_simulate(scenario_path, config_path, frames, out_dir, rest_first,
                        format);
  }
  if (decode->parsed()) {
    return run_decode(frames_dir, calib_path, raw, ref_path, decode_config,
                      decode_out);
  }
  if (calibrate->parsed()) return run_calibrate(samples_dir, calib_out);
  if (eval->parsed()) return run_eval(protocol, eval_config, seeds, report_path);
  return 1;
}
