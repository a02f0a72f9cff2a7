#ifndef SATAC_H
#define SATAC_H

/* C interface to the tactile decoding library. All functions return a
 * status code; on failure satac_last_error() holds a one-line diagnostic
 * for the calling thread. Objects are opaque and freed with their
 * matching _destroy function (destroy accepts NULL). */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum satac_status {
  SATAC_OK = 0,
  SATAC_ERROR_INVALID_ARGUMENT = 1,
  SATAC_ERROR_IO = 2,
  SATAC_ERROR_BAD_STATE = 3,
  SATAC_ERROR_RUNTIME = 4
} satac_status;

/* Per-pixel temperature flags, matching the CSV flag column. */
typedef enum satac_temp_flag {
  SATAC_TEMP_IN_RANGE = 0,
  SATAC_TEMP_BELOW_RANGE = 1,
  SATAC_TEMP_AMBIGUOUS_ABOVE_PEAK = 2
} satac_temp_flag;

const char* satac_version(void);
const char* satac_last_error(void);

typedef struct satac_config satac_config;
typedef struct satac_scenario satac_scenario;
typedef struct satac_frame satac_frame;
typedef struct satac_calibration satac_calibration;
typedef struct satac_pipeline satac_pipeline;
typedef struct satac_bundle satac_bundle;

/* ---- sensor configuration ---- */
satac_status satac_config_create_default(satac_config** out);
satac_status satac_config_load(const char* path, satac_config** out);
satac_status satac_config_save(const satac_config* config, const char* path);
satac_status satac_config_frame_size(const satac_config* config, int* width,
                                     int* height);
satac_status satac_config_marker_count(const satac_config* config, int* count);
void satac_config_destroy(satac_config* config);

/* ---- contact scenarios ---- */
satac_status satac_scenario_load(const char* path, const satac_config* config,
                                 satac_scenario** out);
satac_status satac_scenario_parse(const char* json_text,
                                  const satac_config* config,
                                  satac_scenario** out);
satac_status satac_scenario_frame_count(const satac_scenario* scenario,
                                        size_t* count);
void satac_scenario_destroy(satac_scenario* scenario);

/* ---- frames ---- */
/* Renders the scenario's frame_index-th frame (single scenarios repeat with
 * the noise seed advanced per index). */
satac_status satac_render_frame(const satac_scenario* scenario,
                                const satac_config* config, size_t frame_index,
                                satac_frame** out);
/* Noise-free render of an empty scene: the rest/reference frame. */
satac_status satac_render_rest_frame(const satac_config* config,
                                     satac_frame** out);
satac_status satac_frame_load(const char* path, satac_frame** out);
satac_status satac_frame_save(const satac_frame* frame, const char* path);
satac_status satac_frame_size(const satac_frame* frame, int* width,
                              int* height);
satac_status satac_frame_pixels(const satac_frame* frame, const double** data,
                                size_t* count);
void satac_frame_destroy(satac_frame* frame);

/* ---- calibration ---- */
satac_status satac_calibration_load(const char* path, satac_calibration** out);
satac_status satac_calibration_save(const satac_calibration* calib,
                                    const char* path);
/* Reads every *.csv under samples_dir (rows kind,stimulus,response,repeat),
 * fits all sample kinds present, writes the model to out_path. */
satac_status satac_calibrate_dir(const char* samples_dir, const char* out_path);
void satac_calibration_destroy(satac_calibration* calib);

/* ---- decode pipeline ---- */
/* calib == NULL selects raw mode: no temperature field, unit mechanics
 * gains. */
satac_status satac_pipeline_create(const satac_config* config,
                                   const satac_calibration* calib,
                                   satac_pipeline** out);
satac_status satac_pipeline_set_reference(satac_pipeline* pipeline,
                                          const satac_frame* rest_frame);
satac_status satac_pipeline_decode(satac_pipeline* pipeline,
                                   const satac_frame* frame, int frame_index,
                                   satac_bundle** out);
void satac_pipeline_destroy(satac_pipeline* pipeline);

/* ---- decoded bundles ---- */
satac_status satac_bundle_write_outputs(const satac_bundle* bundle,
                                        const satac_pipeline* pipeline,
                                        const char* dir);
satac_status satac_bundle_total_ms(const satac_bundle* bundle, double* ms);
satac_status satac_bundle_stage_count(const satac_bundle* bundle,
                                      size_t* count);
satac_status satac_bundle_stage_name(const satac_bundle* bundle, size_t index,
                                     const char** name);
satac_status satac_bundle_stage_ms(const satac_bundle* bundle, size_t index,
                                   double* ms);
satac_status satac_bundle_marker_count(const satac_bundle* bundle,
                                       size_t* count);
satac_status satac_bundle_match_count(const satac_bundle* bundle,
                                      size_t* count);
satac_status satac_bundle_has_temperature(const satac_bundle* bundle,
                                          int* has);
satac_status satac_bundle_temperature_at(const satac_bundle* bundle, int x,
                                         int y, double* temp_c,
                                         satac_temp_flag* flag);
satac_status satac_bundle_pressure_total_rate(const satac_bundle* bundle,
                                              double* total_rate);
satac_status satac_bundle_shear_aggregate(const satac_bundle* bundle,
                                          double* aggregate);
void satac_bundle_destroy(satac_bundle* bundle);

/* Writes timings.json (per-frame stage breakdown plus median total). */
satac_status satac_timings_write(const satac_bundle* const* bundles,
                                 size_t count, const char* path);

/* ---- closed-loop evaluation ----
 * protocol: "temp" | "pressure" | "shear" (long names accepted). Writes a
 * JSON report; *pass (optional) reports whether the protocol met its
 * thresholds. */
satac_status satac_eval_run(const char* protocol, const satac_config* config,
                            int seeds, const char* report_path, int* pass);

#ifdef __cplusplus
}
#endif

#endif /* SATAC_H */
