#pragma once

#include <map>
#include <string>
#include <vector>

#include "satac/calibration.hpp"
#include "satac/image.hpp"
#include "satac/image_io.hpp"
#include "satac/marker_detect.hpp"
#include "satac/voronoi.hpp"

namespace satac {

struct PressureSample {
  int marker_id = 0;
  Vec2 seed_px{0.0, 0.0};
  double rate = 0.0;
  double pressure = 0.0;  // gain * max(rate, 0)
};

struct PressureField {
  std::vector<PressureSample> samples;  // sorted by marker_id
  ScalarField render;                   // gray levels 0..255, unit = pressure
  double gain = 1.0;
  double total_rate = 0.0;      // sum of positive rates (aggregate readout)
  double max_pressure = 0.0;
};

struct ShearSample {
  int marker_id = 0;
  Vec2 seed_px{0.0, 0.0};       // reference position (quiver base)
  Vec2 shear{0.0, 0.0};         // N calibrated, px in raw mode
};

struct ShearField {
  std::vector<ShearSample> samples;  // sorted by marker_id
  double gain = 1.0;
  double total_displacement_px = 0.0;
  double aggregate = 0.0;  // gain * total displacement, scalar force readout
};

// Decode gain is the reciprocal of a fitted response-per-stimulus slope.
// Throws when the gain is unfitted or its slope is not positive.
double decode_gain(const LinearGain& gain);

// Per-marker pressure from area change rates; cells painted flat into a
// canvas normalized to the frame's own maximum (zero field renders black).
PressureField decode_pressure(const std::map<int, double>& rates,
                              const Tessellation& tess, double gain,
                              int canvas_width, int canvas_height);

ShearField decode_shear(const DisplacementField& disp, double gain);

// Rows: id,x_px,y_px,area
void write_markers_csv(const MarkerSet& markers, const std::string& path);
// Rows: id,ref_x,ref_y,cur_x,cur_y,dx,dy
void write_displacement_csv(const DisplacementField& disp,
                            const std::string& path);
// Rows: id,x_px,y_px,value
void write_pressure_csv(const PressureField& field, const std::string& path);
// Rows: id,x_px,y_px,fx,fy
void write_shear_csv(const ShearField& field, const std::string& path);

// Shear vectors drawn as line segments scaled by `scale` (default x10) on a
// black canvas.
RgbImage shear_quiver(const ShearField& field, int width, int height,
                      double scale = 10.0);

}  // namespace satac
