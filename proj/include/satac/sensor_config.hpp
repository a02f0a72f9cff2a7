#pragma once

#include <vector>

#include "satac/geometry.hpp"

namespace satac {

// Geometry and camera constants of the sensor. Defaults describe the
// reference device: 640x480 @ 60 FPS camera over a 40x40 mm sensing field
// with a 40x40 grid of 0.25 mm markers at 1 mm pitch.
struct SensorConfig {
  int frame_width_px = 640;
  int frame_height_px = 480;
  Vec2 sensing_field_mm{40.0, 40.0};
  double px_per_mm = 10.0;
  int marker_cols = 40;
  int marker_rows = 40;
  double marker_pitch_mm = 1.0;
  double marker_diameter_mm = 0.25;
  double frame_rate_hz = 60.0;
  double base_brightness = 0.2;

  int marker_count() const { return marker_cols * marker_rows; }
  double pitch_px() const { return marker_pitch_mm * px_per_mm; }
  double marker_radius_px() const { return 0.5 * marker_diameter_mm * px_per_mm; }
  double nominal_marker_area_px2() const;

  // Sensing field rectangle in pixel coordinates, centered in the frame.
  Rect field_rect_px() const;

  // Field coordinates are mm with origin at the center of the sensing field,
  // x right, y down (image convention).
  Vec2 field_mm_to_px(const Vec2& p_mm) const;
  Vec2 px_to_field_mm(const Vec2& p_px) const;

  // Rest positions of the marker grid in field coordinates, row-major.
  std::vector<Vec2> rest_grid_mm() const;

  // Throws Error(invalid_argument) when any invariant is broken.
  void validate() const;
};

}  // namespace satac
