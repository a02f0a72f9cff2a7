#include "satac/sensor_config.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "satac/error.hpp"

namespace satac {

double SensorConfig::nominal_marker_area_px2() const {
  double r = marker_radius_px();
  return std::numbers::pi * r * r;
}

Rect SensorConfig::field_rect_px() const {
  double fw = sensing_field_mm.x * px_per_mm;
  double fh = sensing_field_mm.y * px_per_mm;
  double x0 = 0.5 * (frame_width_px - fw);
  double y0 = 0.5 * (frame_height_px - fh);
  return {x0, y0, x0 + fw, y0 + fh};
}

Vec2 SensorConfig::field_mm_to_px(const Vec2& p_mm) const {
  Rect field = field_rect_px();
  Vec2 c = field.center();
  return {c.x + p_mm.x * px_per_mm, c.y + p_mm.y * px_per_mm};
}

Vec2 SensorConfig::px_to_field_mm(const Vec2& p_px) const {
  Rect field = field_rect_px();
  Vec2 c = field.center();
  return {(p_px.x - c.x) / px_per_mm, (p_px.y - c.y) / px_per_mm};
}

std::vector<Vec2> SensorConfig::rest_grid_mm() const {
  std::vector<Vec2> grid;
  grid.reserve(static_cast<size_t>(marker_cols) * marker_rows);
  double ox = -0.5 * (marker_cols - 1) * marker_pitch_mm;
  double oy = -0.5 * (marker_rows - 1) * marker_pitch_mm;
  for (int row = 0; row < marker_rows; ++row) {
    for (int col = 0; col < marker_cols; ++col) {
      grid.push_back({ox + col * marker_pitch_mm, oy + row * marker_pitch_mm});
    }
  }
  return grid;
}

void SensorConfig::validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorKind::invalid_argument, "sensor config: " + msg);
  };
  if (frame_width_px <= 0 || frame_height_px <= 0) fail("frame dimensions must be positive");
  if (sensing_field_mm.x <= 0.0 || sensing_field_mm.y <= 0.0) fail("sensing field must be positive");
  if (px_per_mm <= 0.0) fail("px_per_mm must be positive");
  if (marker_cols <= 0 || marker_rows <= 0) fail("marker grid counts must be positive");
  if (marker_pitch_mm <= 0.0) fail("marker pitch must be positive");
  if (marker_diameter_mm <= 0.0) fail("marker diameter must be positive");
  if (frame_rate_hz <= 0.0) fail("frame rate must be positive");
  if (!(base_brightness >= 0.0 && base_brightness <= 1.0)) fail("base_brightness outside [0,1]");

  if (sensing_field_mm.x * px_per_mm > frame_width_px ||
      sensing_field_mm.y * px_per_mm > frame_height_px) {
    fail("sensing field does not fit inside the frame");
  }
  if ((marker_cols - 1) * marker_pitch_mm > sensing_field_mm.x ||
      (marker_rows - 1) * marker_pitch_mm > sensing_field_mm.y) {
    fail("marker grid extent exceeds the sensing field");
  }
}

}  // namespace satac
