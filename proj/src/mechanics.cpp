#include "satac/mechanics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "satac/error.hpp"

namespace satac {

namespace {

// Paints a convex polygon into the canvas: a pixel belongs to the cell when
// its center lies inside. One span per row since the polygon is convex.
void fill_convex(ScalarField& canvas, const std::vector<Vec2>& poly,
                 double value) {
  if (poly.size() < 3) return;
  double y_min = poly[0].y, y_max = poly[0].y;
  for (const Vec2& v : poly) {
    y_min = std::min(y_min, v.y);
    y_max = std::max(y_max, v.y);
  }
  int row_lo = std::max(0, static_cast<int>(std::floor(y_min - 0.5)));
  int row_hi = std::min(canvas.height - 1,
                        static_cast<int>(std::ceil(y_max - 0.5)));
  const size_t n = poly.size();
  for (int row = row_lo; row <= row_hi; ++row) {
    double yc = row + 0.5;
    double x_enter = 0.0, x_exit = 0.0;
    bool found = false;
    for (size_t i = 0; i < n; ++i) {
      const Vec2& a = poly[i];
      const Vec2& b = poly[(i + 1) % n];
      if ((a.y <= yc && b.y > yc) || (b.y <= yc && a.y > yc)) {
        double t = (yc - a.y) / (b.y - a.y);
        double x = a.x + t * (b.x - a.x);
        if (!found) {
          x_enter = x_exit = x;
          found = true;
        } else {
          x_enter = std::min(x_enter, x);
          x_exit = std::max(x_exit, x);
        }
      }
    }
    if (!found) continue;
    int col_lo = std::max(0, static_cast<int>(std::ceil(x_enter - 0.5)));
    int col_hi = std::min(canvas.width - 1,
                          static_cast<int>(std::floor(x_exit - 0.5)));
    for (int col = col_lo; col <= col_hi; ++col) canvas.at(col, row) = value;
  }
}

void draw_segment(RgbImage& img, Vec2 a, Vec2 b, uint8_t r, uint8_t g,
                  uint8_t bch) {
  double len = std::max(std::abs(b.x - a.x), std::abs(b.y - a.y));
  int steps = std::max(1, static_cast<int>(std::ceil(len)));
  for (int i = 0; i <= steps; ++i) {
    double t = static_cast<double>(i) / steps;
    int x = static_cast<int>(std::lround(a.x + t * (b.x - a.x)));
    int y = static_cast<int>(std::lround(a.y + t * (b.y - a.y)));
    if (x >= 0 && x < img.width && y >= 0 && y < img.height) {
      img.set(x, y, r, g, bch);
    }
  }
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
  return out;
}

}  // namespace

double decode_gain(const LinearGain& gain) {
  if (!gain.fitted) {
    throw Error(ErrorKind::bad_state, "decode gain requested but not fitted");
  }
  if (!(gain.slope > 0.0)) {
    throw Error(ErrorKind::bad_state, "fitted gain slope must be positive");
  }
  return 1.0 / gain.slope;
}

PressureField decode_pressure(const std::map<int, double>& rates,
                              const Tessellation& tess, double gain,
                              int canvas_width, int canvas_height) {
  if (canvas_width <= 0 || canvas_height <= 0) {
    throw Error(ErrorKind::invalid_argument,
                "decode_pressure: canvas dims must be positive");
  }
  PressureField field;
  field.gain = gain;
  field.samples.reserve(rates.size());
  for (const auto& [id, rate] : rates) {
    const VoronoiCell* cell = tess.find(id);
    if (!cell) {
      throw Error(ErrorKind::invalid_argument,
                  "decode_pressure: id " + std::to_string(id) +
                      " has no tessellation cell");
    }
    PressureSample s;
    s.marker_id = id;
    s.seed_px = cell->seed_px;
    s.rate = rate;
    s.pressure = gain * std::max(rate, 0.0);
    field.total_rate += std::max(rate, 0.0);
    field.max_pressure = std::max(field.max_pressure, s.pressure);
    field.samples.push_back(s);
  }

  field.render = ScalarField::filled(canvas_width, canvas_height, 0.0,
                                     FieldUnit::pressure);
  if (field.max_pressure > 0.0) {
    for (const PressureSample& s : field.samples) {
      double gray = std::round(255.0 * s.pressure / field.max_pressure);
      if (gray <= 0.0) continue;
      fill_convex(field.render, tess.find(s.marker_id)->polygon, gray);
    }
  }
  return field;
}

ShearField decode_shear(const DisplacementField& disp, double gain) {
  ShearField field;
  field.gain = gain;
  field.samples.reserve(disp.matches.size());
  for (const MatchedPair& m : disp.matches) {
    ShearSample s;
    s.marker_id = m.marker_id;
    s.seed_px = m.ref_px;
    s.shear = m.displacement_px * gain;
    field.total_displacement_px += m.displacement_px.norm();
    field.samples.push_back(s);
  }
  std::sort(field.samples.begin(), field.samples.end(),
            [](const ShearSample& a, const ShearSample& b) {
              return a.marker_id < b.marker_id;
            });
  field.aggregate = gain * field.total_displacement_px;
  return field;
}

void write_markers_csv(const MarkerSet& markers, const std::string& path) {
  std::ofstream out = open_csv(path);
  out << "id,x_px,y_px,area\n";
  char buf[96];
  for (const Marker& m : markers.markers) {
    std::snprintf(buf, sizeof(buf), "%d,%.4f,%.4f,%d\n", m.id, m.centroid_px.x,
                  m.centroid_px.y, m.pixel_area);
    out << buf;
  }
}

void write_displacement_csv(const DisplacementField& disp,
                            const std::string& path) {
  std::ofstream out = open_csv(path);
  out << "id,ref_x,ref_y,cur_x,cur_y,dx,dy\n";
  char buf[160];
  for (const MatchedPair& m : disp.matches) {
    std::snprintf(buf, sizeof(buf), "%d,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f\n",
                  m.marker_id, m.ref_px.x, m.ref_px.y, m.cur_px.x, m.cur_px.y,
                  m.displacement_px.x, m.displacement_px.y);
    out << buf;
  }
}

void write_pressure_csv(const PressureField& field, const std::string& path) {
  std::ofstream out = open_csv(path);
  out << "id,x_px,y_px,value\n";
  char buf[128];
  for (const PressureSample& s : field.samples) {
    std::snprintf(buf, sizeof(buf), "%d,%.4f,%.4f,%.6g\n", s.marker_id,
                  s.seed_px.x, s.seed_px.y, s.pressure);
    out << buf;
  }
}

void write_shear_csv(const ShearField& field, const std::string& path) {
  std::ofstream out = open_csv(path);
  out << "id,x_px,y_px,fx,fy\n";
  char buf[128];
  for (const ShearSample& s : field.samples) {
    std::snprintf(buf, sizeof(buf), "%d,%.4f,%.4f,%.6g,%.6g\n", s.marker_id,
                  s.seed_px.x, s.seed_px.y, s.shear.x, s.shear.y);
    out << buf;
  }
}

RgbImage shear_quiver(const ShearField& field, int width, int height,
                      double scale) {
  RgbImage img = RgbImage::filled(width, height, 0, 0, 0);
  for (const ShearSample& s : field.samples) {
    Vec2 tip{s.seed_px.x + scale * s.shear.x, s.seed_px.y + scale * s.shear.y};
    draw_segment(img, s.seed_px, tip, 0, 255, 0);
    int bx = static_cast<int>(std::lround(s.seed_px.x));
    int by = static_cast<int>(std::lround(s.seed_px.y));
    if (bx >= 0 && bx < width && by >= 0 && by < height) {
      img.set(bx, by, 255, 255, 255);
    }
  }
  return img;
}

}  // namespace satac
