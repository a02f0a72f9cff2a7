#include "satac/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "satac/error.hpp"

namespace satac {

namespace {

// Standard normal CDF.
double phi(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Gaussian-smoothed footprint indicator at field position p (mm).
double footprint_mask(const ContactPrimitive& c, const Vec2& p_mm) {
  double blur = c.edge_blur_mm;
  if (c.shape == FootprintShape::disk) {
    double r = (p_mm - c.center_mm).norm();
    if (blur <= 0.0) return r <= c.size_mm ? 1.0 : 0.0;
    return phi((c.size_mm - r) / blur);
  }
  double hx = p_mm.x - c.center_mm.x;
  double hy = p_mm.y - c.center_mm.y;
  double half = 0.5 * c.size_mm;
  if (blur <= 0.0) {
    return (std::abs(hx) <= half && std::abs(hy) <= half) ? 1.0 : 0.0;
  }
  double mx = phi((half - hx) / blur) - phi((-half - hx) / blur);
  double my = phi((half - hy) / blur) - phi((-half - hy) / blur);
  return mx * my;
}

// Bounding half-extent of a contact's visible influence, mm.
double influence_extent_mm(const ContactPrimitive& c) {
  return c.half_extent_mm() + 6.0 * c.edge_blur_mm;
}

// Deterministic Gaussian sampler (Box-Muller over mt19937_64), so frames are
// reproducible for a given seed independent of the standard library.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  double uniform01() {
    // In (0, 1]; never returns 0 so the log above stays finite.
    return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53;
  }

  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

struct PixelBox {
  int x0, y0, x1, y1;  // half-open
  bool empty() const { return x0 >= x1 || y0 >= y1; }
};

PixelBox clip_box(const SensorConfig& config, const Vec2& center_px,
                  double half_extent_px) {
  PixelBox b;
  b.x0 = std::max(0, static_cast<int>(std::floor(center_px.x - half_extent_px)));
  b.y0 = std::max(0, static_cast<int>(std::floor(center_px.y - half_extent_px)));
  b.x1 = std::min(config.frame_width_px,
                  static_cast<int>(std::ceil(center_px.x + half_extent_px)) + 1);
  b.y1 = std::min(config.frame_height_px,
                  static_cast<int>(std::ceil(center_px.y + half_extent_px)) + 1);
  return b;
}

void render_background(const ContactScenario& scenario,
                       const SensorConfig& config, const TruthCurve& curve,
                       GrayFrame& frame) {
  if (scenario.contacts.empty()) return;

  struct ContactInfo {
    const ContactPrimitive* contact;
    PixelBox box;
    double brightness;
  };
  std::vector<ContactInfo> infos;
  PixelBox all{config.frame_width_px, config.frame_height_px, 0, 0};
  for (const ContactPrimitive& c : scenario.contacts) {
    Vec2 center_px = config.field_mm_to_px(c.center_mm);
    PixelBox box =
        clip_box(config, center_px, influence_extent_mm(c) * config.px_per_mm);
    infos.push_back({&c, box, brightness_of(c.temperature_C, curve)});
    all.x0 = std::min(all.x0, box.x0);
    all.y0 = std::min(all.y0, box.y0);
    all.x1 = std::max(all.x1, box.x1);
    all.y1 = std::max(all.y1, box.y1);
  }
  if (all.empty()) return;

  double base = config.base_brightness;
  for (int y = all.y0; y < all.y1; ++y) {
    for (int x = all.x0; x < all.x1; ++x) {
      Vec2 p_mm = config.px_to_field_mm({x + 0.5, y + 0.5});
      double value = base;
      bool first = true;
      for (const ContactInfo& info : infos) {
        double blend = base;
        if (x >= info.box.x0 && x < info.box.x1 && y >= info.box.y0 &&
            y < info.box.y1) {
          blend = base + footprint_mask(*info.contact, p_mm) *
                             (info.brightness - base);
        }
        value = first ? blend : std::max(value, blend);
        first = false;
      }
      frame.at(x, y) = value;
    }
  }
}

void render_markers(const std::vector<Vec2>& centers_mm,
                    const SensorConfig& config, int supersample,
                    GrayFrame& frame) {
  double radius_px = config.marker_radius_px();
  double r2 = radius_px * radius_px;
  int s = std::max(1, supersample);
  double inv_s = 1.0 / s;
  double inv_samples = 1.0 / (s * s);

  for (const Vec2& center_mm : centers_mm) {
    Vec2 c = config.field_mm_to_px(center_mm);
    PixelBox box = clip_box(config, c, radius_px + 1.0);
    for (int y = box.y0; y < box.y1; ++y) {
      for (int x = box.x0; x < box.x1; ++x) {
        int inside = 0;
        for (int sy = 0; sy < s; ++sy) {
          double py = y + (sy + 0.5) * inv_s - c.y;
          for (int sx = 0; sx < s; ++sx) {
            double px = x + (sx + 0.5) * inv_s - c.x;
            if (px * px + py * py <= r2) ++inside;
          }
        }
        if (inside > 0) {
          frame.at(x, y) *= 1.0 - inside * inv_samples;
        }
      }
    }
  }
}

}  // namespace

std::vector<Vec2> deform_grid(const ContactScenario& scenario,
                              const SensorConfig& config,
                              const DeformationGains& gains) {
  const std::vector<Vec2> rest_grid = config.rest_grid_mm();
  std::vector<Vec2> centers = rest_grid;
  for (const ContactPrimitive& c : scenario.contacts) {
    double sigma = c.footprint_sigma_mm();
    double shear_mag = c.shear_force_N.norm();
    Vec2 shear_dir{0.0, 0.0};
    if (shear_mag > 0.0) shear_dir = c.shear_force_N * (1.0 / shear_mag);

    for (size_t i = 0; i < centers.size(); ++i) {
      // Displace from the rest position so contacts superpose linearly.
      Vec2 rest = rest_grid[i];
      Vec2 offset = rest - c.center_mm;
      double d = offset.norm();
      double envelope = std::exp(-d * d / (2.0 * sigma * sigma));
      if (c.normal_force_N > 0.0 && d > 0.0) {
        double radial = gains.k_normal_mm_per_N * c.normal_force_N *
                        (d / sigma) * envelope;
        centers[i] += offset * (radial / d);
      }
      if (shear_mag > 0.0) {
        centers[i] += shear_dir * (gains.k_shear_mm_per_N * shear_mag * envelope);
      }
    }
  }
  return centers;
}

GrayFrame render_frame(const ContactScenario& scenario,
                       const SensorConfig& config, const TruthCurve& curve,
                       const RenderOptions& options) {
  return render_frame_at(deform_grid(scenario, config, options.gains), scenario,
                         config, curve, options);
}

GrayFrame render_frame_at(const std::vector<Vec2>& marker_centers_mm,
                          const ContactScenario& scenario,
                          const SensorConfig& config, const TruthCurve& curve,
                          const RenderOptions& options) {
  config.validate();
  curve.validate();
  scenario.validate(config);

  GrayFrame frame = GrayFrame::filled(config.frame_width_px,
                                      config.frame_height_px,
                                      config.base_brightness);
  render_background(scenario, config, curve, frame);
  if (options.draw_markers) {
    render_markers(marker_centers_mm, config, options.supersample, frame);
  }
  if (scenario.pixel_noise_sigma > 0.0) {
    GaussianSampler noise(scenario.rng_seed);
    for (double& v : frame.pixels) {
      v = std::clamp(v + scenario.pixel_noise_sigma * noise.next(), 0.0, 1.0);
    }
  }
  return frame;
}

double background_intensity_at(const Vec2& p_mm,
                               const ContactScenario& scenario,
                               const SensorConfig& config,
                               const TruthCurve& curve) {
  double base = config.base_brightness;
  if (scenario.contacts.empty()) return base;
  double value = 0.0;
  bool first = true;
  for (const ContactPrimitive& c : scenario.contacts) {
    double blend = base + footprint_mask(c, p_mm) *
                             (brightness_of(c.temperature_C, curve) - base);
    value = first ? blend : std::max(value, blend);
    first = false;
  }
  return value;
}

}  // namespace satac
