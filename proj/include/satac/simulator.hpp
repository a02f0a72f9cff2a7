#pragma once

#include <vector>

#include "satac/image.hpp"
#include "satac/scenario.hpp"
#include "satac/sensor_config.hpp"
#include "satac/truth_curve.hpp"

namespace satac {

// Linear coupling between applied forces and marker motion.
struct DeformationGains {
  double k_normal_mm_per_N = 0.05;
  double k_shear_mm_per_N = 0.4;
};

struct RenderOptions {
  int supersample = 4;       // subsamples per pixel axis for marker coverage
  bool draw_markers = true;  // disabled for marker-free ground-truth renders
  DeformationGains gains;
};

// Marker centers displaced by the scenario's contacts, field-centered mm,
// row-major over the rest grid. A contact at center c moves a marker at
// in-plane distance d radially by k_n*F_n*(d/sigma)*exp(-d^2/(2 sigma^2))
// and along the shear direction by k_s*|F_s|*exp(-d^2/(2 sigma^2));
// contributions sum over contacts.
std::vector<Vec2> deform_grid(const ContactScenario& scenario,
                              const SensorConfig& config,
                              const DeformationGains& gains = {});

// Renders the raw sensor frame: luminescent background from the contact
// footprints, opaque markers at the deformed grid positions, optional
// additive Gaussian pixel noise. Deterministic for a fixed seed.
GrayFrame render_frame(const ContactScenario& scenario,
                       const SensorConfig& config,
                       const TruthCurve& curve = {},
                       const RenderOptions& options = {});

// Same, but with explicit marker centers (field-centered mm) instead of the
// deformed grid. Used by tests that need markers at arbitrary positions.
GrayFrame render_frame_at(const std::vector<Vec2>& marker_centers_mm,
                          const ContactScenario& scenario,
                          const SensorConfig& config,
                          const TruthCurve& curve = {},
                          const RenderOptions& options = {});

// Background-only intensity at one field position (no markers, no noise).
double background_intensity_at(const Vec2& p_mm, const ContactScenario& scenario,
                               const SensorConfig& config,
                               const TruthCurve& curve = {});

}  // namespace satac
