#include "satac/scenario.hpp"

#include <cmath>
#include <string>

#include "satac/error.hpp"
#include "satac/truth_curve.hpp"

namespace satac {

void ContactScenario::validate(const SensorConfig& config) const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorKind::invalid_argument, "scenario: " + msg);
  };
  if (pixel_noise_sigma < 0.0) fail("pixel_noise_sigma must be >= 0");

  double half_w = 0.5 * config.sensing_field_mm.x;
  double half_h = 0.5 * config.sensing_field_mm.y;
  for (size_t i = 0; i < contacts.size(); ++i) {
    const ContactPrimitive& c = contacts[i];
    std::string tag = "contact " + std::to_string(i);
    if (c.size_mm <= 0.0) fail(tag + ": footprint dimension must be > 0");
    if (c.normal_force_N < 0.0) fail(tag + ": normal force must be >= 0");
    if (c.edge_blur_mm < 0.0) fail(tag + ": edge blur must be >= 0");
    if (c.temperature_C < TruthCurve::kMinValidC ||
        c.temperature_C > TruthCurve::kMaxValidC) {
      fail(tag + ": temperature outside model validity [20, 250] C");
    }
    double ext = c.half_extent_mm();
    if (std::abs(c.center_mm.x) + ext > half_w ||
        std::abs(c.center_mm.y) + ext > half_h) {
      fail(tag + ": footprint extends outside the sensing field");
    }
  }
}

ContactScenario ScenarioDocument::frame(std::size_t index) const {
  if (frames.empty()) {
    throw Error(ErrorKind::invalid_argument, "scenario document has no frames");
  }
  if (explicit_sequence) {
    return frames[index < frames.size() ? index : frames.size() - 1];
  }
  ContactScenario s = frames.front();
  s.rng_seed += index;
  return s;
}

}  // namespace satac
