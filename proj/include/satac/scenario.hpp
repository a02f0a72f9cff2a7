#pragma once

#include <cstdint>
#include <vector>

#include "satac/geometry.hpp"
#include "satac/sensor_config.hpp"

namespace satac {

enum class FootprintShape { disk, square };

// One contact acting on the sensing field. Coordinates are field-centered mm.
struct ContactPrimitive {
  Vec2 center_mm{0.0, 0.0};
  FootprintShape shape = FootprintShape::disk;
  double size_mm = 5.0;  // radius for disks, side length for squares
  double temperature_C = 20.0;
  double normal_force_N = 0.0;
  Vec2 shear_force_N{0.0, 0.0};
  double edge_blur_mm = 0.5;

  // Length scale of the deformation envelope: radius, or half side.
  double footprint_sigma_mm() const {
    return shape == FootprintShape::disk ? size_mm : 0.5 * size_mm;
  }
  // Half extent of the footprint along each axis.
  double half_extent_mm() const {
    return shape == FootprintShape::disk ? size_mm : 0.5 * size_mm;
  }
};

// Ground-truth description of one rendered frame.
struct ContactScenario {
  std::vector<ContactPrimitive> contacts;
  double pixel_noise_sigma = 0.0;
  std::uint64_t rng_seed = 0;

  // Throws when a footprint falls outside the sensing field or any
  // parameter is out of its valid range.
  void validate(const SensorConfig& config) const;
};

// A scenario file holds either a single scenario (rendered repeatedly, with
// the noise seed advanced per frame) or an explicit per-frame sequence.
struct ScenarioDocument {
  std::vector<ContactScenario> frames;
  bool explicit_sequence = false;

  // Scenario for the i-th rendered frame. Sequences clamp to their last
  // entry; single scenarios repeat with rng_seed offset by the index.
  ContactScenario frame(std::size_t index) const;
};

}  // namespace satac
