#pragma once

#include <vector>

#include "satac/geometry.hpp"
#include "satac/image.hpp"
#include "satac/sensor_config.hpp"

namespace satac {

struct Marker {
  int id = 0;
  Vec2 centroid_px{0.0, 0.0};
  int pixel_area = 0;
};

struct MarkerSet {
  int width = 0;
  int height = 0;
  std::vector<Marker> markers;
};

struct MatchedPair {
  int marker_id = 0;  // id of the reference marker
  Vec2 ref_px{0.0, 0.0};
  Vec2 cur_px{0.0, 0.0};
  Vec2 displacement_px{0.0, 0.0};  // cur - ref
};

struct DisplacementField {
  std::vector<MatchedPair> matches;
  std::vector<int> unmatched_ref_ids;
  std::vector<int> unmatched_cur_ids;
};

inline constexpr double kDefaultThresholdOffset = 0.08;

// Default window: about twice the marker pitch, forced odd.
int default_threshold_window(const SensorConfig& config);

// Marks pixels darker than the local window mean minus `offset`. Windows are
// clamped at the frame border.
BinaryMask adaptive_threshold(const GrayFrame& frame, int window_px,
                              double offset = kDefaultThresholdOffset);

// 8-connected components of the mask become markers; components with a pixel
// area outside [0.25x, 4x] of the nominal marker area are discarded.
// Centroids use the pixel-center convention (mean pixel index + 0.5).
// Ids are assigned row-major by centroid position.
MarkerSet extract_markers(const BinaryMask& mask, const SensorConfig& config);

// Keeps only the mask components that pass the same area filter, so that
// downstream inpainting touches confirmed markers and not threshold
// artifacts along steep intensity edges.
BinaryMask filter_marker_mask(const BinaryMask& mask,
                              const SensorConfig& config);

// Matches each current marker to its nearest reference marker within
// `gate_px`. When two current markers claim the same reference, the nearer
// one wins and the loser stays unmatched.
DisplacementField track_markers(const MarkerSet& ref, const MarkerSet& cur,
                                double gate_px);

}  // namespace satac
