#pragma once

#include <map>
#include <vector>

#include "satac/geometry.hpp"

namespace satac {

struct VoronoiCell {
  int marker_id = 0;
  Vec2 seed_px{0.0, 0.0};
  std::vector<Vec2> polygon;  // convex, positive shoelace orientation
  double area_px2 = 0.0;
};

struct Tessellation {
  Rect bounds;
  std::vector<VoronoiCell> cells;  // sorted by marker_id

  const VoronoiCell* find(int marker_id) const;
  double total_area() const;
};

// Signed shoelace area; positive for the orientation tessellation cells use.
double polygon_area(const std::vector<Vec2>& polygon);

// Bounded Voronoi diagram: each cell is the bounds rectangle clipped against
// the bisector half-plane of every rival seed that can reach it. Rival
// lookup runs over a bucket grid, visiting near seeds first and stopping
// once no remaining seed can cut the cell, so near-regular grids cost O(n).
// Seeds must be strictly inside bounds and pairwise farther than 1e-6 px.
Tessellation voronoi_tessellate(const std::vector<Vec2>& seeds,
                                const Rect& bounds);

// Same, with caller-chosen cell ids (e.g. tracked marker ids).
Tessellation voronoi_tessellate(const std::vector<int>& ids,
                                const std::vector<Vec2>& seeds,
                                const Rect& bounds);

// rate(id) = (area_cur - area_ref) / area_ref. Ids present only in ref are
// omitted; an id in cur but not ref is an error.
std::map<int, double> area_change_rates(const Tessellation& ref,
                                        const Tessellation& cur);

}  // namespace satac
