#include "satac/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "satac/error.hpp"

namespace satac {

namespace {

constexpr double kMinSeedSeparation = 1e-6;

// Keeps the half-plane {p : dot(p - mid, dir) <= 0}, the side of the
// bisector owned by the cell's seed.
void clip_halfplane(std::vector<Vec2>& poly, const Vec2& mid, const Vec2& dir,
                    std::vector<Vec2>& scratch) {
  scratch.clear();
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    double fa = (a.x - mid.x) * dir.x + (a.y - mid.y) * dir.y;
    double fb = (b.x - mid.x) * dir.x + (b.y - mid.y) * dir.y;
    if (fa <= 0.0) scratch.push_back(a);
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
      double t = fa / (fa - fb);
      scratch.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  poly.swap(scratch);
}

double max_vertex_distance(const Vec2& seed, const std::vector<Vec2>& poly) {
  double best = 0.0;
  for (const Vec2& v : poly) {
    best = std::max(best, (v - seed).norm_sq());
  }
  return std::sqrt(best);
}

struct BucketGrid {
  double x0, y0, cell;
  int nx, ny;
  std::vector<std::vector<int>> buckets;

  BucketGrid(const Rect& bounds, const std::vector<Vec2>& seeds) {
    double span = std::sqrt(bounds.area() /
                            static_cast<double>(std::max<size_t>(1, seeds.size())));
    cell = std::max(span, 1e-3);
    x0 = bounds.x0;
    y0 = bounds.y0;
    nx = std::max(1, static_cast<int>(std::ceil(bounds.width() / cell)));
    ny = std::max(1, static_cast<int>(std::ceil(bounds.height() / cell)));
    buckets.resize(static_cast<size_t>(nx) * ny);
    for (size_t i = 0; i < seeds.size(); ++i) {
      buckets[index_of(seeds[i])].push_back(static_cast<int>(i));
    }
  }

  size_t index_of(const Vec2& p) const {
    int bx = std::clamp(static_cast<int>((p.x - x0) / cell), 0, nx - 1);
    int by = std::clamp(static_cast<int>((p.y - y0) / cell), 0, ny - 1);
    return static_cast<size_t>(by) * nx + bx;
  }
};

}  // namespace

const VoronoiCell* Tessellation::find(int marker_id) const {
  auto it = std::lower_bound(
      cells.begin(), cells.end(), marker_id,
      [](const VoronoiCell& c, int id) { return c.marker_id < id; });
  if (it == cells.end() || it->marker_id != marker_id) return nullptr;
  return &*it;
}

double Tessellation::total_area() const {
  double sum = 0.0;
  for (const VoronoiCell& c : cells) sum += c.area_px2;
  return sum;
}

double polygon_area(const std::vector<Vec2>& polygon) {
  double twice = 0.0;
  const size_t n = polygon.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

Tessellation voronoi_tessellate(const std::vector<Vec2>& seeds,
                                const Rect& bounds) {
  std::vector<int> ids(seeds.size());
  for (size_t i = 0; i < seeds.size(); ++i) ids[i] = static_cast<int>(i);
  return voronoi_tessellate(ids, seeds, bounds);
}

Tessellation voronoi_tessellate(const std::vector<int>& ids,
                                const std::vector<Vec2>& seeds,
                                const Rect& bounds) {
  if (seeds.empty()) {
    throw Error(ErrorKind::invalid_argument, "voronoi: need at least one seed");
  }
  if (ids.size() != seeds.size()) {
    throw Error(ErrorKind::invalid_argument, "voronoi: ids/seeds size mismatch");
  }
  if (!(bounds.x1 > bounds.x0 && bounds.y1 > bounds.y0)) {
    throw Error(ErrorKind::invalid_argument, "voronoi: degenerate bounds");
  }
  for (size_t i = 0; i < seeds.size(); ++i) {
    if (!bounds.strictly_contains(seeds[i])) {
      throw Error(ErrorKind::invalid_argument,
                  "voronoi: seed id " + std::to_string(ids[i]) +
                      " lies outside the bounds rectangle");
    }
  }

  const BucketGrid grid(bounds, seeds);
  const std::vector<Vec2> box = {{bounds.x0, bounds.y0},
                                 {bounds.x1, bounds.y0},
                                 {bounds.x1, bounds.y1},
                                 {bounds.x0, bounds.y1}};

  Tessellation tess;
  tess.bounds = bounds;
  tess.cells.resize(seeds.size());

  std::vector<Vec2> poly, scratch;
  std::vector<std::pair<double, int>> ring_rivals;
  const int max_ring = std::max(grid.nx, grid.ny);

  for (size_t i = 0; i < seeds.size(); ++i) {
    const Vec2& s = seeds[i];
    poly = box;
    double r_max = max_vertex_distance(s, poly);

    int bx = static_cast<int>(grid.index_of(s)) % grid.nx;
    int by = static_cast<int>(grid.index_of(s)) / grid.nx;

    for (int ring = 0; ring <= max_ring; ++ring) {
      // A rival in this ring is at least (ring - 1) whole buckets away; once
      // that exceeds the diameter of the current cell no later seed matters.
      double ring_min_dist = ring >= 2 ? (ring - 1) * grid.cell : 0.0;
      if (ring_min_dist >= 2.0 * r_max) break;

      ring_rivals.clear();
      for (int dy = -ring; dy <= ring; ++dy) {
        int y = by + dy;
        if (y < 0 || y >= grid.ny) continue;
        int step = (dy == -ring || dy == ring) ? 1 : 2 * ring;
        if (step == 0) step = 1;
        for (int dx = -ring; dx <= ring; dx += step) {
          int x = bx + dx;
          if (x < 0 || x >= grid.nx) continue;
          for (int j : grid.buckets[static_cast<size_t>(y) * grid.nx + x]) {
            if (static_cast<size_t>(j) == i) continue;
            double d = (seeds[j] - s).norm();
            if (d < kMinSeedSeparation) {
              throw Error(ErrorKind::invalid_argument,
                          "voronoi: seeds id " + std::to_string(ids[i]) +
                              " and id " + std::to_string(ids[j]) +
                              " coincide (separation < 1e-6 px)");
            }
            ring_rivals.emplace_back(d, j);
          }
        }
      }
      std::sort(ring_rivals.begin(), ring_rivals.end());
      for (const auto& [dist, j] : ring_rivals) {
        if (dist >= 2.0 * r_max) break;
        Vec2 mid{0.5 * (s.x + seeds[j].x), 0.5 * (s.y + seeds[j].y)};
        Vec2 dir = seeds[j] - s;
        clip_halfplane(poly, mid, dir, scratch);
        r_max = max_vertex_distance(s, poly);
      }
    }

    VoronoiCell& cell = tess.cells[i];
    cell.marker_id = ids[i];
    cell.seed_px = s;
    cell.polygon = poly;
    cell.area_px2 = polygon_area(poly);
  }

  std::sort(tess.cells.begin(), tess.cells.end(),
            [](const VoronoiCell& a, const VoronoiCell& b) {
              return a.marker_id < b.marker_id;
            });
  for (size_t i = 1; i < tess.cells.size(); ++i) {
    if (tess.cells[i].marker_id == tess.cells[i - 1].marker_id) {
      throw Error(ErrorKind::invalid_argument,
                  "voronoi: duplicate cell id " +
                      std::to_string(tess.cells[i].marker_id));
    }
  }
  return tess;
}

std::map<int, double> area_change_rates(const Tessellation& ref,
                                        const Tessellation& cur) {
  std::map<int, double> rates;
  for (const VoronoiCell& cell : cur.cells) {
    const VoronoiCell* base = ref.find(cell.marker_id);
    if (!base) {
      throw Error(ErrorKind::invalid_argument,
                  "area_change_rates: id " + std::to_string(cell.marker_id) +
                      " missing from the reference tessellation");
    }
    rates[cell.marker_id] = (cell.area_px2 - base->area_px2) / base->area_px2;
  }
  return rates;
}

}  // namespace satac
