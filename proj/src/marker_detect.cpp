#include "satac/marker_detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "satac/error.hpp"
#include "satac/guided_filter.hpp"

namespace satac {

int default_threshold_window(const SensorConfig& config) {
  return static_cast<int>(std::lround(2.0 * config.pitch_px())) | 1;
}

BinaryMask adaptive_threshold(const GrayFrame& frame, int window_px,
                              double offset) {
  frame.validate();
  if (window_px < 3 || window_px % 2 == 0) {
    throw Error(ErrorKind::invalid_argument,
                "adaptive threshold: window must be odd and >= 3");
  }
  if (window_px > frame.width || window_px > frame.height) {
    throw Error(ErrorKind::invalid_argument,
                "adaptive threshold: window " + std::to_string(window_px) +
                    " exceeds frame dimensions");
  }

  const int w = frame.width;
  const int h = frame.height;
  const int r = window_px / 2;

  thread_local std::vector<double> mean;
  mean.resize(frame.pixel_count());
  box_mean_raw(frame.pixels.data(), w, h, r, mean.data());

  BinaryMask mask = BinaryMask::empty(w, h);
  const double* px = frame.pixels.data();
  for (size_t i = 0; i < frame.pixel_count(); ++i) {
    if (px[i] < mean[i] - offset) mask.bits[i] = 1;
  }
  return mask;
}

MarkerSet extract_markers(const BinaryMask& mask, const SensorConfig& config) {
  if (mask.width <= 0 || mask.height <= 0 ||
      mask.bits.size() != static_cast<size_t>(mask.width) * mask.height) {
    throw Error(ErrorKind::invalid_argument, "extract markers: invalid mask");
  }
  const int w = mask.width;
  const int h = mask.height;
  const double nominal = config.nominal_marker_area_px2();
  const double min_area = 0.25 * nominal;
  const double max_area = 4.0 * nominal;

  std::vector<uint8_t> visited(mask.bits.size(), 0);
  std::vector<int> stack;
  MarkerSet set;
  set.width = w;
  set.height = h;

  for (int start = 0; start < w * h; ++start) {
    if (!mask.bits[start] || visited[start]) continue;
    stack.assign(1, start);
    visited[start] = 1;
    long long sum_x = 0, sum_y = 0;
    int area = 0;
    while (!stack.empty()) {
      int idx = stack.back();
      stack.pop_back();
      int x = idx % w;
      int y = idx / w;
      sum_x += x;
      sum_y += y;
      ++area;
      for (int dy = -1; dy <= 1; ++dy) {
        int ny = y + dy;
        if (ny < 0 || ny >= h) continue;
        for (int dx = -1; dx <= 1; ++dx) {
          int nx = x + dx;
          if (nx < 0 || nx >= w) continue;
          int nidx = ny * w + nx;
          if (mask.bits[nidx] && !visited[nidx]) {
            visited[nidx] = 1;
            stack.push_back(nidx);
          }
        }
      }
    }
    if (area < min_area || area > max_area) continue;
    Marker m;
    m.pixel_area = area;
    m.centroid_px = {static_cast<double>(sum_x) / area + 0.5,
                     static_cast<double>(sum_y) / area + 0.5};
    set.markers.push_back(m);
  }

  std::sort(set.markers.begin(), set.markers.end(),
            [](const Marker& a, const Marker& b) {
              if (a.centroid_px.y != b.centroid_px.y)
                return a.centroid_px.y < b.centroid_px.y;
              return a.centroid_px.x < b.centroid_px.x;
            });
  for (size_t i = 0; i < set.markers.size(); ++i) {
    set.markers[i].id = static_cast<int>(i);
  }
  return set;
}

BinaryMask filter_marker_mask(const BinaryMask& mask,
                              const SensorConfig& config) {
  const int w = mask.width;
  const int h = mask.height;
  const double nominal = config.nominal_marker_area_px2();
  const double min_area = 0.25 * nominal;
  const double max_area = 4.0 * nominal;

  BinaryMask out = BinaryMask::empty(w, h);
  std::vector<uint8_t> visited(mask.bits.size(), 0);
  std::vector<int> stack, component;
  for (int start = 0; start < w * h; ++start) {
    if (!mask.bits[start] || visited[start]) continue;
    stack.assign(1, start);
    visited[start] = 1;
    component.clear();
    while (!stack.empty()) {
      int idx = stack.back();
      stack.pop_back();
      component.push_back(idx);
      int x = idx % w;
      int y = idx / w;
      for (int dy = -1; dy <= 1; ++dy) {
        int ny = y + dy;
        if (ny < 0 || ny >= h) continue;
        for (int dx = -1; dx <= 1; ++dx) {
          int nx = x + dx;
          if (nx < 0 || nx >= w) continue;
          int nidx = ny * w + nx;
          if (mask.bits[nidx] && !visited[nidx]) {
            visited[nidx] = 1;
            stack.push_back(nidx);
          }
        }
      }
    }
    double area = static_cast<double>(component.size());
    if (area < min_area || area > max_area) continue;
    for (int idx : component) out.bits[idx] = 1;
  }
  return out;
}

DisplacementField track_markers(const MarkerSet& ref, const MarkerSet& cur,
                                double gate_px) {
  if (gate_px <= 0.0) {
    throw Error(ErrorKind::invalid_argument, "track markers: gate must be > 0");
  }

  // Bucket the reference markers so nearest-neighbor queries stay local.
  const double cell = std::max(gate_px, 1.0);
  auto bucket_of = [&](const Vec2& p) {
    return std::pair<int, int>{static_cast<int>(std::floor(p.x / cell)),
                               static_cast<int>(std::floor(p.y / cell))};
  };
  struct BucketKey {
    int x, y;
    bool operator<(const BucketKey& o) const {
      return x != o.x ? x < o.x : y < o.y;
    }
  };
  std::vector<std::pair<BucketKey, int>> bucketed;
  bucketed.reserve(ref.markers.size());
  for (size_t i = 0; i < ref.markers.size(); ++i) {
    auto [bx, by] = bucket_of(ref.markers[i].centroid_px);
    bucketed.push_back({{bx, by}, static_cast<int>(i)});
  }
  std::sort(bucketed.begin(), bucketed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  auto for_each_near = [&](const Vec2& p, auto&& fn) {
    auto [bx, by] = bucket_of(p);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        BucketKey key{bx + dx, by + dy};
        auto it = std::lower_bound(
            bucketed.begin(), bucketed.end(), key,
            [](const auto& a, const BucketKey& k) { return a.first < k; });
        for (; it != bucketed.end() && !(key < it->first); ++it) fn(it->second);
      }
    }
  };

  // Each current marker proposes its nearest reference within the gate.
  const double gate_sq = gate_px * gate_px;
  std::vector<int> proposal(cur.markers.size(), -1);
  std::vector<double> proposal_dist(cur.markers.size(), 0.0);
  for (size_t ci = 0; ci < cur.markers.size(); ++ci) {
    double best = std::numeric_limits<double>::infinity();
    int best_ref = -1;
    for_each_near(cur.markers[ci].centroid_px, [&](int ri) {
      double d = (cur.markers[ci].centroid_px - ref.markers[ri].centroid_px)
                     .norm_sq();
      if (d < best) {
        best = d;
        best_ref = ri;
      }
    });
    if (best_ref >= 0 && best <= gate_sq) {
      proposal[ci] = best_ref;
      proposal_dist[ci] = best;
    }
  }

  // Conflicts: the nearer proposer wins, the loser goes unmatched.
  std::vector<int> winner(ref.markers.size(), -1);
  for (size_t ci = 0; ci < cur.markers.size(); ++ci) {
    int ri = proposal[ci];
    if (ri < 0) continue;
    if (winner[ri] < 0 || proposal_dist[ci] < proposal_dist[winner[ri]]) {
      winner[ri] = static_cast<int>(ci);
    }
  }

  DisplacementField field;
  for (size_t ri = 0; ri < ref.markers.size(); ++ri) {
    if (winner[ri] < 0) {
      field.unmatched_ref_ids.push_back(ref.markers[ri].id);
      continue;
    }
    const Marker& r = ref.markers[ri];
    const Marker& c = cur.markers[winner[ri]];
    field.matches.push_back(
        {r.id, r.centroid_px, c.centroid_px, c.centroid_px - r.centroid_px});
  }
  for (size_t ci = 0; ci < cur.markers.size(); ++ci) {
    int ri = proposal[ci];
    if (ri < 0 || winner[ri] != static_cast<int>(ci)) {
      field.unmatched_cur_ids.push_back(cur.markers[ci].id);
    }
  }
  return field;
}

}  // namespace satac
