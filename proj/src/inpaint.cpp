#include "satac/inpaint.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "satac/error.hpp"

namespace satac {

BinaryMask dilate(const BinaryMask& mask, double radius_px) {
  if (radius_px <= 0.0) return mask;
  int r = static_cast<int>(std::floor(radius_px));
  double r_sq = radius_px * radius_px;
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      if (dx * dx + dy * dy <= r_sq) offsets.push_back({dx, dy});
    }
  }

  BinaryMask out = BinaryMask::empty(mask.width, mask.height);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.test(x, y)) continue;
      for (auto [dx, dy] : offsets) {
        int nx = x + dx;
        int ny = y + dy;
        if (nx >= 0 && nx < mask.width && ny >= 0 && ny < mask.height) {
          out.set(nx, ny);
        }
      }
    }
  }
  return out;
}

namespace {

// Masked pixel with its valid 4-neighborhood baked in, so relaxation sweeps
// carry no modulo or bounds checks.
struct MaskedPixel {
  int idx = 0;
  double inv_count = 0.0;
  uint8_t has_left = 0, has_right = 0, has_up = 0, has_down = 0;
};

struct InpaintWorkspace {
  std::vector<char> known, queued;
  std::vector<int> frontier, next_frontier;
  std::vector<MaskedPixel> order;
};
thread_local InpaintWorkspace g_ws;

}  // namespace

ScalarField inpaint_mask(const ScalarField& image, const BinaryMask& mask,
                         double tol) {
  if (image.width != mask.width || image.height != mask.height) {
    throw Error(ErrorKind::invalid_argument,
                "inpaint: mask dimensions do not match the image");
  }
  if (tol <= 0.0) {
    throw Error(ErrorKind::invalid_argument, "inpaint: tol must be > 0");
  }

  const int w = image.width;
  const int h = image.height;
  const size_t n = static_cast<size_t>(w) * h;
  size_t masked_count = mask.count();
  if (masked_count == 0) return image;
  if (masked_count == n) {
    throw Error(ErrorKind::invalid_argument,
                "inpaint: mask covers the entire image");
  }

  ScalarField out = image;
  InpaintWorkspace& ws = g_ws;

  // Seed masked pixels breadth-first from the unmasked boundary, each from
  // the mean of its already-known neighbors. Flat surroundings then seed
  // exactly and the relaxation below converges immediately. Discovery order
  // is kept so later sweeps run boundary-inward.
  ws.known.assign(n, 0);
  for (size_t i = 0; i < n; ++i) ws.known[i] = mask.bits[i] ? 0 : 1;
  ws.queued.assign(n, 0);
  ws.frontier.clear();
  ws.order.clear();
  auto neighbors = [&](int idx, auto&& fn) {
    int x = idx % w;
    int y = idx / w;
    if (x > 0) fn(idx - 1);
    if (x < w - 1) fn(idx + 1);
    if (y > 0) fn(idx - w);
    if (y < h - 1) fn(idx + w);
  };
  for (size_t i = 0; i < n; ++i) {
    if (!mask.bits[i]) continue;
    int idx = static_cast<int>(i);
    bool boundary = false;
    neighbors(idx, [&](int nb) { boundary = boundary || ws.known[nb]; });
    if (boundary) {
      ws.frontier.push_back(idx);
      ws.queued[idx] = 1;
    }
  }
  while (!ws.frontier.empty()) {
    ws.next_frontier.clear();
    for (int idx : ws.frontier) {
      double sum = 0.0;
      int count = 0;
      neighbors(idx, [&](int nb) {
        if (ws.known[nb]) {
          sum += out.values[nb];
          ++count;
        }
      });
      out.values[idx] = sum / count;
    }
    for (int idx : ws.frontier) {
      ws.known[idx] = 1;
      int x = idx % w;
      int y = idx / w;
      MaskedPixel p;
      p.idx = idx;
      p.has_left = x > 0;
      p.has_right = x < w - 1;
      p.has_up = y > 0;
      p.has_down = y < h - 1;
      int count = p.has_left + p.has_right + p.has_up + p.has_down;
      p.inv_count = count > 0 ? 1.0 / count : 0.0;
      ws.order.push_back(p);
    }
    for (int idx : ws.frontier) {
      neighbors(idx, [&](int nb) {
        if (!ws.known[nb] && !ws.queued[nb]) {
          ws.queued[nb] = 1;
          ws.next_frontier.push_back(nb);
        }
      });
    }
    ws.frontier.swap(ws.next_frontier);
  }

  // In-place neighbor averaging over the masked pixels until the largest
  // per-sweep change drops under tol. Sweep direction alternates so boundary
  // information flows both ways along the discovery order.
  double* v = out.values.data();
  auto relax = [&](const MaskedPixel& p) {
    double sum = 0.0;
    if (p.has_left) sum += v[p.idx - 1];
    if (p.has_right) sum += v[p.idx + 1];
    if (p.has_up) sum += v[p.idx - w];
    if (p.has_down) sum += v[p.idx + w];
    double next = sum * p.inv_count;
    double change = std::abs(next - v[p.idx]);
    v[p.idx] = next;
    return change;
  };
  const int max_iterations = 100000;
  for (int iter = 0; iter < max_iterations; ++iter) {
    double max_change = 0.0;
    if (iter % 2 == 0) {
      for (const MaskedPixel& p : ws.order) {
        max_change = std::max(max_change, relax(p));
      }
    } else {
      for (auto it = ws.order.rbegin(); it != ws.order.rend(); ++it) {
        max_change = std::max(max_change, relax(*it));
      }
    }
    if (max_change < tol) break;
  }
  return out;
}

}  // namespace satac
