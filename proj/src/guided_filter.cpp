#include "satac/guided_filter.hpp"

#include <algorithm>
#include <vector>

#ifdef __GLIBC__
#include <malloc.h>
#endif

#include "satac/error.hpp"

namespace satac {

namespace {

#ifdef __GLIBC__
// Multi-megabyte image buffers churn through mmap/munmap at default malloc
// thresholds and the page refaults outweigh the pixel math. Keep big blocks
// in the arena.
struct MallocTuning {
  MallocTuning() {
    mallopt(M_MMAP_THRESHOLD, 16 * 1024 * 1024);
    mallopt(M_TRIM_THRESHOLD, 64 * 1024 * 1024);
  }
};
const MallocTuning g_malloc_tuning;
#endif

// Scratch buffers are reused across calls. Fresh multi-megabyte vectors per
// call dominate the runtime on this image size, so the filter keeps its
// working set alive per thread.
struct Workspace {
  std::vector<double> hsum;
  ScalarField mean_guide, mean_input, mean_gg, mean_gi;
  ScalarField scratch, a, b, mean_a, mean_b;
};
thread_local Workspace g_ws;

// Separable box mean with clamped borders. Horizontal sliding window first,
// then a vertical rolling column sum, so every pass streams row-major and the
// per-pixel work is two multiplies by precomputed reciprocal window widths.
void box_mean_core(const double* in, int w, int h, int r, double* out,
                   std::vector<double>& hsum) {
  hsum.resize(static_cast<size_t>(w) * h);

  std::vector<double> inv_wx(w);
  for (int x = 0; x < w; ++x) {
    int x0 = std::max(0, x - r);
    int x1 = std::min(w - 1, x + r);
    inv_wx[x] = 1.0 / (x1 - x0 + 1);
  }

  for (int y = 0; y < h; ++y) {
    const double* row = in + static_cast<size_t>(y) * w;
    double* hrow = hsum.data() + static_cast<size_t>(y) * w;
    double acc = 0.0;
    const int lead = std::min(r, w - 1);
    for (int x = 0; x <= lead; ++x) acc += row[x];
    for (int x = 0; x < w; ++x) {
      hrow[x] = acc;
      int enter = x + r + 1;
      int leave = x - r;
      if (enter < w) acc += row[enter];
      if (leave >= 0) acc -= row[leave];
    }
  }

  std::vector<double> colsum(w, 0.0);
  const int vlead = std::min(r, h - 1);
  for (int y = 0; y <= vlead; ++y) {
    const double* hrow = hsum.data() + static_cast<size_t>(y) * w;
    for (int x = 0; x < w; ++x) colsum[x] += hrow[x];
  }
  for (int y = 0; y < h; ++y) {
    int y0 = std::max(0, y - r);
    int y1 = std::min(h - 1, y + r);
    const double inv_wy = 1.0 / (y1 - y0 + 1);
    double* orow = out + static_cast<size_t>(y) * w;
    for (int x = 0; x < w; ++x) orow[x] = colsum[x] * inv_wx[x] * inv_wy;
    int enter = y + r + 1;
    int leave = y - r;
    if (enter < h) {
      const double* hrow = hsum.data() + static_cast<size_t>(enter) * w;
      for (int x = 0; x < w; ++x) colsum[x] += hrow[x];
    }
    if (leave >= 0) {
      const double* hrow = hsum.data() + static_cast<size_t>(leave) * w;
      for (int x = 0; x < w; ++x) colsum[x] -= hrow[x];
    }
  }
}

void box_mean_into(const ScalarField& f, int r, ScalarField& out,
                   std::vector<double>& hsum) {
  out.width = f.width;
  out.height = f.height;
  out.unit = f.unit;
  out.values.resize(f.size());
  box_mean_core(f.values.data(), f.width, f.height, r, out.values.data(), hsum);
}

}  // namespace

void box_mean_raw(const double* input, int width, int height, int radius_px,
                  double* out) {
  if (radius_px < 0 || width <= 0 || height <= 0) {
    throw Error(ErrorKind::invalid_argument, "box mean: bad dimensions");
  }
  box_mean_core(input, width, height, radius_px, out, g_ws.hsum);
}

ScalarField box_mean(const ScalarField& input, int radius_px) {
  if (radius_px < 0) {
    throw Error(ErrorKind::invalid_argument, "box mean: radius must be >= 0");
  }
  ScalarField out;
  box_mean_into(input, radius_px, out, g_ws.hsum);
  return out;
}

ScalarField guided_filter(const ScalarField& input, const ScalarField& guide,
                          int radius_px, double eps) {
  if (input.width != guide.width || input.height != guide.height) {
    throw Error(ErrorKind::invalid_argument,
                "guided filter: input and guide dimensions differ");
  }
  if (radius_px < 1) {
    throw Error(ErrorKind::invalid_argument, "guided filter: radius must be >= 1");
  }
  if (eps < 0.0) {
    throw Error(ErrorKind::invalid_argument, "guided filter: eps must be >= 0");
  }

  const int w = input.width;
  const int h = input.height;
  const size_t n = input.size();
  // Self-guidance makes mean_input == mean_guide and mean_gi == mean_gg, so
  // half of the box passes can be skipped.
  const bool self_guided = &input == &guide;
  Workspace& ws = g_ws;

  box_mean_into(guide, radius_px, ws.mean_guide, ws.hsum);
  const ScalarField* mean_input = &ws.mean_guide;
  if (!self_guided) {
    box_mean_into(input, radius_px, ws.mean_input, ws.hsum);
    mean_input = &ws.mean_input;
  }

  ws.scratch.width = w;
  ws.scratch.height = h;
  ws.scratch.values.resize(n);
  for (size_t i = 0; i < n; ++i) {
    ws.scratch.values[i] = guide.values[i] * guide.values[i];
  }
  box_mean_into(ws.scratch, radius_px, ws.mean_gg, ws.hsum);
  const ScalarField* mean_gi = &ws.mean_gg;
  if (!self_guided) {
    for (size_t i = 0; i < n; ++i) {
      ws.scratch.values[i] = guide.values[i] * input.values[i];
    }
    box_mean_into(ws.scratch, radius_px, ws.mean_gi, ws.hsum);
    mean_gi = &ws.mean_gi;
  }

  ws.a.width = ws.b.width = w;
  ws.a.height = ws.b.height = h;
  ws.a.values.resize(n);
  ws.b.values.resize(n);
  for (size_t i = 0; i < n; ++i) {
    double mg = ws.mean_guide.values[i];
    double var = ws.mean_gg.values[i] - mg * mg;
    double cov = mean_gi->values[i] - mg * mean_input->values[i];
    double denom = var + eps;
    double ai = denom > 0.0 ? cov / denom : 0.0;
    ws.a.values[i] = ai;
    ws.b.values[i] = mean_input->values[i] - ai * mg;
  }

  box_mean_into(ws.a, radius_px, ws.mean_a, ws.hsum);
  box_mean_into(ws.b, radius_px, ws.mean_b, ws.hsum);

  ScalarField out;
  out.width = w;
  out.height = h;
  out.unit = input.unit;
  out.values.resize(n);
  for (size_t i = 0; i < n; ++i) {
    out.values[i] =
        ws.mean_a.values[i] * guide.values[i] + ws.mean_b.values[i];
  }
  return out;
}

}  // namespace satac
