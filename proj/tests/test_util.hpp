#pragma once

// Shared helpers for the test binaries. The brute-force functions here are
// deliberately naive re-implementations, kept independent of the library
// code so they can serve as oracles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "satac/image.hpp"
#include "satac/geometry.hpp"

namespace testutil {

using satac::BinaryMask;
using satac::Rect;
using satac::ScalarField;
using satac::Vec2;

inline std::mt19937_64 make_rng(uint64_t seed) { return std::mt19937_64(seed); }

inline ScalarField random_field(int w, int h, std::mt19937_64& rng,
                                double lo = 0.0, double hi = 1.0) {
  ScalarField f = ScalarField::filled(w, h, 0.0);
  std::uniform_real_distribution<double> dist(lo, hi);
  for (double& v : f.values) v = dist(rng);
  return f;
}

// Box mean with border clamping, one window per output pixel.
inline ScalarField brute_box_mean(const ScalarField& in, int r) {
  ScalarField out = ScalarField::filled(in.width, in.height, 0.0, in.unit);
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      int x0 = std::max(0, x - r), x1 = std::min(in.width - 1, x + r);
      int y0 = std::max(0, y - r), y1 = std::min(in.height - 1, y + r);
      double sum = 0.0;
      for (int yy = y0; yy <= y1; ++yy)
        for (int xx = x0; xx <= x1; ++xx) sum += in.at(xx, yy);
      out.at(x, y) = sum / ((x1 - x0 + 1) * (y1 - y0 + 1));
    }
  }
  return out;
}

// Direct per-window evaluation of the guided filter definition: per window
// a = cov(guide,input)/(var(guide)+eps), b = mean(input) - a*mean(guide);
// output = (mean of a over covering windows)*guide + (mean of b).
inline ScalarField brute_guided_filter(const ScalarField& input,
                                       const ScalarField& guide, int r,
                                       double eps) {
  const int w = input.width, h = input.height;
  ScalarField a = ScalarField::filled(w, h, 0.0);
  ScalarField b = ScalarField::filled(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int x0 = std::max(0, x - r), x1 = std::min(w - 1, x + r);
      int y0 = std::max(0, y - r), y1 = std::min(h - 1, y + r);
      double n = (x1 - x0 + 1) * (y1 - y0 + 1);
      double sg = 0, si = 0, sgg = 0, sgi = 0;
      for (int yy = y0; yy <= y1; ++yy) {
        for (int xx = x0; xx <= x1; ++xx) {
          double g = guide.at(xx, yy), i = input.at(xx, yy);
          sg += g;
          si += i;
          sgg += g * g;
          sgi += g * i;
        }
      }
      double mg = sg / n, mi = si / n;
      double var = sgg / n - mg * mg;
      double cov = sgi / n - mg * mi;
      a.at(x, y) = cov / (var + eps);
      b.at(x, y) = mi - a.at(x, y) * mg;
    }
  }
  ScalarField out = ScalarField::filled(w, h, 0.0, input.unit);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int x0 = std::max(0, x - r), x1 = std::min(w - 1, x + r);
      int y0 = std::max(0, y - r), y1 = std::min(h - 1, y + r);
      double n = (x1 - x0 + 1) * (y1 - y0 + 1);
      double sa = 0, sb = 0;
      for (int yy = y0; yy <= y1; ++yy) {
        for (int xx = x0; xx <= x1; ++xx) {
          sa += a.at(xx, yy);
          sb += b.at(xx, yy);
        }
      }
      out.at(x, y) = (sa / n) * guide.at(x, y) + sb / n;
    }
  }
  return out;
}

// Gaussian smoothing with kernel radius r (sigma = r/2), truncated and
// renormalized at the borders. The comparison filter for the marker-removal
// quality check.
inline ScalarField gaussian_blur(const ScalarField& in, int r) {
  if (r < 1) return in;
  double sigma = 0.5 * r;
  std::vector<double> k(2 * r + 1);
  for (int i = -r; i <= r; ++i) k[i + r] = std::exp(-0.5 * i * i / (sigma * sigma));
  ScalarField tmp = ScalarField::filled(in.width, in.height, 0.0, in.unit);
  ScalarField out = tmp;
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      double sum = 0, wsum = 0;
      for (int i = -r; i <= r; ++i) {
        int xx = x + i;
        if (xx < 0 || xx >= in.width) continue;
        sum += k[i + r] * in.at(xx, y);
        wsum += k[i + r];
      }
      tmp.at(x, y) = sum / wsum;
    }
  }
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      double sum = 0, wsum = 0;
      for (int i = -r; i <= r; ++i) {
        int yy = y + i;
        if (yy < 0 || yy >= in.height) continue;
        sum += k[i + r] * tmp.at(x, yy);
        wsum += k[i + r];
      }
      out.at(x, y) = sum / wsum;
    }
  }
  return out;
}

// Minimax form of monotone least squares: y_hat[i] =
// max over j<=i of min over k>=i of mean(y[j..k]).
inline std::vector<double> isotonic_minimax(const std::vector<double>& y) {
  const size_t n = y.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + y[i];
  auto mean = [&](size_t j, size_t k) {
    return (prefix[k + 1] - prefix[j]) / (k - j + 1);
  };
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (size_t j = 0; j <= i; ++j) {
      double worst = std::numeric_limits<double>::infinity();
      for (size_t k = i; k < n; ++k) worst = std::min(worst, mean(j, k));
      best = std::max(best, worst);
    }
    out[i] = best;
  }
  return out;
}

struct OlsLine {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Normal-equation least squares, written out long-hand.
inline OlsLine ols_line(const std::vector<double>& xs,
                        const std::vector<double>& ys) {
  const size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double det = n * sxx - sx * sx;
  OlsLine line;
  line.slope = (n * sxy - sx * sy) / det;
  line.intercept = (sy * sxx - sx * sxy) / det;
  double ss_res = 0, ss_tot = 0, mean_y = sy / n;
  for (size_t i = 0; i < n; ++i) {
    double fit = line.slope * xs[i] + line.intercept;
    ss_res += (ys[i] - fit) * (ys[i] - fit);
    ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
  }
  line.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return line;
}

// Voronoi cell areas by brute assignment: every sample point of a step-sized
// grid over the bounds is credited to its nearest seed. A bucket grid keeps
// the nearest-seed query fast enough for thousands of seeds; the geometry is
// still decided point by point, independently of any polygon clipping.
inline std::vector<double> sampled_cell_areas(const std::vector<Vec2>& seeds,
                                              const Rect& bounds, double step) {
  const size_t n = seeds.size();
  std::vector<double> areas(n, 0.0);
  double cell = std::max(step, std::sqrt(bounds.area() / std::max<size_t>(n, 1)));
  int bw = std::max(1, static_cast<int>(std::ceil(bounds.width() / cell)));
  int bh = std::max(1, static_cast<int>(std::ceil(bounds.height() / cell)));
  std::vector<std::vector<int>> buckets(static_cast<size_t>(bw) * bh);
  auto bucket_of = [&](const Vec2& p) {
    int bx = std::clamp(static_cast<int>((p.x - bounds.x0) / cell), 0, bw - 1);
    int by = std::clamp(static_cast<int>((p.y - bounds.y0) / cell), 0, bh - 1);
    return by * bw + bx;
  };
  for (size_t i = 0; i < n; ++i) buckets[bucket_of(seeds[i])].push_back(static_cast<int>(i));

  int sx = static_cast<int>(std::round(bounds.width() / step));
  int sy = static_cast<int>(std::round(bounds.height() / step));
  for (int iy = 0; iy < sy; ++iy) {
    for (int ix = 0; ix < sx; ++ix) {
      Vec2 p{bounds.x0 + (ix + 0.5) * step, bounds.y0 + (iy + 0.5) * step};
      int bx = std::clamp(static_cast<int>((p.x - bounds.x0) / cell), 0, bw - 1);
      int by = std::clamp(static_cast<int>((p.y - bounds.y0) / cell), 0, bh - 1);
      int best = -1;
      double best_d = std::numeric_limits<double>::infinity();
      // Expanding ring search: once every seed in the ring is farther than
      // the best hit could allow, stop.
      for (int ring = 0; ring < std::max(bw, bh); ++ring) {
        double ring_min = (ring - 1) * cell;
        if (best >= 0 && ring_min > 0 && ring_min * ring_min > best_d) break;
        bool any = false;
        for (int dy = -ring; dy <= ring; ++dy) {
          for (int dx = -ring; dx <= ring; ++dx) {
            if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
            int nx = bx + dx, ny = by + dy;
            if (nx < 0 || nx >= bw || ny < 0 || ny >= bh) continue;
            any = true;
            for (int si : buckets[static_cast<size_t>(ny) * bw + nx]) {
              double d = (seeds[si] - p).norm_sq();
              if (d < best_d) {
                best_d = d;
                best = si;
              }
            }
          }
        }
        if (!any && best >= 0) break;
      }
      areas[best] += step * step;
    }
  }
  return areas;
}

// 8-connected component count of a mask.
inline int count_components8(const BinaryMask& mask) {
  const int w = mask.width, h = mask.height;
  std::vector<uint8_t> visited(mask.bits.size(), 0);
  std::vector<int> stack;
  int components = 0;
  for (int start = 0; start < w * h; ++start) {
    if (!mask.bits[start] || visited[start]) continue;
    ++components;
    stack.assign(1, start);
    visited[start] = 1;
    while (!stack.empty()) {
      int idx = stack.back();
      stack.pop_back();
      int x = idx % w, y = idx / w;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          int nx = x + dx, ny = y + dy;
          if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
          int nidx = ny * w + nx;
          if (mask.bits[nidx] && !visited[nidx]) {
            visited[nidx] = 1;
            stack.push_back(nidx);
          }
        }
      }
    }
  }
  return components;
}

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) {
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  }
  return m;
}

}  // namespace testutil
