#pragma once

#include "satac/image.hpp"

namespace satac {

// Edge-preserving guided filter. Each square window of side 2*radius+1 fits
// the input as an affine function of the guide:
//   a = cov(guide, input) / (var(guide) + eps),  b = mean(input) - a * mean(guide)
// and the output pixel averages a and b over all windows covering it:
//   out = mean(a) * guide + mean(b)
// Windows are clamped at the image border. Box sums run separably with
// sliding windows, so cost is independent of the radius.
ScalarField guided_filter(const ScalarField& input, const ScalarField& guide,
                          int radius_px, double eps);

// Box mean with border-clamped windows; shared by the guided filter and the
// blur-comparison paths.
ScalarField box_mean(const ScalarField& input, int radius_px);

// Same box mean over a raw row-major buffer. out must hold width*height
// values and may not alias input.
void box_mean_raw(const double* input, int width, int height, int radius_px,
                  double* out);

}  // namespace satac
