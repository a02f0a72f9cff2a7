#pragma once

#include "satac/image.hpp"

namespace satac {

// Binary dilation with a Euclidean disk structuring element.
BinaryMask dilate(const BinaryMask& mask, double radius_px);

// Harmonic fill: masked pixels are replaced by the solution of the discrete
// Laplace equation with the unmasked pixels as boundary values. Iterates
// 4-neighbor averaging (Gauss-Seidel) until the largest per-iteration change
// drops below `tol`. Masked border pixels use whichever neighbors exist.
ScalarField inpaint_mask(const ScalarField& image, const BinaryMask& mask,
                         double tol = 1e-4);

}  // namespace satac
