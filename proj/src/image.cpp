#include "satac/image.hpp"

#include <algorithm>
#include <cmath>

namespace satac {

void GrayFrame::validate() const {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorKind::invalid_argument, "frame dimensions must be positive");
  }
  if (pixels.size() != pixel_count()) {
    throw Error(ErrorKind::invalid_argument,
                "pixel count does not match width*height");
  }
  for (double v : pixels) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorKind::invalid_argument,
                  "frame intensity outside [0,1]");
    }
  }
}

size_t BinaryMask::count() const {
  return static_cast<size_t>(std::count_if(bits.begin(), bits.end(),
                                           [](uint8_t b) { return b != 0; }));
}

}  // namespace satac
