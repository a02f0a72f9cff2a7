#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "satac/error.hpp"

namespace satac {

// Single-channel intensity image, row-major, intensities in [0, 1].
struct GrayFrame {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;
  std::optional<double> timestamp_s;

  static GrayFrame filled(int width, int height, double value) {
    GrayFrame f;
    f.width = width;
    f.height = height;
    f.pixels.assign(static_cast<size_t>(width) * height, value);
    return f;
  }

  double& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
  double at(int x, int y) const {
    return pixels[static_cast<size_t>(y) * width + x];
  }
  size_t pixel_count() const { return static_cast<size_t>(width) * height; }

  void validate() const;
};

enum class FieldUnit : uint8_t { intensity, celsius, pressure };

// Row-major scalar field with a unit tag.
struct ScalarField {
  int width = 0;
  int height = 0;
  std::vector<double> values;
  FieldUnit unit = FieldUnit::intensity;

  static ScalarField filled(int width, int height, double value,
                            FieldUnit unit = FieldUnit::intensity) {
    ScalarField f;
    f.width = width;
    f.height = height;
    f.values.assign(static_cast<size_t>(width) * height, value);
    f.unit = unit;
    return f;
  }

  double& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
  double at(int x, int y) const {
    return values[static_cast<size_t>(y) * width + x];
  }
  size_t size() const { return static_cast<size_t>(width) * height; }
};

inline ScalarField to_field(const GrayFrame& frame,
                            FieldUnit unit = FieldUnit::intensity) {
  ScalarField f;
  f.width = frame.width;
  f.height = frame.height;
  f.values = frame.pixels;
  f.unit = unit;
  return f;
}

// Row-major boolean mask (nonzero = marker pixel).
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> bits;

  static BinaryMask empty(int width, int height) {
    BinaryMask m;
    m.width = width;
    m.height = height;
    m.bits.assign(static_cast<size_t>(width) * height, 0);
    return m;
  }

  bool test(int x, int y) const {
    return bits[static_cast<size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool value = true) {
    bits[static_cast<size_t>(y) * width + x] = value ? 1 : 0;
  }
  size_t count() const;
};

}  // namespace satac
