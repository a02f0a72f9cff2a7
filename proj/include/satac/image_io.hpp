#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "satac/image.hpp"

namespace satac {

// 8-bit RGB image for heatmaps and quiver plots.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> data;  // row-major, 3 bytes per pixel

  static RgbImage filled(int width, int height, uint8_t r, uint8_t g, uint8_t b);
  void set(int x, int y, uint8_t r, uint8_t g, uint8_t b);
};

// Frames are stored as 8-bit grayscale, intensity = round(255 * value).
// PNG files are non-interlaced with zlib compression; PGM is binary P5.
void write_pgm(const GrayFrame& frame, const std::string& path);
GrayFrame read_pgm(const std::string& path);

void write_png_gray(const GrayFrame& frame, const std::string& path);
GrayFrame read_png_gray(const std::string& path);

void write_png_rgb(const RgbImage& image, const std::string& path);

// Dispatch on file extension (.png / .pgm).
void write_frame(const GrayFrame& frame, const std::string& path);
GrayFrame read_frame(const std::string& path);

}  // namespace satac
