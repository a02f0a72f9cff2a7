#include "satac/image_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "satac/error.hpp"

namespace satac {

namespace {

uint8_t quantize(double v) {
  double q = std::round(255.0 * std::clamp(v, 0.0, 1.0));
  return static_cast<uint8_t>(q);
}

std::vector<uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                              std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const void* data, size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) throw Error(ErrorKind::io, "write failed for " + path);
}

// ---- PNG ----

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

void append_chunk(std::vector<uint8_t>& out, const char type[4],
                  const std::vector<uint8_t>& payload) {
  put_u32(out, static_cast<uint32_t>(payload.size()));
  size_t crc_start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), payload.begin(), payload.end());
  uLong crc = crc32(0L, out.data() + crc_start, static_cast<uInt>(4 + payload.size()));
  put_u32(out, static_cast<uint32_t>(crc));
}

const uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

void write_png(const std::string& path, int width, int height, int channels,
               const std::vector<uint8_t>& samples) {
  const size_t row_bytes = static_cast<size_t>(width) * channels;
  std::vector<uint8_t> raw;
  raw.reserve((row_bytes + 1) * height);
  for (int y = 0; y < height; ++y) {
    raw.push_back(0);  // filter type: none
    raw.insert(raw.end(), samples.begin() + y * row_bytes,
               samples.begin() + (y + 1) * row_bytes);
  }

  uLongf compressed_size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<uint8_t> compressed(compressed_size);
  if (compress2(compressed.data(), &compressed_size, raw.data(),
                static_cast<uLong>(raw.size()), Z_DEFAULT_COMPRESSION) != Z_OK) {
    throw Error(ErrorKind::io, "PNG compression failed for " + path);
  }
  compressed.resize(compressed_size);

  std::vector<uint8_t> ihdr;
  put_u32(ihdr, static_cast<uint32_t>(width));
  put_u32(ihdr, static_cast<uint32_t>(height));
  ihdr.push_back(8);                               // bit depth
  ihdr.push_back(channels == 1 ? 0 : 2);           // gray / truecolor
  ihdr.push_back(0);                               // compression
  ihdr.push_back(0);                               // filter
  ihdr.push_back(0);                               // no interlace

  std::vector<uint8_t> out(kPngSignature, kPngSignature + 8);
  append_chunk(out, "IHDR", ihdr);
  append_chunk(out, "IDAT", compressed);
  append_chunk(out, "IEND", {});
  write_file(path, out.data(), out.size());
}

uint32_t get_u32(const uint8_t* p) {
  return (static_cast<uint32_t>(p[0]) << 24) | (static_cast<uint32_t>(p[1]) << 16) |
         (static_cast<uint32_t>(p[2]) << 8) | static_cast<uint32_t>(p[3]);
}

int paeth(int a, int b, int c) {
  int p = a + b - c;
  int pa = std::abs(p - a);
  int pb = std::abs(p - b);
  int pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

// Decodes an 8-bit grayscale or RGB non-interlaced PNG into samples.
void read_png(const std::string& path, int& width, int& height, int& channels,
              std::vector<uint8_t>& samples) {
  std::vector<uint8_t> file = read_file(path);
  if (file.size() < 8 || std::memcmp(file.data(), kPngSignature, 8) != 0) {
    throw Error(ErrorKind::io, path + ": not a PNG file");
  }

  size_t pos = 8;
  bool seen_ihdr = false;
  std::vector<uint8_t> idat;
  width = height = channels = 0;
  while (pos + 8 <= file.size()) {
    uint32_t length = get_u32(&file[pos]);
    if (pos + 12 + length > file.size()) {
      throw Error(ErrorKind::io, path + ": truncated PNG chunk");
    }
    const char* type = reinterpret_cast<const char*>(&file[pos + 4]);
    const uint8_t* payload = &file[pos + 8];
    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (length != 13) throw Error(ErrorKind::io, path + ": bad IHDR");
      width = static_cast<int>(get_u32(payload));
      height = static_cast<int>(get_u32(payload + 4));
      int bit_depth = payload[8];
      int color_type = payload[9];
      int interlace = payload[12];
      if (bit_depth != 8 || (color_type != 0 && color_type != 2) || interlace != 0) {
        throw Error(ErrorKind::io,
                    path + ": unsupported PNG format (need 8-bit gray or RGB, "
                           "non-interlaced)");
      }
      channels = color_type == 0 ? 1 : 3;
      seen_ihdr = true;
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), payload, payload + length);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      break;
    }
    pos += 12 + length;
  }
  if (!seen_ihdr || width <= 0 || height <= 0) {
    throw Error(ErrorKind::io, path + ": missing or invalid IHDR");
  }

  const size_t row_bytes = static_cast<size_t>(width) * channels;
  std::vector<uint8_t> raw((row_bytes + 1) * height);
  uLongf raw_size = static_cast<uLongf>(raw.size());
  if (uncompress(raw.data(), &raw_size, idat.data(),
                 static_cast<uLong>(idat.size())) != Z_OK ||
      raw_size != raw.size()) {
    throw Error(ErrorKind::io, path + ": PNG inflate failed");
  }

  samples.assign(row_bytes * height, 0);
  const int bpp = channels;
  for (int y = 0; y < height; ++y) {
    const uint8_t* src = &raw[y * (row_bytes + 1)];
    uint8_t filter = src[0];
    const uint8_t* line = src + 1;
    uint8_t* dst = &samples[y * row_bytes];
    const uint8_t* prev = y > 0 ? &samples[(y - 1) * row_bytes] : nullptr;
    for (size_t i = 0; i < row_bytes; ++i) {
      int a = i >= static_cast<size_t>(bpp) ? dst[i - bpp] : 0;
      int b = prev ? prev[i] : 0;
      int c = (prev && i >= static_cast<size_t>(bpp)) ? prev[i - bpp] : 0;
      int x = line[i];
      switch (filter) {
        case 0: break;
        case 1: x += a; break;
        case 2: x += b; break;
        case 3: x += (a + b) / 2; break;
        case 4: x += paeth(a, b, c); break;
        default:
          throw Error(ErrorKind::io, path + ": unknown PNG filter type");
      }
      dst[i] = static_cast<uint8_t>(x);
    }
  }
}

std::string lower_extension(const std::string& path) {
  size_t dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

}  // namespace

RgbImage RgbImage::filled(int width, int height, uint8_t r, uint8_t g, uint8_t b) {
  RgbImage img;
  img.width = width;
  img.height = height;
  img.data.resize(static_cast<size_t>(width) * height * 3);
  for (size_t i = 0; i < img.data.size(); i += 3) {
    img.data[i] = r;
    img.data[i + 1] = g;
    img.data[i + 2] = b;
  }
  return img;
}

void RgbImage::set(int x, int y, uint8_t r, uint8_t g, uint8_t b) {
  size_t i = (static_cast<size_t>(y) * width + x) * 3;
  data[i] = r;
  data[i + 1] = g;
  data[i + 2] = b;
}

void write_pgm(const GrayFrame& frame, const std::string& path) {
  frame.validate();
  char header[64];
  int n = std::snprintf(header, sizeof(header), "P5\n%d %d\n255\n", frame.width,
                        frame.height);
  std::vector<uint8_t> out(header, header + n);
  out.reserve(out.size() + frame.pixel_count());
  for (double v : frame.pixels) out.push_back(quantize(v));
  write_file(path, out.data(), out.size());
}

GrayFrame read_pgm(const std::string& path) {
  std::vector<uint8_t> file = read_file(path);
  size_t pos = 0;
  auto next_token = [&]() -> std::string {
    // Skips whitespace and '#' comment lines.
    while (pos < file.size()) {
      if (std::isspace(file[pos])) {
        ++pos;
      } else if (file[pos] == '#') {
        while (pos < file.size() && file[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
    size_t start = pos;
    while (pos < file.size() && !std::isspace(file[pos])) ++pos;
    return std::string(file.begin() + start, file.begin() + pos);
  };

  if (next_token() != "P5") throw Error(ErrorKind::io, path + ": not a P5 PGM");
  int width = std::atoi(next_token().c_str());
  int height = std::atoi(next_token().c_str());
  int maxval = std::atoi(next_token().c_str());
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 255) {
    throw Error(ErrorKind::io, path + ": unsupported PGM header");
  }
  ++pos;  // single whitespace after maxval
  size_t count = static_cast<size_t>(width) * height;
  if (file.size() - pos < count) {
    throw Error(ErrorKind::io, path + ": truncated PGM data");
  }
  GrayFrame frame;
  frame.width = width;
  frame.height = height;
  frame.pixels.resize(count);
  for (size_t i = 0; i < count; ++i) {
    frame.pixels[i] = static_cast<double>(file[pos + i]) / maxval;
  }
  return frame;
}

void write_png_gray(const GrayFrame& frame, const std::string& path) {
  frame.validate();
  std::vector<uint8_t> samples;
  samples.reserve(frame.pixel_count());
  for (double v : frame.pixels) samples.push_back(quantize(v));
  write_png(path, frame.width, frame.height, 1, samples);
}

GrayFrame read_png_gray(const std::string& path) {
  int width, height, channels;
  std::vector<uint8_t> samples;
  read_png(path, width, height, channels, samples);
  if (channels != 1) {
    throw Error(ErrorKind::io, path + ": expected a grayscale PNG");
  }
  GrayFrame frame;
  frame.width = width;
  frame.height = height;
  frame.pixels.resize(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    frame.pixels[i] = samples[i] / 255.0;
  }
  return frame;
}

void write_png_rgb(const RgbImage& image, const std::string& path) {
  write_png(path, image.width, image.height, 3, image.data);
}

void write_frame(const GrayFrame& frame, const std::string& path) {
  std::string ext = lower_extension(path);
  if (ext == "png") {
    write_png_gray(frame, path);
  } else if (ext == "pgm") {
    write_pgm(frame, path);
  } else {
    throw Error(ErrorKind::invalid_argument,
                path + ": unsupported frame format (use .png or .pgm)");
  }
}

GrayFrame read_frame(const std::string& path) {
  std::string ext = lower_extension(path);
  if (ext == "png") return read_png_gray(path);
  if (ext == "pgm") return read_pgm(path);
  throw Error(ErrorKind::invalid_argument,
              path + ": unsupported frame format (use .png or .pgm)");
}

}  // namespace satac
