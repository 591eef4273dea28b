#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace rinkloc {

// 8-bit interleaved raster, 1 (gray) or 3 (RGB) channels.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 3;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(int w, int h, int c, std::uint8_t fill = 0)
      : width(w), height(h), channels(c), pixels(static_cast<std::size_t>(w) * h * c, fill) {}

  std::uint8_t at(int x, int y, int c) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t& at(int x, int y, int c) { return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c]; }

  bool operator==(const Image&) const = default;
};

// Netpbm decoding: P2/P5 (gray) and P3/P6 (RGB). Samples with maxval other
// than 255 are rescaled to 8 bits. Throws InputError on malformed data.
Image decode_pnm(std::span<const std::uint8_t> bytes);
Image read_pnm(const std::filesystem::path& path);

// Binary P6 (3 channels) or P5 (1 channel).
std::vector<std::uint8_t> encode_pnm(const Image& img);
void write_pnm(const std::filesystem::path& path, const Image& img);

}  // namespace rinkloc
