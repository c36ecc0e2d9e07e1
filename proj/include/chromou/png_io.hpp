#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace chromou {

/// Row-major 8-bit RGB pixels.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3, 0) {}

  std::uint8_t* at(int x, int y) {
    return pixels.data() + (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 3;
  }
  const std::uint8_t* at(int x, int y) const {
    return pixels.data() + (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 3;
  }

  bool operator==(const Image&) const = default;
};

/// 8-bit truecolour PNG with no ancillary chunks. Filter type and zlib level are
/// fixed so the same image always encodes to the same bytes.
std::vector<std::uint8_t> encode_png(const Image& img);

/// Decodes any 8-bit or 16-bit PNG to RGB (alpha dropped, palettes expanded).
/// Throws InputError on malformed data.
Image decode_png(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace chromou
