#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "chromou/geometry.hpp"

namespace chromou {

inline constexpr int kCanvasSize = 512;

/// Row-major per-pixel foreground flags.
class BitMask {
 public:
  BitMask(int width, int height, bool fill = false);

  int width() const { return width_; }
  int height() const { return height_; }
  bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool value) { bits_[index(x, y)] = value ? 1 : 0; }
  std::size_t foreground_count() const;
  bool empty() const { return foreground_count() == 0; }

  bool operator==(const BitMask&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
};

/// 8-bit single-channel bitmap.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

struct Occluder {
  Point center;
  double radius = 0.0;
};

struct OcclusionResult {
  BitMask mask;
  double occluded_fraction = 0.0;
};

/// Subsample offsets within a pixel; 0.5 px spacing, 2x2 per pixel.
inline constexpr double kSubsampleOffsets[2] = {0.25, 0.75};

/// A pixel is foreground when at least 2 of its 4 subsamples fall inside the
/// union of `outlines`. Only pixels within an outline bounding box are tested.
BitMask rasterize(std::span<const Outline> outlines, int width = kCanvasSize, int height = kCanvasSize);

/// Majority-of-4 subsample test for a single pixel against one outline.
bool pixel_covered(const Outline& outline, int x, int y);

/// Dark-on-light: foreground iff value < threshold. Nearest-neighbour resampled
/// to the target size when dimensions differ.
BitMask import_mask(const GrayImage& image, int threshold = 128, int width = kCanvasSize,
                    int height = kCanvasSize);

/// Reads an 8-bit PNG (any colour type, converted to luminance) or a binary
/// PBM (P4). Throws InputError when the file cannot be decoded.
GrayImage load_gray_image(const std::filesystem::path& path);

/// Clears foreground pixels whose centre lies in any occluder disk.
/// Throws InputError if `mask` has no foreground.
OcclusionResult apply_occluders(const BitMask& mask, std::span<const Occluder> occluders);

/// Foreground pixel fraction in [0, 1].
double coverage(const BitMask& mask);

/// Nearest-neighbour rotation about the canvas centre, used for bitmap assets.
BitMask rotate_mask(const BitMask& mask, double rotation);

BitMask mask_union(const BitMask& a, const BitMask& b);

}  // namespace chromou
