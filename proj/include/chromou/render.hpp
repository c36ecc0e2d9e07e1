#pragma once

#include <vector>

#include "chromou/packing.hpp"
#include "chromou/palette.hpp"
#include "chromou/png_io.hpp"
#include "chromou/scene_tasks.hpp"

namespace chromou {

struct RenderResult {
  Image image;
  std::vector<PackedElement> elements;
  /// Figure mask used for classification (occluders applied).
  BitMask mask{1, 1};
  ColorSRGB base;
  std::size_t figure_elements = 0;
  std::size_t ground_elements = 0;
  double disk_coverage = 0.0;
};

/// Classification threshold on inside_fraction.
inline constexpr double kFigureThreshold = 0.5;

/// Scene mask -> occluders -> pack -> classify -> fill geometry -> colours ->
/// scan-fill onto a base of the linear-mean background colour. Throws
/// DegenerateSceneError when no element lands on the figure side.
RenderResult render_camouflage(const SceneSpec& scene, const ContentSource& content, const PaletteConfig& palette,
                               const PackingParams& packing, FillFamily fill, Rng& rng);

/// Same pipeline starting from a precomputed figure mask.
RenderResult render_camouflage(const BitMask& figure_mask, const PaletteConfig& palette, const PackingParams& packing,
                               FillFamily fill, Rng& rng);

/// Scan-fills each element's fill outline (subsample majority, no blending)
/// onto a canvas filled with `base`.
Image paint_elements(int width, int height, std::span<const PackedElement> elements, const PaletteConfig& palette,
                     ColorSRGB base);

/// Black figure on white, without occluders.
Image render_silhouette(const SceneSpec& scene, const ContentSource& content);
Image render_silhouette(const BitMask& mask);

}  // namespace chromou
