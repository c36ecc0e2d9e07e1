#include "chromou/render.hpp"

#include <algorithm>
#include <cmath>

#include "chromou/errors.hpp"

namespace chromou {

namespace {

void put(Image& img, int x, int y, ColorSRGB c) {
  std::uint8_t* px = img.at(x, y);
  px[0] = c.r;
  px[1] = c.g;
  px[2] = c.b;
}

}  // namespace

Image paint_elements(int width, int height, std::span<const PackedElement> elements, const PaletteConfig& palette,
                     ColorSRGB base) {
  Image img(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) put(img, x, y, base);
  }
  for (const PackedElement& e : elements) {
    const auto& side = e.side == Side::figure ? palette.fg : palette.bg;
    const ColorSRGB color = side.at(static_cast<std::size_t>(e.color_index));
    const double r = e.radius * kFillInset;
    const Outline outline = fill_outline(e);
    const int x0 = std::max(0, static_cast<int>(std::floor(e.center.x() - r)));
    const int x1 = std::min(width - 1, static_cast<int>(std::floor(e.center.x() + r)));
    const int y0 = std::max(0, static_cast<int>(std::floor(e.center.y() - r)));
    const int y1 = std::min(height - 1, static_cast<int>(std::floor(e.center.y() + r)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        if (pixel_covered(outline, x, y)) put(img, x, y, color);
      }
    }
  }
  return img;
}

RenderResult render_camouflage(const BitMask& figure_mask, const PaletteConfig& palette, const PackingParams& packing,
                               FillFamily fill, Rng& rng) {
  if (palette.fg.empty() || palette.bg.empty()) throw ParameterError("palette sides must be non-empty");
  RenderResult out;
  out.mask = figure_mask;
  out.elements = pack(packing, figure_mask.width(), figure_mask.height(), rng);
  classify(out.elements, figure_mask, kFigureThreshold);
  for (PackedElement& e : out.elements) instantiate_fill(e, fill, rng);
  assign_colors(out.elements, palette, rng);

  out.figure_elements = static_cast<std::size_t>(
      std::count_if(out.elements.begin(), out.elements.end(), [](const PackedElement& e) { return e.side == Side::figure; }));
  out.ground_elements = out.elements.size() - out.figure_elements;
  if (out.figure_elements == 0) throw DegenerateSceneError("packing produced no figure-side elements");
  out.disk_coverage = disk_coverage(out.elements, figure_mask.width(), figure_mask.height());
  out.base = linear_mean(palette.bg);
  out.image = paint_elements(figure_mask.width(), figure_mask.height(), out.elements, palette, out.base);
  return out;
}

RenderResult render_camouflage(const SceneSpec& scene, const ContentSource& content, const PaletteConfig& palette,
                               const PackingParams& packing, FillFamily fill, Rng& rng) {
  return render_camouflage(occluded_scene_mask(scene, content), palette, packing, fill, rng);
}

Image render_silhouette(const BitMask& mask) {
  Image img(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      const std::uint8_t v = mask.at(x, y) ? 0 : 255;
      put(img, x, y, {v, v, v});
    }
  }
  return img;
}

Image render_silhouette(const SceneSpec& scene, const ContentSource& content) {
  return render_silhouette(scene_mask(scene, content));
}

}  // namespace chromou
