#include <gtest/gtest.h>

#include <set>

#include "chromou/errors.hpp"
#include "chromou/png_io.hpp"
#include "chromou/render.hpp"
#include "oracles.hpp"

using namespace chromou;

namespace {

SceneSpec full_square_scene() {
  SceneSpec s;
  s.task = TaskKind::count;
  // Square with circumradius large enough to cover the canvas.
  s.placements = {{ContentKind::shape, "square", Point(256, 256), 400.0, 0.0, 0}};
  return s;
}

PackingParams quick_packing() {
  PackingParams p;
  p.max_failures = 500;
  return p;
}

ColorSRGB pixel(const Image& img, const Point& c) {
  const std::uint8_t* px = img.at(static_cast<int>(c.x()), static_cast<int>(c.y()));
  return {px[0], px[1], px[2]};
}

}  // namespace

TEST(RenderCamouflage, FullFigureUsesOnlyForeground) {
  const PaletteConfig& pal = builtin_palettes()[0];
  Rng rng(3);
  const RenderResult r = render_camouflage(full_square_scene(), {}, pal, quick_packing(), FillFamily::dots, rng);
  EXPECT_EQ(r.ground_elements, 0u);
  ASSERT_GT(r.figure_elements, 0u);
  const std::set<ColorSRGB> fg(pal.fg.begin(), pal.fg.end());
  for (const PackedElement& e : r.elements) {
    EXPECT_EQ(e.side, Side::figure);
    EXPECT_TRUE(fg.contains(pixel(r.image, e.center)));
  }
  for (ColorSRGB c : pal.bg) {
    for (std::size_t i = 0; i < r.image.pixels.size(); i += 3) {
      ASSERT_FALSE(r.image.pixels[i] == c.r && r.image.pixels[i + 1] == c.g && r.image.pixels[i + 2] == c.b);
    }
  }
}

TEST(RenderCamouflage, EmptyMaskIsDegenerate) {
  Rng rng(3);
  EXPECT_THROW(render_camouflage(BitMask(512, 512), builtin_palettes()[0], quick_packing(), FillFamily::dots, rng),
               DegenerateSceneError);
}

TEST(RenderCamouflage, EmptyMaskElementsAreAllGround) {
  // Same pipeline without the final figure check: every element classifies to ground.
  Rng rng(3);
  auto els = pack(quick_packing(), 512, 512, rng);
  classify(els, BitMask(512, 512));
  for (const auto& e : els) EXPECT_EQ(e.side, Side::ground);
}

TEST(RenderCamouflage, DeterministicBytes) {
  Rng sr(5);
  const SceneSpec scene = gen_scene(TaskKind::count, {}, {}, sr);
  for (FillFamily fill : kFillFamilies) {
    Rng a(77), b(77);
    const RenderResult ra = render_camouflage(scene, {}, builtin_palettes()[4], PackingParams{}, fill, a);
    const RenderResult rb = render_camouflage(scene, {}, builtin_palettes()[4], PackingParams{}, fill, b);
    EXPECT_EQ(ra.image, rb.image);
    EXPECT_EQ(encode_png(ra.image), encode_png(rb.image));
  }
}

TEST(RenderCamouflage, ColourSupportAndSideDiscipline) {
  Rng sr(8);
  const SceneSpec scene = gen_scene(TaskKind::size_sort, {}, {}, sr);
  const PaletteConfig& pal = builtin_palettes()[7];
  for (FillFamily fill : kFillFamilies) {
    Rng rng(21);
    const RenderResult r = render_camouflage(scene, {}, pal, PackingParams{}, fill, rng);
    EXPECT_EQ(r.base, linear_mean(pal.bg));
    std::set<std::array<std::uint8_t, 3>> expected{{r.base.r, r.base.g, r.base.b}};
    for (const PackedElement& e : r.elements) {
      const ColorSRGB c = (e.side == Side::figure ? pal.fg : pal.bg).at(static_cast<std::size_t>(e.color_index));
      expected.insert({c.r, c.g, c.b});
      // Element centres are inside every fill shape, and disks never overlap.
      EXPECT_EQ(pixel(r.image, e.center), c);
    }
    EXPECT_EQ(oracle::color_support(r.image), expected) << to_string(fill);

    // Side labels are recoverable from the stored elements and the mask.
    std::vector<PackedElement> again = r.elements;
    classify(again, r.mask, kFigureThreshold);
    for (std::size_t i = 0; i < again.size(); ++i) EXPECT_EQ(again[i].side, r.elements[i].side);
  }
}

TEST(RenderCamouflage, OcclusionUsesOccludedMask) {
  Rng sr(4);
  const SceneSpec scene = gen_scene(TaskKind::occlusion, {}, {}, sr);
  ASSERT_FALSE(scene.occluders.empty());
  Rng rng(2);
  const RenderResult r = render_camouflage(scene, {}, builtin_palettes()[2], PackingParams{}, FillFamily::dots, rng);
  EXPECT_EQ(r.mask, occluded_scene_mask(scene, {}));
  EXPECT_LT(r.mask.foreground_count(), scene_mask(scene, {}).foreground_count());
}

TEST(RenderSilhouette, BlackOnWhite) {
  const Image full = render_silhouette(full_square_scene(), {});
  for (std::uint8_t v : full.pixels) ASSERT_EQ(v, 0);
  SceneSpec empty;
  const Image blank = render_silhouette(empty, {});
  EXPECT_EQ(blank.width, 512);
  for (std::uint8_t v : blank.pixels) ASSERT_EQ(v, 255);
}

TEST(RenderSilhouette, BlackCountEqualsMaskCoverage) {
  Rng sr(6);
  const SceneSpec scene = gen_scene(TaskKind::occlusion, {}, {}, sr);
  const Image img = render_silhouette(scene, {});
  std::size_t black = 0;
  for (std::size_t i = 0; i < img.pixels.size(); i += 3) black += img.pixels[i] == 0 ? 1 : 0;
  const BitMask clean = scene_mask(scene, {});
  EXPECT_EQ(static_cast<double>(black), coverage(clean) * 512.0 * 512.0);
}

TEST(Png, RoundTripAndStableBytes) {
  Image img(37, 19);
  Rng rng(1);
  for (auto& v : img.pixels) v = static_cast<std::uint8_t>(rng.below(256));
  const auto bytes = encode_png(img);
  EXPECT_EQ(decode_png(bytes), img);
  EXPECT_EQ(encode_png(img), bytes);
}

TEST(Png, OneBlackPixelAndNoAncillaryChunks) {
  const Image one(1, 1);
  const auto bytes = encode_png(one);
  const Image back = decode_png(bytes);
  ASSERT_EQ(back.width, 1);
  ASSERT_EQ(back.height, 1);
  EXPECT_EQ(back.pixels, (std::vector<std::uint8_t>{0, 0, 0}));

  // Walk the chunk list: only IHDR, IDAT and IEND, colour type 2, depth 8.
  ASSERT_GT(bytes.size(), 33u);
  std::size_t pos = 8;
  std::set<std::string> types;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t len = (std::uint32_t{bytes[pos]} << 24) | (std::uint32_t{bytes[pos + 1]} << 16) |
                              (std::uint32_t{bytes[pos + 2]} << 8) | bytes[pos + 3];
    types.insert(std::string(bytes.begin() + static_cast<long>(pos) + 4, bytes.begin() + static_cast<long>(pos) + 8));
    pos += 12 + len;
  }
  EXPECT_EQ(pos, bytes.size());
  EXPECT_EQ(types, (std::set<std::string>{"IHDR", "IDAT", "IEND"}));
  EXPECT_EQ(bytes[24], 8);
  EXPECT_EQ(bytes[25], 2);
}

TEST(Png, MalformedInputThrows) {
  EXPECT_THROW(decode_png(std::vector<std::uint8_t>{0x89, 'P', 'N', 'G'}), InputError);
}
