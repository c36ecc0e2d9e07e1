#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include "chromou/errors.hpp"
#include "chromou/glyphs.hpp"
#include "chromou/scene_tasks.hpp"
#include "oracles.hpp"

using namespace chromou;

namespace {

bool boxes_disjoint_with_margin(const std::vector<Placement>& ps) {
  std::vector<BoundingBox> boxes;
  for (const Placement& p : ps) boxes.push_back(vocabulary_outline(p.content, p.center, p.size, p.rotation).bounds());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      const auto& a = boxes[i];
      const auto& b = boxes[j];
      const bool apart = a.max.x() + kPlacementMargin <= b.min.x() - kPlacementMargin ||
                         b.max.x() + kPlacementMargin <= a.min.x() - kPlacementMargin ||
                         a.max.y() + kPlacementMargin <= b.min.y() - kPlacementMargin ||
                         b.max.y() + kPlacementMargin <= a.min.y() - kPlacementMargin;
      if (!apart) return false;
    }
  }
  return true;
}

}  // namespace

TEST(TaskKinds, NineNamesRoundTrip) {
  EXPECT_EQ(std::size(kTaskKinds), 9u);
  std::set<std::string_view> names;
  for (TaskKind k : kTaskKinds) {
    names.insert(to_string(k));
    EXPECT_EQ(parse_task_kind(to_string(k)), k);
  }
  EXPECT_EQ(names.size(), 9u);
  EXPECT_FALSE(parse_task_kind("silhouette"));
}

TEST(Vocabulary, SortedAndDrawable) {
  const auto& v = shape_vocabulary();
  EXPECT_EQ(v, (std::vector<std::string>{"circle", "cross", "heart", "hexagon", "pentagon", "square", "star", "triangle"}));
  EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
  for (const std::string& name : v) {
    const Outline o = vocabulary_outline(name, Point(100, 100), 40.0, 0.0);
    double reach = 0.0;
    for (const Ring& r : o.rings()) {
      for (Eigen::Index i = 0; i < r.cols(); ++i) reach = std::max(reach, (r.col(i) - Point(100, 100)).norm());
    }
    EXPECT_NEAR(reach, 40.0, 1e-9) << name;
    EXPECT_TRUE(point_inside(o, Point(100, 100))) << name;
  }
  EXPECT_THROW(vocabulary_outline("dodecahedron", Point(0, 0), 1.0, 0.0), InputError);
}

TEST(EvalExpression, Grammar) {
  EXPECT_EQ(eval_expression("3+4"), 7);
  EXPECT_EQ(eval_expression("9−9"), 0);
  EXPECT_EQ(eval_expression("7×8"), 56);
  EXPECT_EQ(eval_expression("7 x 8"), 56);
  EXPECT_EQ(eval_expression("2-5"), -3);
  EXPECT_THROW(eval_expression("12+4"), ParseError);
  EXPECT_THROW(eval_expression("3/4"), ParseError);
  EXPECT_THROW(eval_expression("3+"), ParseError);
  EXPECT_THROW(eval_expression(""), ParseError);
  EXPECT_THROW(eval_expression("\xff+1"), ParseError);
}

TEST(GenScene, CountForcedToThree) {
  Rng rng(1);
  TaskConfig cfg;
  cfg.count = 3;
  const SceneSpec s = gen_scene(TaskKind::count, {}, cfg, rng);
  EXPECT_EQ(s.answer, "3");
  EXPECT_EQ(s.placements.size(), 3u);
  EXPECT_EQ(s.answer_format, AnswerFormat::integer);
}

TEST(GenScene, CountPlacementsAreSeparated) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    const SceneSpec s = gen_scene(TaskKind::count, {}, {}, rng);
    const int k = std::stoi(s.answer);
    EXPECT_GE(k, 2);
    EXPECT_LE(k, 6);
    EXPECT_TRUE(boxes_disjoint_with_margin(s.placements)) << seed;
    std::set<std::string> kinds;
    for (const auto& p : s.placements) {
      kinds.insert(p.content);
      const BoundingBox b = vocabulary_outline(p.content, p.center, p.size, p.rotation).bounds();
      EXPECT_GE(b.min.minCoeff(), 0.0);
      EXPECT_LE(b.max.maxCoeff(), 512.0);
    }
    EXPECT_EQ(kinds.size(), 1u);
  }
}

TEST(GenScene, MathExpression) {
  Rng rng(1);
  TaskConfig cfg;
  cfg.expression = "3+4";
  const SceneSpec s = gen_scene(TaskKind::math, {}, cfg, rng);
  EXPECT_EQ(s.answer, "7");
  EXPECT_EQ(s.expression, "3+4");
  cfg.expression = "3/4";
  EXPECT_THROW(gen_scene(TaskKind::math, {}, cfg, rng), ParseError);
}

TEST(GenScene, MathAnswersNeverNegative) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const SceneSpec s = gen_scene(TaskKind::math, {}, {}, rng);
    EXPECT_GE(std::stoi(s.answer), 0) << s.expression;
    EXPECT_EQ(std::stoi(s.answer), eval_expression(s.expression));
  }
}

TEST(GenScene, SizeSortInducedOrder) {
  Rng rng(1);
  TaskConfig cfg;
  cfg.quadrant_scales = std::array<double, 4>{0.5, 0.35, 0.8, 0.65};
  const SceneSpec s = gen_scene(TaskKind::size_sort, {}, cfg, rng);
  EXPECT_EQ(s.answer, "Q2,Q1,Q4,Q3");
  EXPECT_EQ(s.answer_format, AnswerFormat::quadrant_order);
  const SceneSpec c = gen_scene(TaskKind::size_comparison, {}, cfg, rng);
  EXPECT_EQ(c.answer, "Q3");
}

TEST(GenScene, QuadrantShapesStayInsideTheirQuadrant) {
  for (TaskKind kind : {TaskKind::spot_difference, TaskKind::size_comparison, TaskKind::size_sort}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(seed);
      const SceneSpec s = gen_scene(kind, {}, {}, rng);
      ASSERT_EQ(s.placements.size(), 4u);
      std::set<int> quadrants;
      for (const Placement& p : s.placements) {
        quadrants.insert(p.quadrant);
        const double qx0 = ((p.quadrant - 1) % 2) * 256.0;
        const double qy0 = ((p.quadrant - 1) / 2) * 256.0;
        const BoundingBox b = vocabulary_outline(p.content, p.center, p.size, p.rotation).bounds();
        EXPECT_GE(b.min.x(), qx0 + kPlacementMargin - 1e-9);
        EXPECT_GE(b.min.y(), qy0 + kPlacementMargin - 1e-9);
        EXPECT_LE(b.max.x(), qx0 + 256.0 - kPlacementMargin + 1e-9);
        EXPECT_LE(b.max.y(), qy0 + 256.0 - kPlacementMargin + 1e-9);
      }
      EXPECT_EQ(quadrants, (std::set<int>{1, 2, 3, 4}));
      if (kind == TaskKind::size_sort) {
        std::string sorted = s.answer;
        std::erase(sorted, ',');
        std::sort(sorted.begin(), sorted.end());
        EXPECT_EQ(sorted, "1234QQQQ");
      }
    }
  }
}

TEST(GenScene, EnumerationIsAlphabetical) {
  Rng rng(1);
  TaskConfig cfg;
  cfg.shapes = std::vector<std::string>{"star", "cross"};
  const SceneSpec s = gen_scene(TaskKind::enumeration, {}, cfg, rng);
  EXPECT_EQ(s.answer, "cross,star");
  cfg.shapes = std::vector<std::string>{"star", "star"};
  EXPECT_THROW(gen_scene(TaskKind::enumeration, {}, cfg, rng), ParameterError);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng r(seed);
    const SceneSpec e = gen_scene(TaskKind::enumeration, {}, {}, r);
    EXPECT_GE(e.placements.size(), 2u);
    EXPECT_LE(e.placements.size(), 4u);
    EXPECT_TRUE(boxes_disjoint_with_margin(e.placements));
  }
}

TEST(GenScene, SpotDifferenceHasOneOddQuadrant) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const SceneSpec s = gen_scene(TaskKind::spot_difference, {}, {}, rng);
    std::map<std::string, int> counts;
    for (const auto& p : s.placements) ++counts[p.content];
    ASSERT_EQ(counts.size(), 2u);
    for (const auto& p : s.placements) {
      if (counts[p.content] == 1) EXPECT_EQ(s.answer, "Q" + std::to_string(p.quadrant));
    }
  }
}

TEST(GenScene, RecognitionContent) {
  std::set<AnswerFormat> formats;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    const SceneSpec s = gen_scene(TaskKind::recognition, {}, {}, rng);
    ASSERT_EQ(s.placements.size(), 1u);
    formats.insert(s.answer_format);
    if (s.answer_format == AnswerFormat::integer) {
      EXPECT_GE(std::stoi(s.answer), 100);
      EXPECT_LE(std::stoi(s.answer), 999);
    } else {
      EXPECT_GE(s.answer.size(), 3u);
      EXPECT_LE(s.answer.size(), 6u);
      EXPECT_TRUE(std::all_of(s.answer.begin(), s.answer.end(), [](char c) { return c >= 'A' && c <= 'Z'; }));
    }
    EXPECT_EQ(s.question.find('{'), std::string::npos);
  }
  EXPECT_EQ(formats.size(), 2u);
}

TEST(GenScene, RotationAngles) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Rng rng(seed);
    const SceneSpec s = gen_scene(TaskKind::rotation, {}, {}, rng);
    const double nearest = std::round(s.rotation_deg / 90.0) * 90.0;
    EXPECT_TRUE(nearest == 90.0 || nearest == 180.0 || nearest == 270.0) << s.rotation_deg;
    EXPECT_LE(std::abs(s.rotation_deg - nearest), 10.0);
    EXPECT_NEAR(s.placements[0].rotation, s.rotation_deg * std::numbers::pi / 180.0, 1e-12);
  }
}

TEST(GenScene, OcclusionFractionInBand) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    Rng rng(seed);
    const SceneSpec s = gen_scene(TaskKind::occlusion, {}, {}, rng);
    EXPECT_GE(s.occluders.size(), 2u);
    EXPECT_GE(s.occluded_fraction, kMinOccludedFraction);
    EXPECT_LE(s.occluded_fraction, kMaxOccludedFraction);
    const BitMask clean = scene_mask(s, {});
    EXPECT_DOUBLE_EQ(apply_occluders(clean, s.occluders).occluded_fraction, s.occluded_fraction);
  }
}

TEST(GenScene, DeterministicForSeed) {
  for (TaskKind kind : kTaskKinds) {
    Rng a(123), b(123);
    const SceneSpec sa = gen_scene(kind, {}, {}, a);
    const SceneSpec sb = gen_scene(kind, {}, {}, b);
    EXPECT_EQ(sa.answer, sb.answer);
    EXPECT_EQ(sa.question, sb.question);
    ASSERT_EQ(sa.placements.size(), sb.placements.size());
    for (std::size_t i = 0; i < sa.placements.size(); ++i) {
      EXPECT_EQ(sa.placements[i].center, sb.placements[i].center);
      EXPECT_EQ(sa.placements[i].size, sb.placements[i].size);
    }
  }
}

TEST(DeriveAnswer, MatchesStoredAnswerAcrossSeeds) {
  for (TaskKind kind : kTaskKinds) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Rng rng(seed * 31 + 7);
      const SceneSpec s = gen_scene(kind, {}, {}, rng);
      EXPECT_EQ(derive_answer(s), s.answer) << to_string(kind) << " seed " << seed;
    }
  }
}

TEST(DeriveAnswer, SizeComparisonUsesPolygonArea) {
  SceneSpec s;
  s.task = TaskKind::size_comparison;
  // A star of larger circumradius can still have less area than a hexagon.
  s.placements = {{ContentKind::shape, "star", Point(128, 128), 60.0, 0.0, 1},
                  {ContentKind::shape, "hexagon", Point(384, 128), 50.0, 0.0, 2}};
  EXPECT_LT(polygon_area(vocabulary_outline("star", Point(0, 0), 60.0, 0.0)),
            polygon_area(vocabulary_outline("hexagon", Point(0, 0), 50.0, 0.0)));
  EXPECT_EQ(derive_answer(s), "Q2");
}

TEST(SceneMask, TextAndAssetContent) {
  SceneSpec s;
  s.task = TaskKind::recognition;
  s.placements = {{ContentKind::text, "HI", Point(256, 256), 20.0, 0.0, 0}};
  const BitMask m = scene_mask(s, {});
  EXPECT_GT(m.foreground_count(), 0u);

  ContentSource content;
  BitMask blob(512, 512);
  for (int y = 100; y < 200; ++y) {
    for (int x = 50; x < 150; ++x) blob.set(x, y, true);
  }
  content.add_asset({"owl", blob});
  EXPECT_THROW(content.add_asset({"owl", blob}), InputError);
  EXPECT_THROW(content.add_asset({"void", BitMask(512, 512)}), InputError);
  SceneSpec a;
  a.task = TaskKind::recognition;
  a.placements = {{ContentKind::asset, "owl", Point(256, 256), 1.0, 0.0, 0}};
  EXPECT_EQ(scene_mask(a, content), blob);
  EXPECT_THROW(scene_mask(a, {}), InputError);
}

TEST(ContentSource, LoadsDirectoryAndRecognitionCanPickAssets) {
  const auto dir = std::filesystem::temp_directory_path() / "chromou_assets_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "zebra.pbm", std::ios::binary);
    out << "P4\n8 8\n";
    const unsigned char rows[8] = {0x00, 0x3C, 0x7E, 0x7E, 0x7E, 0x7E, 0x3C, 0x00};
    out.write(reinterpret_cast<const char*>(rows), 8);
  }
  std::ofstream(dir / "notes.txt") << "ignored";
  const ContentSource content = ContentSource::from_directory(dir);
  ASSERT_EQ(content.assets().size(), 1u);
  EXPECT_EQ(content.assets()[0].id, "zebra");
  EXPECT_EQ(content.assets()[0].mask.width(), 512);
  EXPECT_NEAR(coverage(content.assets()[0].mask), 32.0 / 64.0, 1e-12);

  bool saw_asset = false;
  for (std::uint64_t seed = 0; seed < 30 && !saw_asset; ++seed) {
    Rng rng(seed);
    const SceneSpec s = gen_scene(TaskKind::recognition, content, {}, rng);
    if (s.placements[0].kind == ContentKind::asset) {
      saw_asset = true;
      EXPECT_EQ(s.answer, "zebra");
      EXPECT_NE(s.question.find("animal"), std::string::npos);
    }
  }
  EXPECT_TRUE(saw_asset);
  EXPECT_THROW(ContentSource::from_directory(dir / "missing"), InputError);
  std::filesystem::remove_all(dir);
}

TEST(QuestionTemplates, BuiltinCoversAllTasksAndHashes) {
  const QuestionTemplates& t = QuestionTemplates::builtin();
  EXPECT_EQ(t.hash(), sha256_hex(t.source()));
  EXPECT_EQ(t.hash().size(), 64u);
  for (TaskKind k : kTaskKinds) EXPECT_FALSE(t.render(k, {{"content_type", "word"}}).empty());
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(QuestionTemplates, ParseErrors) {
  EXPECT_THROW(QuestionTemplates::parse("count = How many?\n"), ConfigError);
  std::string all;
  for (TaskKind k : kTaskKinds) all += std::string(to_string(k)) + " = Q {x}\n";
  const QuestionTemplates t = QuestionTemplates::parse(all);
  EXPECT_EQ(t.render(TaskKind::math, {{"x", "7"}}), "Q 7");
  EXPECT_THROW(QuestionTemplates::parse(all + "math = again\n"), ConfigError);
  EXPECT_THROW(QuestionTemplates::parse(all + "dance = no\n"), ConfigError);
  EXPECT_THROW(QuestionTemplates::parse(all + "no separator\n"), ConfigError);
  EXPECT_NE(QuestionTemplates::parse(all + "# comment\n").hash(), t.hash());
}

TEST(Glyphs, Utf8AndCoverage) {
  EXPECT_EQ(decode_utf8("A−×"), (std::u32string{U'A', U'−', U'×'}));
  EXPECT_THROW(decode_utf8("\xe2\x88"), InputError);
  EXPECT_THROW(decode_utf8("\x80"), InputError);
  for (char32_t c = U'A'; c <= U'Z'; ++c) EXPECT_TRUE(has_glyph(c));
  for (char32_t c = U'0'; c <= U'9'; ++c) EXPECT_TRUE(has_glyph(c));
  EXPECT_TRUE(has_glyph(U'+'));
  EXPECT_TRUE(has_glyph(U'−'));
  EXPECT_TRUE(has_glyph(U'×'));
  EXPECT_FALSE(has_glyph(U'?'));
  EXPECT_THROW(text_outlines("A?", Point(0, 0), 4.0, 0.0), InputError);
}

TEST(Glyphs, TextFitsItsDisc) {
  for (std::size_t n : {1u, 3u, 6u}) {
    const double unit = fit_text_unit(n, 460.0, 28.0);
    const Point ext = text_extent_units(n) * unit;
    EXPECT_LE(ext.norm(), 460.0 + 1e-9);
    std::string text(n, '8');
    for (double rot : {0.0, 0.7, 2.0}) {
      const auto outlines = text_outlines(text, Point(256, 256), unit, rot);
      for (const Outline& o : outlines) {
        for (Eigen::Index i = 0; i < o.rings()[0].cols(); ++i) {
          EXPECT_LE((o.rings()[0].col(i) - Point(256, 256)).norm(), 230.0 + 1e-9);
        }
      }
    }
  }
}

TEST(Glyphs, RasterAreaMatchesLitCells) {
  // The digit 1 in the block font; the unit is a whole number of pixels and the
  // origin lands on the pixel grid, so the raster count equals the cell area.
  const auto outlines = text_outlines("1", Point(256, 256), 10.0, 0.0);
  double area = 0.0;
  for (const Outline& o : outlines) area += polygon_area(o);
  EXPECT_EQ(static_cast<double>(rasterize(outlines).foreground_count()), area);
}
