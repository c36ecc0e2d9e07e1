#include "chromou/scene_tasks.hpp"

#include <openssl/evp.h>
#include <Eigen/Geometry>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

#include "chromou/embedded_data.hpp"
#include "chromou/errors.hpp"
#include "chromou/glyphs.hpp"

namespace chromou {

namespace {

constexpr std::array<std::string_view, 9> kTaskNames = {
    "count", "enumeration", "spot_difference", "size_comparison", "size_sort",
    "recognition", "rotation", "occlusion", "math"};

constexpr std::array<std::string_view, 5> kFormatNames = {"integer", "word", "quadrant-label", "quadrant-order",
                                                          "free-text"};

constexpr std::string_view kQuadrantLegend = "Q1 top-left, Q2 top-right, Q3 bottom-left, Q4 bottom-right";

}  // namespace

std::string_view to_string(TaskKind kind) { return kTaskNames[static_cast<std::size_t>(kind)]; }

std::optional<TaskKind> parse_task_kind(std::string_view name) {
  for (std::size_t i = 0; i < kTaskNames.size(); ++i) {
    if (kTaskNames[i] == name) return static_cast<TaskKind>(i);
  }
  return std::nullopt;
}

std::string_view to_string(AnswerFormat format) { return kFormatNames[static_cast<std::size_t>(format)]; }

std::optional<AnswerFormat> parse_answer_format(std::string_view name) {
  for (std::size_t i = 0; i < kFormatNames.size(); ++i) {
    if (kFormatNames[i] == name) return static_cast<AnswerFormat>(i);
  }
  return std::nullopt;
}

std::string_view to_string(ContentKind kind) {
  switch (kind) {
    case ContentKind::shape: return "shape";
    case ContentKind::text: return "text";
    case ContentKind::asset: return "asset";
  }
  return "shape";
}

std::optional<ContentKind> parse_content_kind(std::string_view name) {
  for (ContentKind k : {ContentKind::shape, ContentKind::text, ContentKind::asset}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

const std::vector<std::string>& shape_vocabulary() {
  static const std::vector<std::string> names{"circle",  "cross",  "heart", "hexagon",
                                              "pentagon", "square", "star",  "triangle"};
  return names;
}

namespace {

// Heart curve centred on its bounding box and scaled to unit circumradius.
const Ring& unit_heart() {
  static const Ring ring = [] {
    constexpr int kSamples = 64;
    Ring r(2, kSamples);
    for (int k = 0; k < kSamples; ++k) {
      const double t = 2.0 * std::numbers::pi * k / kSamples;
      const double s = std::sin(t);
      r(0, k) = 16.0 * s * s * s;
      r(1, k) = -(13.0 * std::cos(t) - 5.0 * std::cos(2 * t) - 2.0 * std::cos(3 * t) - std::cos(4 * t));
    }
    const Point mid = (r.rowwise().minCoeff() + r.rowwise().maxCoeff()) / 2.0;
    r.colwise() -= mid;
    r /= r.colwise().norm().maxCoeff();
    return r;
  }();
  return ring;
}

}  // namespace

Outline vocabulary_outline(std::string_view name, const Point& center, double radius, double rotation) {
  constexpr double up = -std::numbers::pi / 2.0;
  if (name == "circle") return make_outline(CircleApprox{}, center, radius, rotation);
  if (name == "cross") return make_outline(Cross{}, center, radius, rotation);
  if (name == "hexagon") return make_outline(RegularPolygon{6}, center, radius, rotation);
  if (name == "pentagon") return make_outline(RegularPolygon{5}, center, radius, up + rotation);
  if (name == "square") return make_outline(RegularPolygon{4}, center, radius, std::numbers::pi / 4.0 + rotation);
  if (name == "star") return make_outline(Star{}, center, radius, up + rotation);
  if (name == "triangle") return make_outline(RegularPolygon{3}, center, radius, up + rotation);
  if (name == "heart") {
    if (!(radius > 0.0)) throw ParameterError("radius must be positive");
    const Eigen::Matrix2d rot = Eigen::Rotation2Dd(rotation).toRotationMatrix();
    return Outline(Ring((radius * (rot * unit_heart())).colwise() + center));
  }
  throw InputError("unknown vocabulary shape '" + std::string(name) + "'");
}

const std::vector<std::string>& builtin_words() {
  static const std::vector<std::string> words{
      "APPLE", "BEAR",  "BIRD",  "BOAT",   "BOOK",   "BRIDGE", "CAKE",   "CASTLE", "CAT",   "CLOUD",
      "DOG",   "DOOR",  "FISH",  "FOREST", "FROG",   "GARDEN", "HORSE",  "HOUSE",  "KING",  "LAKE",
      "LAMP",  "LEAF",  "LION",  "MOON",   "OCEAN",  "ORANGE", "PLANET", "PLANT",  "RAIN",  "RIVER",
      "ROCK",  "ROSE",  "SHIP",  "SNOW",   "STONE",  "SUN",    "TIGER",  "TREE",   "WIND",  "WOLF",
      "ZEBRA", "JUMP",  "QUIET", "VALLEY", "YACHT",  "EXIT"};
  return words;
}

ContentSource ContentSource::from_directory(const std::filesystem::path& dir, int canvas) {
  if (!std::filesystem::is_directory(dir)) throw InputError("asset directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".pbm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.stem().string() < b.stem().string(); });
  ContentSource source;
  for (const auto& path : files) {
    source.add_asset({path.stem().string(), import_mask(load_gray_image(path), 128, canvas, canvas)});
  }
  return source;
}

void ContentSource::add_asset(SilhouetteAsset asset) {
  if (find_asset(asset.id) != nullptr) throw InputError("duplicate silhouette id " + asset.id);
  if (asset.mask.empty()) throw InputError("silhouette " + asset.id + " has no foreground");
  assets_.push_back(std::move(asset));
}

const SilhouetteAsset* ContentSource::find_asset(std::string_view id) const {
  for (const SilhouetteAsset& a : assets_) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return hex.str();
}

QuestionTemplates QuestionTemplates::parse(std::string_view text) {
  QuestionTemplates t;
  t.source_ = std::string(text);
  t.hash_ = sha256_hex(text);
  std::istringstream lines(t.source_);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw ConfigError("template line " + std::to_string(line_no) + " lacks ' = '");
    const std::string key = line.substr(first, eq - first);
    std::string body = line.substr(eq + 3);
    while (!body.empty() && (body.back() == '\r' || body.back() == ' ')) body.pop_back();
    const auto kind = parse_task_kind(key);
    if (!kind) throw ConfigError("unknown task '" + key + "' in question templates");
    if (!t.templates_.emplace(*kind, body).second) throw ConfigError("duplicate template for " + key);
  }
  if (t.templates_.size() != std::size(kTaskKinds)) throw ConfigError("question templates must cover all nine tasks");
  return t;
}

const QuestionTemplates& QuestionTemplates::builtin() {
  static const QuestionTemplates t = parse(embedded::kQuestionTemplates);
  return t;
}

std::string QuestionTemplates::render(TaskKind kind, const std::map<std::string, std::string>& slots) const {
  std::string out = templates_.at(kind);
  for (const auto& [name, value] : slots) {
    const std::string token = "{" + name + "}";
    for (auto pos = out.find(token); pos != std::string::npos; pos = out.find(token, pos + value.size())) {
      out.replace(pos, token.size(), value);
    }
  }
  return out;
}

int eval_expression(std::string_view expr) {
  std::u32string cps;
  try {
    cps = decode_utf8(expr);
  } catch (const InputError&) {
    throw ParseError("expression is not valid UTF-8");
  }
  std::erase(cps, U' ');
  if (cps.size() != 3) throw ParseError("expression must be '<digit> <op> <digit>': " + std::string(expr));
  const auto digit = [&](char32_t c) {
    if (c < U'0' || c > U'9') throw ParseError("operand is not a single digit: " + std::string(expr));
    return static_cast<int>(c - U'0');
  };
  const int a = digit(cps[0]);
  const int b = digit(cps[2]);
  switch (cps[1]) {
    case U'+': return a + b;
    case U'-':
    case U'−': return a - b;
    case U'x':
    case U'X':
    case U'*':
    case U'×': return a * b;
    default: throw ParseError("unsupported operator in " + std::string(expr));
  }
}

namespace {

std::string quadrant_label(int q) { return "Q" + std::to_string(q); }

Point quadrant_center(int q, int canvas) {
  const double half = canvas / 2.0;
  const int col = (q - 1) % 2;
  const int row = (q - 1) / 2;
  return {half * col + half / 2.0, half * row + half / 2.0};
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += sep;
    out += items[i];
  }
  return out;
}

std::vector<Placement> place_free(const std::vector<std::string>& names, double r_lo, double r_hi, int canvas,
                                  Rng& rng) {
  std::vector<Placement> placed;
  std::vector<BoundingBox> boxes;
  int rejections = 0;
  for (const std::string& name : names) {
    for (;;) {
      const double r = rng.uniform(r_lo, r_hi);
      const double lo = r + kPlacementMargin;
      const double hi = canvas - r - kPlacementMargin;
      const Point c(rng.uniform(lo, hi), rng.uniform(lo, hi));
      BoundingBox box = vocabulary_outline(name, c, r, 0.0).bounds();
      box.min.array() -= kPlacementMargin;
      box.max.array() += kPlacementMargin;
      const bool clash = std::any_of(boxes.begin(), boxes.end(), [&](const BoundingBox& o) {
        return box.min.x() < o.max.x() && o.min.x() < box.max.x() && box.min.y() < o.max.y() && o.min.y() < box.max.y();
      });
      if (!clash) {
        boxes.push_back(box);
        placed.push_back({ContentKind::shape, name, c, r, 0.0, 0});
        break;
      }
      if (++rejections >= kPlacementRetries) {
        throw GenerationError("could not place " + std::to_string(names.size()) + " shapes without overlap");
      }
    }
  }
  return placed;
}

struct RecognitionItem {
  Placement placement;
  std::string answer;
  AnswerFormat format;
  std::string content_type;
};

RecognitionItem pick_recognition(const ContentSource& content, const TaskConfig& cfg, Rng& rng) {
  const Point center(cfg.canvas / 2.0, cfg.canvas / 2.0);
  const auto text_item = [&](std::string text, AnswerFormat format, std::string type) {
    const double unit = fit_text_unit(decode_utf8(text).size(), 0.9 * cfg.canvas, 28.0);
    return RecognitionItem{{ContentKind::text, text, center, unit, 0.0, 0}, text, format, std::move(type)};
  };
  if (cfg.recognition_text) {
    const bool numeric = std::all_of(cfg.recognition_text->begin(), cfg.recognition_text->end(),
                                     [](unsigned char c) { return std::isdigit(c); });
    return text_item(*cfg.recognition_text, numeric ? AnswerFormat::integer : AnswerFormat::word,
                     numeric ? "number" : "word");
  }
  const std::uint64_t choices = content.assets().empty() ? 2 : 3;
  switch (rng.below(choices)) {
    case 0: return text_item(rng.pick(std::span<const std::string>(builtin_words())), AnswerFormat::word, "word");
    case 1: return text_item(std::to_string(rng.between(100, 999)), AnswerFormat::integer, "3-digit number");
    default: {
      const SilhouetteAsset& asset = rng.pick(std::span<const SilhouetteAsset>(content.assets()));
      return {{ContentKind::asset, asset.id, center, 1.0, 0.0, 0}, asset.id, AnswerFormat::word, "animal"};
    }
  }
}

BoundingBox foreground_bounds(const BitMask& mask) {
  int x0 = mask.width(), y0 = mask.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  return {Point(x0, y0), Point(x1 + 1, y1 + 1)};
}

void add_occluders(SceneSpec& scene, const ContentSource& content, Rng& rng) {
  const BitMask mask = scene_mask(scene, content);
  if (mask.empty()) throw GenerationError("occlusion scene has no foreground");
  const BoundingBox box = foreground_bounds(mask);
  constexpr int kRounds = 5;
  constexpr int kTriesPerRound = 50;
  double shrink = 1.0;
  for (int round = 0; round < kRounds; ++round, shrink *= 0.8) {
    for (int attempt = 0; attempt < kTriesPerRound; ++attempt) {
      std::vector<Occluder> occluders;
      const int n = rng.between(2, 5);
      for (int k = 0; k < n; ++k) {
        const double r = shrink * rng.uniform(0.06, 0.14) * scene.canvas;
        occluders.push_back({Point(rng.uniform(box.min.x(), box.max.x()), rng.uniform(box.min.y(), box.max.y())), r});
      }
      const double fraction = apply_occluders(mask, occluders).occluded_fraction;
      if (fraction >= kMinOccludedFraction && fraction <= kMaxOccludedFraction) {
        scene.occluders = std::move(occluders);
        scene.occluded_fraction = fraction;
        return;
      }
    }
  }
  throw GenerationError("no occluder set reached the target occluded fraction");
}

}  // namespace

SceneSpec gen_scene(TaskKind kind, const ContentSource& content, const TaskConfig& cfg, Rng& rng,
                    const QuestionTemplates& templates) {
  if (cfg.canvas < 64) throw ParameterError("canvas must be at least 64 px");
  SceneSpec scene;
  scene.task = kind;
  scene.canvas = cfg.canvas;
  std::map<std::string, std::string> slots{{"vocabulary", join(shape_vocabulary(), ", ")},
                                           {"quadrants", std::string(kQuadrantLegend)}};
  const double quadrant_side = cfg.canvas / 2.0;
  const auto& vocab = shape_vocabulary();

  switch (kind) {
    case TaskKind::count: {
      const int k = cfg.count.value_or(rng.between(2, 6));
      if (k < 1) throw ParameterError("count must be positive");
      const std::string& shape = rng.pick(std::span<const std::string>(vocab));
      const double scale = cfg.canvas / 512.0;
      scene.placements = place_free(std::vector<std::string>(static_cast<std::size_t>(k), shape), 34.0 * scale,
                                    56.0 * scale, cfg.canvas, rng);
      scene.answer_format = AnswerFormat::integer;
      break;
    }
    case TaskKind::enumeration: {
      std::vector<std::string> names;
      if (cfg.shapes) {
        names = *cfg.shapes;
      } else {
        names = vocab;
        rng.shuffle(std::span<std::string>(names));
        names.resize(static_cast<std::size_t>(rng.between(2, 4)));
      }
      if (std::set<std::string>(names.begin(), names.end()).size() != names.size()) {
        throw ParameterError("enumeration shapes must be distinct");
      }
      const double scale = cfg.canvas / 512.0;
      scene.placements = place_free(names, 44.0 * scale, 64.0 * scale, cfg.canvas, rng);
      scene.answer_format = AnswerFormat::free_text;
      break;
    }
    case TaskKind::spot_difference: {
      std::vector<std::string> pair = vocab;
      rng.shuffle(std::span<std::string>(pair));
      const int odd = rng.between(1, 4);
      for (int q = 1; q <= 4; ++q) {
        scene.placements.push_back({ContentKind::shape, q == odd ? pair[1] : pair[0], quadrant_center(q, cfg.canvas),
                                    0.6 * quadrant_side / 2.0, 0.0, q});
      }
      scene.answer_format = AnswerFormat::quadrant_label;
      break;
    }
    case TaskKind::size_comparison:
    case TaskKind::size_sort: {
      const std::string& shape = rng.pick(std::span<const std::string>(vocab));
      std::array<double, 4> scales = kQuadrantScales;
      if (cfg.quadrant_scales) {
        scales = *cfg.quadrant_scales;
      } else {
        rng.shuffle(std::span<double>(scales));
      }
      for (int q = 1; q <= 4; ++q) {
        const double r = scales[static_cast<std::size_t>(q - 1)] * quadrant_side / 2.0;
        if (!(r > 0.0) || r > quadrant_side / 2.0 - kPlacementMargin) {
          throw ParameterError("quadrant scale leaves less than the placement margin");
        }
        scene.placements.push_back({ContentKind::shape, shape, quadrant_center(q, cfg.canvas), r, 0.0, q});
      }
      scene.answer_format = kind == TaskKind::size_sort ? AnswerFormat::quadrant_order : AnswerFormat::quadrant_label;
      break;
    }
    case TaskKind::recognition:
    case TaskKind::rotation:
    case TaskKind::occlusion: {
      RecognitionItem item = pick_recognition(content, cfg, rng);
      if (kind == TaskKind::rotation) {
        constexpr std::array<double, 3> kTurns = {90.0, 180.0, 270.0};
        scene.rotation_deg = rng.pick(std::span<const double>(kTurns)) + rng.uniform(-10.0, 10.0);
        item.placement.rotation = scene.rotation_deg * std::numbers::pi / 180.0;
      }
      scene.placements.push_back(item.placement);
      scene.answer_format = item.format;
      slots["content_type"] = item.content_type;
      if (kind == TaskKind::occlusion) add_occluders(scene, content, rng);
      break;
    }
    case TaskKind::math: {
      if (cfg.expression) {
        eval_expression(*cfg.expression);
        scene.expression = *cfg.expression;
      } else {
        int a = rng.between(1, 9);
        int b = rng.between(1, 9);
        constexpr std::array<std::string_view, 3> kOps = {"+", "−", "×"};
        const std::size_t op = rng.below(kOps.size());
        if (op == 1 && a < b) std::swap(a, b);
        scene.expression = std::to_string(a) + std::string(kOps[op]) + std::to_string(b);
      }
      const Point center(cfg.canvas / 2.0, cfg.canvas / 2.0);
      const double unit = fit_text_unit(decode_utf8(scene.expression).size(), 0.9 * cfg.canvas, 28.0);
      scene.placements.push_back({ContentKind::text, scene.expression, center, unit, 0.0, 0});
      scene.answer_format = AnswerFormat::integer;
      break;
    }
  }
  scene.question = templates.render(kind, slots);
  scene.answer = derive_answer(scene);
  return scene;
}

std::string derive_answer(const SceneSpec& scene) {
  const auto& p = scene.placements;
  const auto area_of = [](const Placement& pl) {
    return polygon_area(vocabulary_outline(pl.content, pl.center, pl.size, pl.rotation));
  };
  switch (scene.task) {
    case TaskKind::count: return std::to_string(p.size());
    case TaskKind::enumeration: {
      std::set<std::string> names;
      for (const Placement& pl : p) names.insert(pl.content);
      return join(std::vector<std::string>(names.begin(), names.end()), ",");
    }
    case TaskKind::spot_difference: {
      for (const Placement& pl : p) {
        const auto same = std::count_if(p.begin(), p.end(), [&](const Placement& o) { return o.content == pl.content; });
        if (same == 1 && p.size() > 2) return quadrant_label(pl.quadrant);
      }
      return "";
    }
    case TaskKind::size_comparison: {
      if (p.empty()) return "";
      const auto best = std::max_element(p.begin(), p.end(),
                                         [&](const Placement& a, const Placement& b) { return area_of(a) < area_of(b); });
      return quadrant_label(best->quadrant);
    }
    case TaskKind::size_sort: {
      std::vector<Placement> sorted = p;
      std::stable_sort(sorted.begin(), sorted.end(),
                       [&](const Placement& a, const Placement& b) { return area_of(a) < area_of(b); });
      std::vector<std::string> labels;
      for (const Placement& pl : sorted) labels.push_back(quadrant_label(pl.quadrant));
      return join(labels, ",");
    }
    case TaskKind::recognition:
    case TaskKind::rotation:
    case TaskKind::occlusion: return p.empty() ? "" : p.front().content;
    case TaskKind::math: {
      if (p.size() != 1 || p.front().content != scene.expression) return "";
      return std::to_string(eval_expression(scene.expression));
    }
  }
  return "";
}

std::vector<Outline> scene_outlines(const SceneSpec& scene) {
  std::vector<Outline> out;
  for (const Placement& pl : scene.placements) {
    if (pl.kind == ContentKind::shape) {
      out.push_back(vocabulary_outline(pl.content, pl.center, pl.size, pl.rotation));
    } else if (pl.kind == ContentKind::text) {
      auto pieces = text_outlines(pl.content, pl.center, pl.size, pl.rotation);
      std::move(pieces.begin(), pieces.end(), std::back_inserter(out));
    }
  }
  return out;
}

BitMask scene_mask(const SceneSpec& scene, const ContentSource& content) {
  const std::vector<Outline> outlines = scene_outlines(scene);
  BitMask mask = rasterize(outlines, scene.canvas, scene.canvas);
  for (const Placement& pl : scene.placements) {
    if (pl.kind != ContentKind::asset) continue;
    const SilhouetteAsset* asset = content.find_asset(pl.content);
    if (asset == nullptr) throw InputError("silhouette asset '" + pl.content + "' is not available");
    if (asset->mask.width() != scene.canvas || asset->mask.height() != scene.canvas) {
      throw InputError("silhouette asset '" + pl.content + "' does not match the canvas size");
    }
    mask = mask_union(mask, pl.rotation == 0.0 ? asset->mask : rotate_mask(asset->mask, pl.rotation));
  }
  return mask;
}

BitMask occluded_scene_mask(const SceneSpec& scene, const ContentSource& content) {
  BitMask mask = scene_mask(scene, content);
  if (scene.occluders.empty()) return mask;
  return apply_occluders(mask, scene.occluders).mask;
}

}  // namespace chromou
