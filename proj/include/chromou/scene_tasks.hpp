#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chromou/geometry.hpp"
#include "chromou/random.hpp"
#include "chromou/raster_mask.hpp"

namespace chromou {

enum class TaskKind { count, enumeration, spot_difference, size_comparison, size_sort, recognition, rotation, occlusion, math };

inline constexpr TaskKind kTaskKinds[] = {TaskKind::count,           TaskKind::enumeration, TaskKind::spot_difference,
                                          TaskKind::size_comparison, TaskKind::size_sort,   TaskKind::recognition,
                                          TaskKind::rotation,        TaskKind::occlusion,   TaskKind::math};

std::string_view to_string(TaskKind kind);
std::optional<TaskKind> parse_task_kind(std::string_view name);

enum class AnswerFormat { integer, word, quadrant_label, quadrant_order, free_text };

std::string_view to_string(AnswerFormat format);
std::optional<AnswerFormat> parse_answer_format(std::string_view name);

enum class ContentKind { shape, text, asset };

std::string_view to_string(ContentKind kind);
std::optional<ContentKind> parse_content_kind(std::string_view name);

/// One item drawn into the scene.
///  - shape: `content` is a vocabulary name, `size` the circumradius in px.
///  - text:  `content` is the glyph string, `size` the font unit in px.
///  - asset: `content` is the silhouette id; the asset fills the canvas.
/// `rotation` is in radians, about `center`; quadrant is 1..4 or 0 for free.
struct Placement {
  ContentKind kind = ContentKind::shape;
  std::string content;
  Point center = Point::Zero();
  double size = 0.0;
  double rotation = 0.0;
  int quadrant = 0;
};

struct SceneSpec {
  TaskKind task = TaskKind::count;
  int canvas = kCanvasSize;
  std::vector<Placement> placements;
  std::vector<Occluder> occluders;
  double occluded_fraction = 0.0;
  double rotation_deg = 0.0;
  std::string expression;
  std::string question;
  std::string answer;
  AnswerFormat answer_format = AnswerFormat::integer;
};

/// The enumerable shape vocabulary, alphabetical.
const std::vector<std::string>& shape_vocabulary();

/// Vocabulary shape inscribed in a circle of `radius`, drawn upright and then
/// rotated by `rotation`. Throws InputError for unknown names.
Outline vocabulary_outline(std::string_view name, const Point& center, double radius, double rotation);

const std::vector<std::string>& builtin_words();

struct SilhouetteAsset {
  std::string id;
  BitMask mask;
};

/// Glyph font, shape vocabulary and optional bitmap silhouettes.
class ContentSource {
 public:
  ContentSource() = default;

  /// Loads every *.png / *.pbm in `dir` (sorted by stem) at canvas size.
  static ContentSource from_directory(const std::filesystem::path& dir, int canvas = kCanvasSize);

  void add_asset(SilhouetteAsset asset);
  const std::vector<SilhouetteAsset>& assets() const { return assets_; }
  const SilhouetteAsset* find_asset(std::string_view id) const;

 private:
  std::vector<SilhouetteAsset> assets_;
};

/// Per-kind question templates with {vocabulary}, {quadrants} and
/// {content_type} slots.
class QuestionTemplates {
 public:
  /// Parses "<task> = <template>" lines; '#' starts a comment line. Throws
  /// ConfigError unless every task kind has exactly one template.
  static QuestionTemplates parse(std::string_view text);
  static const QuestionTemplates& builtin();

  std::string render(TaskKind kind, const std::map<std::string, std::string>& slots) const;
  /// SHA-256 of the source text, lowercase hex.
  const std::string& hash() const { return hash_; }
  const std::string& source() const { return source_; }

 private:
  std::map<TaskKind, std::string> templates_;
  std::string source_;
  std::string hash_;
};

std::string sha256_hex(std::string_view data);

/// Overrides for otherwise random scene choices; unset fields are drawn.
struct TaskConfig {
  int canvas = kCanvasSize;
  std::optional<int> count;
  std::optional<std::vector<std::string>> shapes;
  std::optional<std::array<double, 4>> quadrant_scales;
  std::optional<std::string> expression;
  std::optional<std::string> recognition_text;
};

inline constexpr std::array<double, 4> kQuadrantScales = {0.35, 0.5, 0.65, 0.8};
inline constexpr double kPlacementMargin = 8.0;
inline constexpr int kPlacementRetries = 200;
inline constexpr double kMinOccludedFraction = 0.15;
inline constexpr double kMaxOccludedFraction = 0.45;

/// Builds a scene and its ground truth. Throws GenerationError when placement
/// fails within the retry budget.
SceneSpec gen_scene(TaskKind kind, const ContentSource& content, const TaskConfig& cfg, Rng& rng,
                    const QuestionTemplates& templates = QuestionTemplates::builtin());

/// Value of "a op b" with single-digit operands and op in {+, -, x} (ASCII or
/// U+2212 / U+00D7). Throws ParseError on anything else.
int eval_expression(std::string_view expr);

/// Recomputes the answer from placements and the expression alone.
std::string derive_answer(const SceneSpec& scene);

/// Outlines of all shape and text placements.
std::vector<Outline> scene_outlines(const SceneSpec& scene);

/// Unoccluded figure mask. Throws InputError for an asset missing from `content`.
BitMask scene_mask(const SceneSpec& scene, const ContentSource& content);

/// Figure mask with the scene's occluders applied.
BitMask occluded_scene_mask(const SceneSpec& scene, const ContentSource& content);

}  // namespace chromou
