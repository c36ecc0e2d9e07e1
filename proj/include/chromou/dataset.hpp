#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chromou/packing.hpp"
#include "chromou/palette.hpp"
#include "chromou/render.hpp"
#include "chromou/scene_tasks.hpp"

namespace chromou {

inline constexpr std::string_view kGeneratorVersion = "chromou-1.0.0";
inline constexpr std::uint64_t kSeedStride = 0x9E3779B97F4A7C15ULL;
inline constexpr int kMaxCellRetries = 5;

/// SplitMix64 finaliser applied to master ^ (index * golden) + golden.
/// Bijective in `sample_index` for a fixed master seed.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t sample_index);

struct GenerationPlan {
  std::vector<std::pair<TaskKind, int>> tasks;
  std::vector<std::string> palettes;
  std::vector<FillFamily> fill_families;
  PackingParams packing;
  SamplingConstraints sampling;
  std::optional<std::filesystem::path> palette_registry;
  std::uint64_t master_seed = 0;
  std::filesystem::path output_dir;
  int canvas = kCanvasSize;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned workers = 0;
};

/// Parses the JSON plan format. Throws PlanError on unknown keys or invalid
/// values. `seed` and `output_dir` are left for the caller when absent.
GenerationPlan parse_plan(std::string_view json_text);
GenerationPlan load_plan(const std::filesystem::path& path);

/// One manifest row. Besides the identifying fields it carries the scene,
/// palette colours and packing parameters needed to audit and replay the sample.
struct SampleRecord {
  std::string id;
  std::string task;
  std::string question;
  std::string answer;
  std::string answer_format;
  std::string palette_id;
  std::string fill_family;
  std::uint64_t seed = 0;
  double rotation_deg = 0.0;
  double occlusion_fraction = 0.0;
  std::vector<std::string> silhouette_ids;
  std::string image_path;
  std::string silhouette_path;
  std::string generator_version;
  std::string template_hash;
  // Replay and audit data.
  std::uint64_t cell_seed = 0;
  int attempt = 0;
  int canvas = kCanvasSize;
  PaletteConfig palette;
  ColorSRGB base_color;
  PackingParams packing;
  std::string expression;
  std::vector<Placement> placements;
  std::vector<Occluder> occluders;
  std::size_t elements = 0;
  std::size_t figure_elements = 0;
  double disk_coverage = 0.0;
};

nlohmann::ordered_json to_json(const SampleRecord& record);
SampleRecord record_from_json(const nlohmann::json& j);

/// Scene reconstructed from a record's placements and expression.
SceneSpec scene_from_record(const SampleRecord& record);

struct SkippedCell {
  std::string id;
  std::uint64_t cell_seed = 0;
  std::string reason;
};

struct Manifest {
  std::vector<SampleRecord> records;
  std::vector<SkippedCell> skipped;
};

/// Shared read-only inputs for generation.
struct GenerationContext {
  std::vector<PaletteConfig> registry = builtin_palettes();
  ContentSource content;
  const QuestionTemplates* templates = &QuestionTemplates::builtin();
  SamplingConstraints sampling;

  const PaletteConfig* find_palette(std::string_view id) const;
};

/// Asset directory from CHROMOU_ASSET_DIR, or an empty source when unset.
ContentSource content_from_environment();

struct GeneratedSample {
  SceneSpec scene;
  PaletteConfig palette;
  RenderResult render;
  Image silhouette;
};

/// Runs the full pipeline for one cell from a single rng stream:
/// scene, then palette (sampled ids only), then render.
GeneratedSample generate_sample(TaskKind task, const std::string& palette_id, FillFamily fill,
                                const PackingParams& packing, std::uint64_t seed, const GenerationContext& ctx,
                                int canvas = kCanvasSize);

/// Writes images/, silhouettes/, manifest.jsonl and skipped.jsonl under the
/// plan's output directory. Cells run concurrently; the manifest is written in
/// cell order. Throws PlanError when more than 1% of cells are skipped.
Manifest generate(const GenerationPlan& plan, const GenerationContext& ctx);

void write_manifest(const std::filesystem::path& path, const std::vector<SampleRecord>& records);
std::vector<SampleRecord> load_manifest(const std::filesystem::path& path);

/// Rebuilds the camouflage and silhouette images of a record bit-exactly.
std::pair<Image, Image> regenerate_sample(const SampleRecord& record, const GenerationContext& ctx);

struct Violation {
  std::string id;
  std::string kind;
  std::string detail;
};

struct ValidationReport {
  std::size_t records = 0;
  std::vector<Violation> violations;
  std::vector<std::string> missing_files;

  bool ok() const { return violations.empty() && missing_files.empty(); }
};

/// Audits a generated directory: answers re-derived from placements, image
/// colours against palette and base, palette constraints, silhouette pixels.
ValidationReport validate(const std::filesystem::path& dir);

/// Normalised exact-match comparison for the given answer format.
bool answers_match(std::string_view answer, std::string_view prediction, std::string_view answer_format);

struct TaskScore {
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total); }
};

struct ScoreTable {
  /// Keyed by task name; may include "silhouette" for clean-image probes.
  std::map<std::string, TaskScore> tasks;
  /// Unweighted mean over the camouflage task kinds present; silhouette excluded.
  double overall = 0.0;
};

/// Manifest ids without a prediction count as wrong. Throws InputError for a
/// prediction id that is not in the manifest or appears twice.
ScoreTable score(const std::vector<SampleRecord>& manifest, const std::vector<std::pair<std::string, std::string>>& predictions);

/// Reads {"id": ..., "prediction": ...} JSON Lines.
std::vector<std::pair<std::string, std::string>> load_predictions(const std::filesystem::path& path);

}  // namespace chromou
