#include "chromou/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "chromou/errors.hpp"

namespace chromou {

using nlohmann::json;
using nlohmann::ordered_json;

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t sample_index) {
  std::uint64_t z = (master_seed ^ (sample_index * kSeedStride)) + kSeedStride;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw PlanError("unknown key '" + key + "' in " + where);
    }
  }
}

PackingParams parse_packing(const json& j) {
  reject_unknown_keys(j, {"r_min", "r_max", "gap", "max_failures", "target_coverage"}, "packing");
  PackingParams p;
  p.r_min = j.value("r_min", p.r_min);
  p.r_max = j.value("r_max", p.r_max);
  p.gap = j.value("gap", p.gap);
  p.max_failures = j.value("max_failures", p.max_failures);
  p.target_coverage = j.value("target_coverage", p.target_coverage);
  return p;
}

}  // namespace

GenerationPlan parse_plan(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw PlanError(std::string("plan is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw PlanError("plan must be a JSON object");
  reject_unknown_keys(doc, {"description", "tasks", "palettes", "fill_families", "packing", "sampling", "palette_registry", "seed", "canvas", "workers"}, "plan");

  GenerationPlan plan;
  try {
    if (!doc.contains("tasks") || !doc["tasks"].is_array() || doc["tasks"].empty()) {
      throw PlanError("plan needs a non-empty 'tasks' array");
    }
    for (const auto& t : doc["tasks"]) {
      reject_unknown_keys(t, {"task", "count"}, "task entry");
      const auto kind = parse_task_kind(t.at("task").get<std::string>());
      if (!kind) throw PlanError("unknown task '" + t.at("task").get<std::string>() + "'");
      const int count = t.at("count").get<int>();
      if (count <= 0) throw PlanError("task counts must be positive");
      plan.tasks.emplace_back(*kind, count);
    }
    if (!doc.contains("palettes") || !doc["palettes"].is_array() || doc["palettes"].empty()) {
      throw PlanError("plan needs a non-empty 'palettes' array");
    }
    for (const auto& p : doc["palettes"]) plan.palettes.push_back(p.get<std::string>());
    if (doc.contains("fill_families")) {
      for (const auto& f : doc["fill_families"]) {
        const auto family = parse_fill_family(f.get<std::string>());
        if (!family) throw PlanError("unknown fill family '" + f.get<std::string>() + "'");
        plan.fill_families.push_back(*family);
      }
    } else {
      plan.fill_families = {FillFamily::dots};
    }
    if (plan.fill_families.empty()) throw PlanError("plan needs at least one fill family");
    if (doc.contains("packing")) plan.packing = parse_packing(doc["packing"]);
    if (doc.contains("sampling")) {
      const json& s = doc["sampling"];
      reject_unknown_keys(s, {"min_intra_dE", "fg_bg_lo", "fg_bg_hi"}, "sampling");
      plan.sampling.min_intra_dE = s.value("min_intra_dE", plan.sampling.min_intra_dE);
      plan.sampling.fg_bg_lo = s.value("fg_bg_lo", plan.sampling.fg_bg_lo);
      plan.sampling.fg_bg_hi = s.value("fg_bg_hi", plan.sampling.fg_bg_hi);
    }
    if (doc.contains("palette_registry")) plan.palette_registry = doc["palette_registry"].get<std::string>();
    if (doc.contains("seed")) plan.master_seed = doc["seed"].get<std::uint64_t>();
    plan.canvas = doc.value("canvas", kCanvasSize);
    plan.workers = doc.value("workers", 0u);
  } catch (const json::exception& e) {
    throw PlanError(std::string("malformed plan: ") + e.what());
  }
  try {
    plan.packing.validate();
  } catch (const ParameterError& e) {
    throw PlanError(e.what());
  }
  if (plan.canvas < 64) throw PlanError("canvas must be at least 64 px");
  return plan;
}

GenerationPlan load_plan(const std::filesystem::path& path) { return parse_plan(read_text(path)); }

namespace {

ordered_json color_json(ColorSRGB c) { return ordered_json::array({c.r, c.g, c.b}); }

ColorSRGB color_from(const json& j) {
  return {j.at(0).get<std::uint8_t>(), j.at(1).get<std::uint8_t>(), j.at(2).get<std::uint8_t>()};
}

ordered_json point_json(const Point& p) { return ordered_json::array({p.x(), p.y()}); }
Point point_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

ordered_json to_json(const SampleRecord& r) {
  ordered_json j;
  j["id"] = r.id;
  j["task"] = r.task;
  j["question"] = r.question;
  j["answer"] = r.answer;
  j["answer_format"] = r.answer_format;
  j["palette_id"] = r.palette_id;
  j["fill_family"] = r.fill_family;
  j["seed"] = r.seed;
  j["rotation_deg"] = r.rotation_deg;
  j["occlusion_fraction"] = r.occlusion_fraction;
  j["silhouette_ids"] = r.silhouette_ids;
  j["image_path"] = r.image_path;
  j["silhouette_path"] = r.silhouette_path;
  j["generator_version"] = r.generator_version;
  j["template_hash"] = r.template_hash;
  j["cell_seed"] = r.cell_seed;
  j["attempt"] = r.attempt;
  j["canvas"] = r.canvas;
  j["expression"] = r.expression;

  ordered_json palette;
  palette["source"] = to_string(r.palette.source);
  palette["category"] = r.palette.category ? ordered_json(to_string(*r.palette.category)) : ordered_json(nullptr);
  palette["fg"] = ordered_json::array();
  for (ColorSRGB c : r.palette.fg) palette["fg"].push_back(color_json(c));
  palette["bg"] = ordered_json::array();
  for (ColorSRGB c : r.palette.bg) palette["bg"].push_back(color_json(c));
  palette["min_intra_dE"] = r.palette.min_intra_dE;
  palette["fg_bg_dE_range"] = {r.palette.fg_bg_dE_range[0], r.palette.fg_bg_dE_range[1]};
  j["palette"] = palette;
  j["base_color"] = color_json(r.base_color);

  j["packing"] = {{"r_min", r.packing.r_min},
                  {"r_max", r.packing.r_max},
                  {"gap", r.packing.gap},
                  {"max_failures", r.packing.max_failures},
                  {"target_coverage", r.packing.target_coverage}};
  j["placements"] = ordered_json::array();
  for (const Placement& p : r.placements) {
    ordered_json pj;
    pj["kind"] = to_string(p.kind);
    pj["content"] = p.content;
    pj["center"] = point_json(p.center);
    pj["size"] = p.size;
    pj["rotation"] = p.rotation;
    pj["quadrant"] = p.quadrant;
    j["placements"].push_back(pj);
  }
  j["occluders"] = ordered_json::array();
  for (const Occluder& o : r.occluders) {
    ordered_json oj;
    oj["center"] = point_json(o.center);
    oj["radius"] = o.radius;
    j["occluders"].push_back(oj);
  }
  ordered_json stats;
  stats["elements"] = r.elements;
  stats["figure_elements"] = r.figure_elements;
  stats["disk_coverage"] = r.disk_coverage;
  j["element_stats"] = stats;
  return j;
}

SampleRecord record_from_json(const json& j) {
  SampleRecord r;
  try {
    r.id = j.at("id").get<std::string>();
    r.task = j.at("task").get<std::string>();
    r.question = j.value("question", "");
    r.answer = j.at("answer").get<std::string>();
    r.answer_format = j.value("answer_format", "free-text");
    r.palette_id = j.value("palette_id", "");
    r.fill_family = j.value("fill_family", "");
    r.seed = j.value("seed", std::uint64_t{0});
    r.rotation_deg = j.value("rotation_deg", 0.0);
    r.occlusion_fraction = j.value("occlusion_fraction", 0.0);
    r.silhouette_ids = j.value("silhouette_ids", std::vector<std::string>{});
    r.image_path = j.value("image_path", "");
    r.silhouette_path = j.value("silhouette_path", "");
    r.generator_version = j.value("generator_version", "");
    r.template_hash = j.value("template_hash", "");
    r.cell_seed = j.value("cell_seed", std::uint64_t{0});
    r.attempt = j.value("attempt", 0);
    r.canvas = j.value("canvas", kCanvasSize);
    r.expression = j.value("expression", "");
    if (j.contains("palette")) {
      const json& p = j["palette"];
      r.palette.id = r.palette_id;
      r.palette.source = p.value("source", "sampled") == "ishihara" ? PaletteSource::ishihara : PaletteSource::sampled;
      if (p.contains("category") && p["category"].is_string()) {
        const std::string cat = p["category"].get<std::string>();
        r.palette.category = cat == "dual" ? PaletteCategory::dual : cat == "tri" ? PaletteCategory::tri : PaletteCategory::multi;
      }
      for (const auto& c : p.at("fg")) r.palette.fg.push_back(color_from(c));
      for (const auto& c : p.at("bg")) r.palette.bg.push_back(color_from(c));
      r.palette.min_intra_dE = p.value("min_intra_dE", 0.0);
      const json& range = p.at("fg_bg_dE_range");
      r.palette.fg_bg_dE_range = {range.at(0).get<double>(), range.at(1).get<double>()};
    }
    if (j.contains("base_color")) r.base_color = color_from(j["base_color"]);
    if (j.contains("packing")) r.packing = parse_packing(j["packing"]);
    for (const auto& pj : j.value("placements", json::array())) {
      Placement p;
      const auto kind = parse_content_kind(pj.at("kind").get<std::string>());
      if (!kind) throw InputError("unknown placement kind in record " + r.id);
      p.kind = *kind;
      p.content = pj.at("content").get<std::string>();
      p.center = point_from(pj.at("center"));
      p.size = pj.at("size").get<double>();
      p.rotation = pj.at("rotation").get<double>();
      p.quadrant = pj.at("quadrant").get<int>();
      r.placements.push_back(std::move(p));
    }
    for (const auto& oj : j.value("occluders", json::array())) {
      r.occluders.push_back({point_from(oj.at("center")), oj.at("radius").get<double>()});
    }
    if (j.contains("element_stats")) {
      const json& s = j["element_stats"];
      r.elements = s.value("elements", std::size_t{0});
      r.figure_elements = s.value("figure_elements", std::size_t{0});
      r.disk_coverage = s.value("disk_coverage", 0.0);
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed manifest record: ") + e.what());
  }
  return r;
}

SceneSpec scene_from_record(const SampleRecord& record) {
  const auto kind = parse_task_kind(record.task);
  if (!kind) throw InputError("record " + record.id + " has no generator task kind");
  SceneSpec scene;
  scene.task = *kind;
  scene.canvas = record.canvas;
  scene.placements = record.placements;
  scene.occluders = record.occluders;
  scene.occluded_fraction = record.occlusion_fraction;
  scene.rotation_deg = record.rotation_deg;
  scene.expression = record.expression;
  scene.question = record.question;
  scene.answer = record.answer;
  if (const auto f = parse_answer_format(record.answer_format)) scene.answer_format = *f;
  return scene;
}

const PaletteConfig* GenerationContext::find_palette(std::string_view id) const {
  for (const PaletteConfig& p : registry) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

ContentSource content_from_environment() {
  const char* dir = std::getenv("CHROMOU_ASSET_DIR");
  if (dir == nullptr || *dir == '\0') return {};
  return ContentSource::from_directory(dir);
}

GeneratedSample generate_sample(TaskKind task, const std::string& palette_id, FillFamily fill,
                                const PackingParams& packing, std::uint64_t seed, const GenerationContext& ctx,
                                int canvas) {
  Rng rng(seed);
  TaskConfig cfg;
  cfg.canvas = canvas;
  GeneratedSample out;
  out.scene = gen_scene(task, ctx.content, cfg, rng, *ctx.templates);
  if (const auto sizes = parse_sampled_id(palette_id)) {
    out.palette = sample_palette(rng, sizes->first, sizes->second, ctx.sampling);
  } else if (const PaletteConfig* p = ctx.find_palette(palette_id)) {
    out.palette = *p;
  } else {
    throw InputError("unknown palette id '" + palette_id + "'");
  }
  out.render = render_camouflage(out.scene, ctx.content, out.palette, packing, fill, rng);
  out.silhouette = render_silhouette(out.scene, ctx.content);
  return out;
}

namespace {

struct Cell {
  TaskKind task;
  std::string palette_id;
  FillFamily fill;
  int index;
  std::uint64_t cell_seed;
  std::string id;
};

struct CellResult {
  std::optional<SampleRecord> record;
  std::optional<SkippedCell> skipped;
};

CellResult run_cell(const Cell& cell, const GenerationPlan& plan, const GenerationContext& ctx) {
  std::string last_error;
  for (int attempt = 0; attempt <= kMaxCellRetries; ++attempt) {
    const std::uint64_t seed = cell.cell_seed + static_cast<std::uint64_t>(attempt) * kSeedStride;
    GeneratedSample sample;
    try {
      sample = generate_sample(cell.task, cell.palette_id, cell.fill, plan.packing, seed, ctx, plan.canvas);
    } catch (const GenerationError& e) {
      last_error = e.what();
      continue;
    } catch (const SamplingError& e) {
      last_error = e.what();
      continue;
    }
    SampleRecord r;
    r.id = cell.id;
    r.task = std::string(to_string(cell.task));
    r.question = sample.scene.question;
    r.answer = sample.scene.answer;
    r.answer_format = std::string(to_string(sample.scene.answer_format));
    r.palette_id = cell.palette_id;
    r.fill_family = std::string(to_string(cell.fill));
    r.seed = seed;
    r.rotation_deg = sample.scene.rotation_deg;
    r.occlusion_fraction = sample.scene.occluded_fraction;
    for (const Placement& p : sample.scene.placements) r.silhouette_ids.push_back(p.content);
    r.image_path = "images/" + cell.id + ".png";
    r.silhouette_path = "silhouettes/" + cell.id + ".png";
    r.generator_version = std::string(kGeneratorVersion);
    r.template_hash = ctx.templates->hash();
    r.cell_seed = cell.cell_seed;
    r.attempt = attempt;
    r.canvas = plan.canvas;
    r.palette = sample.palette;
    r.palette.id = cell.palette_id;
    r.base_color = sample.render.base;
    r.packing = plan.packing;
    r.expression = sample.scene.expression;
    r.placements = sample.scene.placements;
    r.occluders = sample.scene.occluders;
    r.elements = sample.render.elements.size();
    r.figure_elements = sample.render.figure_elements;
    r.disk_coverage = sample.render.disk_coverage;
    write_file(plan.output_dir / r.image_path, encode_png(sample.render.image));
    write_file(plan.output_dir / r.silhouette_path, encode_png(sample.silhouette));
    return {std::move(r), std::nullopt};
  }
  return {std::nullopt, SkippedCell{cell.id, cell.cell_seed, last_error}};
}

}  // namespace

void write_manifest(const std::filesystem::path& path, const std::vector<SampleRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const SampleRecord& r : records) out << to_json(r).dump() << '\n';
  if (!out) throw std::runtime_error("short write to " + path.string());
}

std::vector<SampleRecord> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open manifest " + path.string());
  std::vector<SampleRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError(std::string("manifest line is not JSON: ") + e.what());
    }
    records.push_back(record_from_json(j));
  }
  return records;
}

Manifest generate(const GenerationPlan& plan, const GenerationContext& ctx) {
  for (const std::string& id : plan.palettes) {
    if (!parse_sampled_id(id) && ctx.find_palette(id) == nullptr) throw PlanError("unknown palette id '" + id + "'");
  }
  std::filesystem::create_directories(plan.output_dir / "images");
  std::filesystem::create_directories(plan.output_dir / "silhouettes");

  std::vector<Cell> cells;
  std::uint64_t index = 0;
  for (const auto& [task, count] : plan.tasks) {
    for (const std::string& palette : plan.palettes) {
      for (FillFamily fill : plan.fill_families) {
        for (int i = 0; i < count; ++i) {
          std::string id = std::string(to_string(task)) + "-" + palette + "-" + std::string(to_string(fill)) + "-" + std::to_string(i);
          cells.push_back({task, palette, fill, i, derive_seed(plan.master_seed, index++), std::move(id)});
        }
      }
    }
  }

  std::vector<CellResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<std::size_t>(plan.workers == 0 ? hw : plan.workers, cells.size());
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
          try {
            results[i] = run_cell(cells[i], plan, ctx);
          } catch (...) {
            const std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = cells.size();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);

  Manifest manifest;
  for (CellResult& r : results) {
    if (r.record) manifest.records.push_back(std::move(*r.record));
    if (r.skipped) manifest.skipped.push_back(std::move(*r.skipped));
  }
  write_manifest(plan.output_dir / "manifest.jsonl", manifest.records);
  {
    std::ofstream skipped(plan.output_dir / "skipped.jsonl", std::ios::binary | std::ios::trunc);
    for (const SkippedCell& s : manifest.skipped) {
      ordered_json j;
      j["id"] = s.id;
      j["cell_seed"] = s.cell_seed;
      j["reason"] = s.reason;
      skipped << j.dump() << '\n';
    }
  }
  if (manifest.skipped.size() * 100 > cells.size()) {
    throw PlanError(std::to_string(manifest.skipped.size()) + " of " + std::to_string(cells.size()) +
                    " cells were skipped (limit 1%)");
  }
  return manifest;
}

std::pair<Image, Image> regenerate_sample(const SampleRecord& record, const GenerationContext& ctx) {
  const auto task = parse_task_kind(record.task);
  const auto fill = parse_fill_family(record.fill_family);
  if (!task || !fill) throw InputError("record " + record.id + " cannot be replayed");
  GeneratedSample s = generate_sample(*task, record.palette_id, *fill, record.packing, record.seed, ctx, record.canvas);
  return {std::move(s.render.image), std::move(s.silhouette)};
}

namespace {

bool same_color(const std::uint8_t* px, ColorSRGB c) { return px[0] == c.r && px[1] == c.g && px[2] == c.b; }

}  // namespace

ValidationReport validate(const std::filesystem::path& dir) {
  ValidationReport report;
  const std::vector<SampleRecord> records = load_manifest(dir / "manifest.jsonl");
  report.records = records.size();
  const auto flag = [&](const SampleRecord& r, std::string kind, std::string detail) {
    report.violations.push_back({r.id, std::move(kind), std::move(detail)});
  };

  for (const SampleRecord& r : records) {
    // Ground truth from geometry / expression alone.
    try {
      const std::string derived = derive_answer(scene_from_record(r));
      if (derived != r.answer) flag(r, "answer", "stored '" + r.answer + "', derived '" + derived + "'");
    } catch (const std::exception& e) {
      flag(r, "answer", std::string("cannot re-derive: ") + e.what());
    }

    if (!satisfies_constraints(r.palette)) flag(r, "palette", "palette violates its recorded constraints");
    if (!r.palette.bg.empty() && linear_mean(r.palette.bg) != r.base_color) {
      flag(r, "palette", "base colour is not the linear mean of the background colours");
    }

    const auto image_file = dir / r.image_path;
    if (r.image_path.empty() || !std::filesystem::exists(image_file)) {
      report.missing_files.push_back(image_file.string());
    } else {
      try {
        const Image img = decode_png(read_file(image_file));
        std::set<ColorSRGB> allowed(r.palette.fg.begin(), r.palette.fg.end());
        allowed.insert(r.palette.bg.begin(), r.palette.bg.end());
        allowed.insert(r.base_color);
        std::size_t stray = 0;
        for (std::size_t i = 0; i + 2 < img.pixels.size(); i += 3) {
          if (!allowed.contains({img.pixels[i], img.pixels[i + 1], img.pixels[i + 2]})) ++stray;
        }
        if (stray > 0) flag(r, "color", std::to_string(stray) + " pixels outside palette and base colours");
        if (img.width != r.canvas || img.height != r.canvas) flag(r, "image", "camouflage image has the wrong size");
      } catch (const InputError& e) {
        flag(r, "image", e.what());
      }
    }

    const auto silhouette_file = dir / r.silhouette_path;
    if (r.silhouette_path.empty() || !std::filesystem::exists(silhouette_file)) {
      report.missing_files.push_back(silhouette_file.string());
    } else {
      try {
        const Image img = decode_png(read_file(silhouette_file));
        bool binary = img.width == r.canvas && img.height == r.canvas;
        for (int y = 0; binary && y < img.height; ++y) {
          for (int x = 0; binary && x < img.width; ++x) {
            binary = same_color(img.at(x, y), {0, 0, 0}) || same_color(img.at(x, y), {255, 255, 255});
          }
        }
        if (!binary) flag(r, "silhouette", "silhouette is not a black-on-white canvas image");
      } catch (const InputError& e) {
        flag(r, "silhouette", e.what());
      }
    }
  }
  return report;
}

namespace {

std::string normalize(std::string_view text) {
  std::string out;
  bool space = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::optional<long long> parse_integer(const std::string& s) {
  static const std::regex pattern(R"(^[+-]?[0-9]+$)");
  if (!std::regex_match(s, pattern)) return std::nullopt;
  try {
    return std::stoll(s);
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }
}

// Quadrant labels in order; nullopt when anything but labels and separators appears.
std::optional<std::vector<int>> quadrant_sequence(const std::string& s) {
  static const std::regex allowed(R"(^[q1-4,;>\s/|-]*$)");
  if (!std::regex_match(s, allowed)) return std::nullopt;
  static const std::regex label(R"(q([1-4]))");
  std::vector<int> seq;
  std::string stripped = s;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), label); it != std::sregex_iterator(); ++it) {
    seq.push_back((*it)[1].str()[0] - '0');
  }
  stripped = std::regex_replace(stripped, label, "");
  if (stripped.find_first_of("q1234") != std::string::npos) return std::nullopt;
  return seq;
}

std::string list_canonical(const std::string& s) {
  static const std::regex around_comma(R"(\s*,\s*)");
  return std::regex_replace(s, around_comma, ",");
}

}  // namespace

bool answers_match(std::string_view answer, std::string_view prediction, std::string_view answer_format) {
  const std::string a = normalize(answer);
  const std::string p = normalize(prediction);
  if (p.empty()) return false;
  if (answer_format == "integer") {
    const auto av = parse_integer(a);
    const auto pv = parse_integer(p);
    return av && pv && *av == *pv;
  }
  if (answer_format == "quadrant-label" || answer_format == "quadrant-order") {
    const auto as = quadrant_sequence(a);
    const auto ps = quadrant_sequence(p);
    return as && ps && !as->empty() && *as == *ps;
  }
  return list_canonical(a) == list_canonical(p);
}

ScoreTable score(const std::vector<SampleRecord>& manifest,
                 const std::vector<std::pair<std::string, std::string>>& predictions) {
  std::map<std::string, const SampleRecord*> by_id;
  for (const SampleRecord& r : manifest) by_id.emplace(r.id, &r);
  std::map<std::string, std::string> predicted;
  for (const auto& [id, text] : predictions) {
    if (!by_id.contains(id)) throw InputError("prediction for unknown id '" + id + "'");
    if (!predicted.emplace(id, text).second) throw InputError("duplicate prediction for id '" + id + "'");
  }

  ScoreTable table;
  for (const SampleRecord& r : manifest) {
    TaskScore& s = table.tasks[r.task];
    ++s.total;
    const auto it = predicted.find(r.id);
    if (it != predicted.end() && answers_match(r.answer, it->second, r.answer_format)) ++s.correct;
  }
  double sum = 0.0;
  int present = 0;
  for (TaskKind kind : kTaskKinds) {
    const auto it = table.tasks.find(std::string(to_string(kind)));
    if (it == table.tasks.end() || it->second.total == 0) continue;
    sum += it->second.accuracy();
    ++present;
  }
  table.overall = present == 0 ? 0.0 : sum / present;
  return table;
}

std::vector<std::pair<std::string, std::string>> load_predictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open predictions " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      out.emplace_back(j.at("id").get<std::string>(), j.at("prediction").get<std::string>());
    } catch (const json::exception& e) {
      throw InputError(std::string("malformed prediction line: ") + e.what());
    }
  }
  return out;
}

}  // namespace chromou
