// Command-line front end: gen, preview, validate, score.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>

#include "chromou/dataset.hpp"
#include "chromou/errors.hpp"

namespace {

using namespace chromou;

GenerationContext make_context(const std::optional<std::filesystem::path>& registry) {
  GenerationContext ctx;
  if (registry) ctx.registry = load_palette_registry(*registry);
  ctx.content = content_from_environment();
  return ctx;
}

int run_gen(const std::string& plan_file, std::uint64_t seed, const std::string& out) {
  GenerationPlan plan = load_plan(plan_file);
  plan.master_seed = seed;
  plan.output_dir = out;
  GenerationContext ctx = make_context(plan.palette_registry);
  ctx.sampling = plan.sampling;
  const Manifest m = generate(plan, ctx);
  std::cout << "wrote " << m.records.size() << " samples to " << out;
  if (!m.skipped.empty()) std::cout << " (" << m.skipped.size() << " skipped)";
  std::cout << '\n';
  return 0;
}

int run_preview(const std::string& task_name, const std::string& palette, const std::string& fill_name,
                std::uint64_t seed, const std::string& out, const std::string& silhouette_out) {
  const auto task = parse_task_kind(task_name);
  if (!task) throw InputError("unknown task '" + task_name + "'");
  const auto fill = parse_fill_family(fill_name);
  if (!fill) throw InputError("unknown fill family '" + fill_name + "'");
  const GenerationContext ctx = make_context(std::nullopt);
  const GeneratedSample s = generate_sample(*task, palette, *fill, PackingParams{}, seed, ctx);
  write_file(out, encode_png(s.render.image));
  if (!silhouette_out.empty()) write_file(silhouette_out, encode_png(s.silhouette));
  std::cout << "question: " << s.scene.question << '\n' << "answer: " << s.scene.answer << '\n';
  return 0;
}

int run_validate(const std::string& dir) {
  const ValidationReport report = validate(dir);
  for (const Violation& v : report.violations) std::cout << v.id << '\t' << v.kind << '\t' << v.detail << '\n';
  for (const std::string& f : report.missing_files) std::cout << "missing\t" << f << '\n';
  std::cout << report.records << " records, " << report.violations.size() << " violations, "
            << report.missing_files.size() << " missing files\n";
  return report.ok() ? 0 : 1;
}

int run_score(const std::string& manifest, const std::string& predictions) {
  const ScoreTable t = score(load_manifest(manifest), load_predictions(predictions));
  for (const auto& [task, s] : t.tasks) {
    std::printf("%-16s %6zu / %-6zu %.4f\n", task.c_str(), s.correct, s.total, s.accuracy());
  }
  std::printf("%-16s %22.4f\n", "overall", t.overall);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Camouflaged figure-ground dataset generator"};
  app.require_subcommand(1);

  std::string plan_file, out_dir;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("gen", "Generate a dataset from a plan");
  gen->add_option("--plan", plan_file, "Plan JSON file")->required()->check(CLI::ExistingFile);
  gen->add_option("--seed", gen_seed, "Master seed")->required();
  gen->add_option("--out", out_dir, "Output directory")->required();

  std::string task, palette, fill = "dots", preview_out, silhouette_out;
  std::uint64_t preview_seed = 0;
  auto* preview = app.add_subcommand("preview", "Render a single sample");
  preview->add_option("--task", task)->required();
  preview->add_option("--palette", palette)->required();
  preview->add_option("--fill", fill);
  preview->add_option("--seed", preview_seed)->required();
  preview->add_option("--out", preview_out, "Camouflage PNG")->required();
  preview->add_option("--silhouette", silhouette_out, "Optional silhouette PNG");

  std::string validate_dir;
  auto* val = app.add_subcommand("validate", "Audit a generated directory");
  val->add_option("dir", validate_dir)->required()->check(CLI::ExistingDirectory);

  std::string manifest, predictions;
  auto* sc = app.add_subcommand("score", "Score predictions against a manifest");
  sc->add_option("--manifest", manifest)->required()->check(CLI::ExistingFile);
  sc->add_option("--predictions", predictions)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen(plan_file, gen_seed, out_dir);
    if (preview->parsed()) return run_preview(task, palette, fill, preview_seed, preview_out, silhouette_out);
    if (val->parsed()) return run_validate(validate_dir);
    if (sc->parsed()) return run_score(manifest, predictions);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
