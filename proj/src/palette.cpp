#include "chromou/palette.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "chromou/embedded_data.hpp"
#include "chromou/errors.hpp"

namespace chromou {

namespace {

// Linear sRGB -> XYZ (D65).
const Eigen::Matrix3d& rgb_to_xyz() {
  static const Eigen::Matrix3d m = (Eigen::Matrix3d() << 0.4124564, 0.3575761, 0.1804375,  //
                                    0.2126729, 0.7151522, 0.0721750,                       //
                                    0.0193339, 0.1191920, 0.9503041)
                                       .finished();
  return m;
}

const Eigen::Matrix3d& xyz_to_rgb() {
  static const Eigen::Matrix3d m = rgb_to_xyz().inverse();
  return m;
}

// Reference white is the image of linear (1,1,1) so sRGB white maps to L=100, a=b=0.
const Eigen::Vector3d& white_point() {
  static const Eigen::Vector3d w = rgb_to_xyz() * Eigen::Vector3d::Ones();
  return w;
}

double decode_channel(std::uint8_t v) {
  const double c = v / 255.0;
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double encode_channel(double linear) {
  return linear <= 0.0031308 ? 12.92 * linear : 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

constexpr double kDelta = 6.0 / 29.0;

double lab_f(double t) {
  return t > kDelta * kDelta * kDelta ? std::cbrt(t) : t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

double lab_f_inv(double f) { return f > kDelta ? f * f * f : 3.0 * kDelta * kDelta * (f - 4.0 / 29.0); }

Eigen::Vector3d to_linear(ColorSRGB c) { return {decode_channel(c.r), decode_channel(c.g), decode_channel(c.b)}; }

std::uint8_t quantize(double linear) {
  const double v = 255.0 * encode_channel(std::max(linear, 0.0));
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

double min_pairwise(std::span<const ColorLab> colors) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < colors.size(); ++i) {
    for (std::size_t j = i + 1; j < colors.size(); ++j) best = std::min(best, delta_e(colors[i], colors[j]));
  }
  return best;
}

std::vector<ColorLab> to_lab(std::span<const ColorSRGB> colors) {
  std::vector<ColorLab> out;
  out.reserve(colors.size());
  for (ColorSRGB c : colors) out.push_back(srgb_to_lab(c));
  return out;
}

}  // namespace

ColorLab srgb_to_lab(ColorSRGB c) {
  const Eigen::Vector3d xyz = (rgb_to_xyz() * to_linear(c)).cwiseQuotient(white_point());
  const double fx = lab_f(xyz.x());
  const double fy = lab_f(xyz.y());
  const double fz = lab_f(xyz.z());
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

ColorSRGB lab_to_srgb(const ColorLab& c) {
  if (!std::isfinite(c.L) || !std::isfinite(c.a) || !std::isfinite(c.b)) throw GamutError("non-finite Lab colour");
  const double fy = (c.L + 16.0) / 116.0;
  const double fx = fy + c.a / 500.0;
  const double fz = fy - c.b / 200.0;
  const Eigen::Vector3d xyz = Eigen::Vector3d(lab_f_inv(fx), lab_f_inv(fy), lab_f_inv(fz)).cwiseProduct(white_point());
  const Eigen::Vector3d linear = xyz_to_rgb() * xyz;
  std::array<std::uint8_t, 3> out{};
  for (int k = 0; k < 3; ++k) {
    const double l = linear[k];
    const double encoded = 255.0 * (l < 0.0 ? 12.92 * l : encode_channel(l));
    if (encoded < -0.5 || encoded >= 255.5) throw GamutError("Lab colour lies outside the sRGB gamut");
    out[static_cast<std::size_t>(k)] = quantize(l);
  }
  return {out[0], out[1], out[2]};
}

double delta_e(const ColorLab& c1, const ColorLab& c2) {
  return std::sqrt((c1.L - c2.L) * (c1.L - c2.L) + (c1.a - c2.a) * (c1.a - c2.a) + (c1.b - c2.b) * (c1.b - c2.b));
}

double delta_e(ColorSRGB c1, ColorSRGB c2) { return delta_e(srgb_to_lab(c1), srgb_to_lab(c2)); }

ColorSRGB linear_mean(std::span<const ColorSRGB> colors) {
  if (colors.empty()) throw ParameterError("mean of an empty colour list");
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (ColorSRGB c : colors) sum += to_linear(c);
  const Eigen::Vector3d mean = sum / static_cast<double>(colors.size());
  return {quantize(mean.x()), quantize(mean.y()), quantize(mean.z())};
}

std::string_view to_string(PaletteSource source) { return source == PaletteSource::ishihara ? "ishihara" : "sampled"; }

std::string_view to_string(PaletteCategory category) {
  switch (category) {
    case PaletteCategory::dual: return "dual";
    case PaletteCategory::tri: return "tri";
    case PaletteCategory::multi: return "multi";
  }
  return "dual";
}

SeparationStats measure_separation(const PaletteConfig& palette) {
  const auto fg = to_lab(palette.fg);
  const auto bg = to_lab(palette.bg);
  SeparationStats s;
  s.min_intra = std::min(min_pairwise(fg), min_pairwise(bg));
  s.min_cross = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const ColorLab& f : fg) {
    for (const ColorLab& b : bg) {
      const double d = delta_e(f, b);
      sum += d;
      s.min_cross = std::min(s.min_cross, d);
      s.max_cross = std::max(s.max_cross, d);
    }
  }
  s.mean_cross = sum / static_cast<double>(fg.size() * bg.size());
  return s;
}

namespace {

ColorSRGB parse_color(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(where + ": colour must be [r, g, b]");
  std::array<std::uint8_t, 3> c{};
  for (std::size_t k = 0; k < 3; ++k) {
    if (!j[k].is_number_integer()) throw ConfigError(where + ": colour channels must be integers");
    const auto v = j[k].get<long long>();
    if (v < 0 || v > 255) throw ConfigError(where + ": colour channel out of range");
    c[k] = static_cast<std::uint8_t>(v);
  }
  return {c[0], c[1], c[2]};
}

std::vector<ColorSRGB> parse_side(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + " must be a non-empty colour array");
  std::vector<ColorSRGB> out;
  for (const auto& c : j) out.push_back(parse_color(c, where));
  return out;
}

void check_category(const PaletteConfig& p) {
  const auto within = [](std::size_t n, std::size_t lo, std::size_t hi) { return n >= lo && n <= hi; };
  bool ok = true;
  switch (*p.category) {
    case PaletteCategory::dual: ok = p.fg.size() == 2 && p.bg.size() == 2; break;
    case PaletteCategory::tri: ok = within(p.fg.size(), 3, 4) && within(p.bg.size(), 3, 4); break;
    case PaletteCategory::multi: ok = p.fg.size() > 4 && p.bg.size() > 4; break;
  }
  if (!ok) throw ConfigError(p.id + ": colour counts do not match category " + std::string(to_string(*p.category)));
}

}  // namespace

std::vector<PaletteConfig> parse_palette_registry(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("palette registry is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ConfigError("palette registry must be a JSON array");
  static const std::set<std::string> allowed{"id", "source", "category", "fg", "bg"};
  std::vector<PaletteConfig> out;
  std::set<std::string> seen;
  for (const auto& entry : doc) {
    if (!entry.is_object()) throw ConfigError("palette entry must be an object");
    for (const auto& [key, value] : entry.items()) {
      if (!allowed.contains(key)) throw ConfigError("unknown palette key '" + key + "'");
    }
    if (!entry.contains("id") || !entry["id"].is_string()) throw ConfigError("palette entry lacks a string id");
    PaletteConfig p;
    p.id = entry["id"].get<std::string>();
    if (!seen.insert(p.id).second) throw ConfigError("duplicate palette id " + p.id);
    if (parse_sampled_id(p.id)) throw ConfigError(p.id + ": id collides with a sampler configuration");
    const std::string source = entry.value("source", "");
    if (source == "ishihara") {
      p.source = PaletteSource::ishihara;
    } else if (source == "sampled") {
      p.source = PaletteSource::sampled;
    } else {
      throw ConfigError(p.id + ": source must be 'ishihara' or 'sampled'");
    }
    if (entry.contains("category")) {
      const std::string cat = entry["category"].is_string() ? entry["category"].get<std::string>() : "";
      if (cat == "dual") p.category = PaletteCategory::dual;
      else if (cat == "tri") p.category = PaletteCategory::tri;
      else if (cat == "multi") p.category = PaletteCategory::multi;
      else throw ConfigError(p.id + ": unknown category '" + cat + "'");
    } else if (p.source == PaletteSource::ishihara) {
      throw ConfigError(p.id + ": ishihara palettes need a category");
    }
    if (!entry.contains("fg") || !entry.contains("bg")) throw ConfigError(p.id + ": missing fg or bg");
    p.fg = parse_side(entry["fg"], p.id + ".fg");
    p.bg = parse_side(entry["bg"], p.id + ".bg");
    if (p.category) check_category(p);
    const SeparationStats stats = measure_separation(p);
    if (!(stats.min_intra > 0.0)) throw ConfigError(p.id + ": duplicate colours on one side");
    p.min_intra_dE = stats.min_intra;
    p.fg_bg_dE_range = {stats.min_cross, stats.max_cross};
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<PaletteConfig> load_palette_registry(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open palette registry " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_palette_registry(buffer.str());
}

const std::vector<PaletteConfig>& builtin_palettes() {
  static const std::vector<PaletteConfig> registry = parse_palette_registry(embedded::kPaletteRegistry);
  return registry;
}

std::vector<std::string> sampled_config_ids() {
  std::vector<std::string> ids;
  for (int f = 2; f <= 5; ++f) {
    for (int b = 2; b <= 5; ++b) ids.push_back("sampled-" + std::to_string(f) + "x" + std::to_string(b));
  }
  return ids;
}

std::optional<std::pair<int, int>> parse_sampled_id(std::string_view id) {
  constexpr std::string_view prefix = "sampled-";
  if (id.size() != prefix.size() + 3 || !id.starts_with(prefix) || id[prefix.size() + 1] != 'x') return std::nullopt;
  const char f = id[prefix.size()];
  const char b = id[prefix.size() + 2];
  if (f < '2' || f > '5' || b < '2' || b > '5') return std::nullopt;
  return std::pair{f - '0', b - '0'};
}

namespace {

constexpr int kPaletteAttempts = 10'000;
constexpr int kDrawsPerColor = 500;

ColorSRGB uniform_color(Rng& rng) {
  return {static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
          static_cast<std::uint8_t>(rng.below(256))};
}

}  // namespace

PaletteConfig sample_palette(Rng& rng, int n_fg, int n_bg, const SamplingConstraints& constraints) {
  if (n_fg < 2 || n_fg > 5 || n_bg < 2 || n_bg > 5) throw ParameterError("palette sides need 2..5 colours");
  if (!(constraints.fg_bg_lo < constraints.fg_bg_hi)) throw ParameterError("fg_bg_lo must be below fg_bg_hi");

  PaletteConfig p;
  p.id = "sampled-" + std::to_string(n_fg) + "x" + std::to_string(n_bg);
  p.source = PaletteSource::sampled;
  p.min_intra_dE = constraints.min_intra_dE;
  p.fg_bg_dE_range = {constraints.fg_bg_lo, constraints.fg_bg_hi};

  // Proposals are uniform in sRGB; each colour is redrawn locally until it is
  // compatible with the colours already chosen, which keeps the whole-palette
  // acceptance rate practical. The final predicates are re-checked in full.
  for (int attempt = 0; attempt < kPaletteAttempts; ++attempt) {
    std::vector<ColorSRGB> fg{uniform_color(rng)};
    std::vector<ColorLab> fg_lab{srgb_to_lab(fg.front())};
    std::vector<ColorSRGB> bg;
    std::vector<ColorLab> bg_lab;
    bool failed = false;

    while (!failed && static_cast<int>(fg.size()) < n_fg) {
      bool placed = false;
      for (int draw = 0; draw < kDrawsPerColor && !placed; ++draw) {
        const ColorSRGB c = uniform_color(rng);
        const ColorLab lab = srgb_to_lab(c);
        if (delta_e(lab, fg_lab.front()) > constraints.fg_bg_hi) continue;
        if (std::any_of(fg_lab.begin(), fg_lab.end(),
                        [&](const ColorLab& o) { return delta_e(lab, o) < constraints.min_intra_dE; })) {
          continue;
        }
        fg.push_back(c);
        fg_lab.push_back(lab);
        placed = true;
      }
      failed = !placed;
    }

    while (!failed && static_cast<int>(bg.size()) < n_bg) {
      bool placed = false;
      for (int draw = 0; draw < kDrawsPerColor && !placed; ++draw) {
        const ColorSRGB c = uniform_color(rng);
        const ColorLab lab = srgb_to_lab(c);
        if (std::any_of(bg_lab.begin(), bg_lab.end(),
                        [&](const ColorLab& o) { return delta_e(lab, o) < constraints.min_intra_dE; })) {
          continue;
        }
        double sum = 0.0;
        bool too_close = false;
        for (const ColorLab& f : fg_lab) {
          const double d = delta_e(lab, f);
          too_close = too_close || d < constraints.fg_bg_lo / 2.0;
          sum += d;
        }
        const double mean = sum / static_cast<double>(fg_lab.size());
        if (too_close || mean < constraints.fg_bg_lo || mean > constraints.fg_bg_hi) continue;
        bg.push_back(c);
        bg_lab.push_back(lab);
        placed = true;
      }
      failed = !placed;
    }

    if (failed) continue;
    p.fg = std::move(fg);
    p.bg = std::move(bg);
    if (satisfies_constraints(p)) return p;
  }
  throw SamplingError("palette sampler exhausted " + std::to_string(kPaletteAttempts) + " attempts for " + p.id);
}

bool satisfies_constraints(const PaletteConfig& palette) {
  if (palette.fg.empty() || palette.bg.empty()) return false;
  const SeparationStats s = measure_separation(palette);
  if (palette.source == PaletteSource::ishihara) {
    return s.min_intra >= palette.min_intra_dE && s.min_cross >= palette.fg_bg_dE_range[0] &&
           s.max_cross <= palette.fg_bg_dE_range[1];
  }
  const auto [lo, hi] = palette.fg_bg_dE_range;
  return s.min_intra >= palette.min_intra_dE && s.mean_cross >= lo && s.mean_cross <= hi && s.min_cross >= lo / 2.0;
}

void assign_colors(std::span<PackedElement> elements, const PaletteConfig& palette, Rng& rng) {
  if (palette.fg.empty() || palette.bg.empty()) throw ParameterError("palette sides must be non-empty");
  for (PackedElement& e : elements) {
    const std::size_t n = e.side == Side::figure ? palette.fg.size() : palette.bg.size();
    e.color_index = static_cast<int>(rng.below(n));
  }
}

}  // namespace chromou
