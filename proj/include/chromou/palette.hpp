#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chromou/packing.hpp"
#include "chromou/random.hpp"

namespace chromou {

struct ColorSRGB {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  auto operator<=>(const ColorSRGB&) const = default;
};

/// CIE 1976 L*a*b*, D65 white, 2 degree observer.
struct ColorLab {
  double L = 0.0;
  double a = 0.0;
  double b = 0.0;
};

ColorLab srgb_to_lab(ColorSRGB c);

/// Throws GamutError when the colour falls outside the 8-bit sRGB cube by more
/// than half a code value; never clamps.
ColorSRGB lab_to_srgb(const ColorLab& c);

/// CIE76 distance.
double delta_e(const ColorLab& c1, const ColorLab& c2);
double delta_e(ColorSRGB c1, ColorSRGB c2);

/// Linear-light mean of the colours, re-encoded and rounded.
ColorSRGB linear_mean(std::span<const ColorSRGB> colors);

enum class PaletteSource { ishihara, sampled };
enum class PaletteCategory { dual, tri, multi };

std::string_view to_string(PaletteSource source);
std::string_view to_string(PaletteCategory category);

struct PaletteConfig {
  std::string id;
  PaletteSource source = PaletteSource::sampled;
  std::optional<PaletteCategory> category;
  std::vector<ColorSRGB> fg;
  std::vector<ColorSRGB> bg;
  double min_intra_dE = 0.0;
  /// Sampled palettes: accepted band for the mean cross-side distance.
  /// Registry palettes: measured min and max cross-side pair distance.
  std::array<double, 2> fg_bg_dE_range{0.0, 0.0};
};

struct SeparationStats {
  double min_intra = 0.0;
  double mean_cross = 0.0;
  double min_cross = 0.0;
  double max_cross = 0.0;
};

SeparationStats measure_separation(const PaletteConfig& palette);

struct SamplingConstraints {
  double min_intra_dE = 12.0;
  double fg_bg_lo = 18.0;
  double fg_bg_hi = 45.0;
};

/// Parses the JSON registry format. Throws ConfigError on unknown keys,
/// malformed colours, or category/size mismatches.
std::vector<PaletteConfig> parse_palette_registry(std::string_view json_text);
std::vector<PaletteConfig> load_palette_registry(const std::filesystem::path& path);

/// The nine bundled plate-derived palettes.
const std::vector<PaletteConfig>& builtin_palettes();

/// The 16 sampler configurations "sampled-<fg>x<bg>" for fg, bg in 2..5.
std::vector<std::string> sampled_config_ids();

/// (n_fg, n_bg) for a "sampled-<fg>x<bg>" id, nullopt otherwise.
std::optional<std::pair<int, int>> parse_sampled_id(std::string_view id);

/// Rejection sampler. Colour proposals are uniform over the sRGB cube; a
/// palette is accepted only when every intra-side pair is at least
/// min_intra_dE apart, the mean cross-side distance lies in [lo, hi] and every
/// cross-side pair is at least lo / 2 apart. Throws SamplingError after 10,000
/// palette attempts.
PaletteConfig sample_palette(Rng& rng, int n_fg, int n_bg, const SamplingConstraints& constraints = {});

/// True when the palette satisfies its own recorded sampling constraints.
bool satisfies_constraints(const PaletteConfig& palette);

/// Figure elements draw uniformly over fg, ground elements over bg, in
/// element order.
void assign_colors(std::span<PackedElement> elements, const PaletteConfig& palette, Rng& rng);

}  // namespace chromou
