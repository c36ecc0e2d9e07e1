#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chromou/geometry.hpp"
#include "chromou/random.hpp"
#include "chromou/raster_mask.hpp"

namespace chromou {

enum class Side { figure, ground };

enum class FillFamily { dots, polygons, crosses, stars };

inline constexpr FillFamily kFillFamilies[] = {FillFamily::dots, FillFamily::polygons, FillFamily::crosses,
                                               FillFamily::stars};

std::string_view to_string(FillFamily family);
std::optional<FillFamily> parse_fill_family(std::string_view name);

struct PackedElement {
  Point center = Point::Zero();
  double radius = 0.0;
  ShapeKind fill_kind = CircleApprox{};
  double rotation = 0.0;
  Side side = Side::ground;
  int color_index = 0;
  double inside_fraction = 0.0;
};

struct PackingParams {
  double r_min = 4.0;
  double r_max = 13.0;
  double gap = 1.0;
  int max_failures = 4000;
  double target_coverage = 0.55;

  /// Throws ParameterError unless 0 < r_min <= r_max, gap >= 0,
  /// max_failures > 0 and 0 <= target_coverage < 0.91.
  void validate() const;
};

/// Fraction of the canvas covered by the elements' disks.
double disk_coverage(std::span<const PackedElement> elements, int width, int height);

/// Greedy random-candidate packing. Each candidate takes the largest radius
/// that keeps it inside the canvas and `gap` away from every accepted disk,
/// capped at r_max and jittered down by up to 10% (never below r_min).
/// Stops after max_failures consecutive rejections or once disk coverage
/// reaches target_coverage.
std::vector<PackedElement> pack(const PackingParams& params, int width, int height, Rng& rng);

/// Sets inside_fraction from the element's own 0.5 px sample grid and labels
/// it figure when inside_fraction >= theta. Throws ParameterError unless
/// theta lies in (0, 1).
void classify(std::span<PackedElement> elements, const BitMask& mask, double theta = 0.5);

inline constexpr double kFillInset = 0.95;

/// Picks the fill geometry and rotation for `element` from `rng`, stores them
/// on the element and returns the outline inscribed in 0.95 x its radius.
Outline instantiate_fill(PackedElement& element, FillFamily family, Rng& rng);

/// Outline for an element whose fill_kind and rotation are already set.
Outline fill_outline(const PackedElement& element);

}  // namespace chromou
