#include "chromou/packing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chromou/errors.hpp"

namespace chromou {

std::string_view to_string(FillFamily family) {
  switch (family) {
    case FillFamily::dots: return "dots";
    case FillFamily::polygons: return "polygons";
    case FillFamily::crosses: return "crosses";
    case FillFamily::stars: return "stars";
  }
  return "dots";
}

std::optional<FillFamily> parse_fill_family(std::string_view name) {
  for (FillFamily f : kFillFamilies) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

void PackingParams::validate() const {
  if (!(r_min > 0.0 && r_min <= r_max)) throw ParameterError("packing needs 0 < r_min <= r_max");
  if (!(gap >= 0.0)) throw ParameterError("packing gap must be non-negative");
  if (max_failures <= 0) throw ParameterError("max_failures must be positive");
  if (!(target_coverage >= 0.0 && target_coverage < 0.91)) {
    throw ParameterError("target_coverage must lie in [0, 0.91)");
  }
}

double disk_coverage(std::span<const PackedElement> elements, int width, int height) {
  double area = 0.0;
  for (const PackedElement& e : elements) area += std::numbers::pi * e.radius * e.radius;
  return area / (static_cast<double>(width) * static_cast<double>(height));
}

namespace {

// Uniform grid of accepted element indices. Cell size 2*r_max + gap bounds the
// reach of any element that could constrain a candidate below r_max.
class NeighbourGrid {
 public:
  NeighbourGrid(double cell, int width, int height)
      : cell_(cell),
        cols_(std::max(1, static_cast<int>(std::ceil(width / cell)))),
        rows_(std::max(1, static_cast<int>(std::ceil(height / cell)))),
        cells_(static_cast<std::size_t>(cols_) * static_cast<std::size_t>(rows_)) {}

  void insert(const Point& c, std::size_t index) { cells_[slot(cell_x(c), cell_y(c))].push_back(index); }

  template <typename Fn>
  void for_each_near(const Point& c, Fn&& fn) const {
    const int cx = cell_x(c);
    const int cy = cell_y(c);
    for (int y = std::max(0, cy - 1); y <= std::min(rows_ - 1, cy + 1); ++y) {
      for (int x = std::max(0, cx - 1); x <= std::min(cols_ - 1, cx + 1); ++x) {
        for (std::size_t i : cells_[slot(x, y)]) fn(i);
      }
    }
  }

 private:
  int cell_x(const Point& c) const { return std::clamp(static_cast<int>(c.x() / cell_), 0, cols_ - 1); }
  int cell_y(const Point& c) const { return std::clamp(static_cast<int>(c.y() / cell_), 0, rows_ - 1); }
  std::size_t slot(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(x);
  }

  double cell_;
  int cols_;
  int rows_;
  std::vector<std::vector<std::size_t>> cells_;
};

// Keeps accepted radii strictly clear of the audit inequality despite rounding.
constexpr double kClearance = 1e-9;

}  // namespace

std::vector<PackedElement> pack(const PackingParams& params, int width, int height, Rng& rng) {
  params.validate();
  if (width <= 0 || height <= 0) throw ParameterError("canvas dimensions must be positive");

  std::vector<PackedElement> elements;
  NeighbourGrid grid(2.0 * params.r_max + params.gap, width, height);
  const double canvas_area = static_cast<double>(width) * static_cast<double>(height);
  double covered = 0.0;
  int failures = 0;

  while (failures < params.max_failures && covered / canvas_area < params.target_coverage) {
    const Point c(rng.uniform(0.0, width), rng.uniform(0.0, height));
    double admissible = std::min({c.x(), c.y(), width - c.x(), height - c.y()}) - kClearance;
    if (admissible >= params.r_min) {
      grid.for_each_near(c, [&](std::size_t i) {
        const PackedElement& other = elements[i];
        admissible = std::min(admissible, (c - other.center).norm() - other.radius - params.gap - kClearance);
      });
    }
    if (admissible < params.r_min) {
      ++failures;
      continue;
    }
    const double jitter = 1.0 - 0.1 * rng.uniform();
    PackedElement e;
    e.center = c;
    e.radius = std::max(params.r_min, std::min(admissible, params.r_max) * jitter);
    grid.insert(c, elements.size());
    elements.push_back(e);
    covered += std::numbers::pi * e.radius * e.radius;
    failures = 0;
  }
  return elements;
}

void classify(std::span<PackedElement> elements, const BitMask& mask, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw ParameterError("classification threshold must lie in (0, 1)");
  for (PackedElement& e : elements) {
    const int reach = static_cast<int>(std::ceil(2.0 * e.radius));
    const double r2 = e.radius * e.radius;
    std::size_t total = 0;
    std::size_t inside = 0;
    for (int j = -reach; j < reach; ++j) {
      const double dy = 0.25 + 0.5 * j;
      for (int i = -reach; i < reach; ++i) {
        const double dx = 0.25 + 0.5 * i;
        if (dx * dx + dy * dy > r2) continue;
        ++total;
        const int px = static_cast<int>(std::floor(e.center.x() + dx));
        const int py = static_cast<int>(std::floor(e.center.y() + dy));
        if (px >= 0 && py >= 0 && px < mask.width() && py < mask.height() && mask.at(px, py)) ++inside;
      }
    }
    e.inside_fraction = total == 0 ? 0.0 : static_cast<double>(inside) / static_cast<double>(total);
    e.side = e.inside_fraction >= theta ? Side::figure : Side::ground;
  }
}

Outline instantiate_fill(PackedElement& element, FillFamily family, Rng& rng) {
  element.rotation = rng.uniform(0.0, 2.0 * std::numbers::pi);
  switch (family) {
    case FillFamily::dots: element.fill_kind = CircleApprox{}; break;
    case FillFamily::polygons: element.fill_kind = RegularPolygon{rng.between(3, 6)}; break;
    case FillFamily::crosses: element.fill_kind = Cross{}; break;
    case FillFamily::stars: element.fill_kind = Star{}; break;
  }
  return fill_outline(element);
}

Outline fill_outline(const PackedElement& element) {
  return make_outline(element.fill_kind, element.center, element.radius * kFillInset, element.rotation);
}

}  // namespace chromou
