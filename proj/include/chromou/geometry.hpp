#pragma once

#include <Eigen/Core>
#include <variant>
#include <vector>

namespace chromou {

/// Canvas coordinates in pixels, x to the right, y down.
using Point = Eigen::Vector2d;

/// One closed ring, one vertex per column; the closing edge is implicit.
using Ring = Eigen::Matrix2Xd;

struct CircleApprox {
  static constexpr int kSides = 32;
};
struct RegularPolygon {
  int sides = 4;
};
struct Star {
  int points = 5;
  double inner_ratio = 0.5;
};
struct Cross {
  double arm_width_ratio = 1.0 / 3.0;
};

using ShapeKind = std::variant<CircleApprox, RegularPolygon, Star, Cross>;

/// Throws ParameterError when the kind's parameters are out of range.
void validate(const ShapeKind& kind);

struct BoundingBox {
  Point min;
  Point max;

  bool contains(const Point& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() && p.y() <= max.y();
  }
  void extend(const BoundingBox& other) {
    min = min.cwiseMin(other.min);
    max = max.cwiseMax(other.max);
  }
};

/// Closed polygonal curve made of one or more simple rings. Containment uses
/// the odd-even rule across all rings, so inner rings act as holes.
class Outline {
 public:
  Outline() = default;
  /// Throws ParameterError if any ring has fewer than 3 vertices, a repeated
  /// consecutive vertex, or a non-finite coordinate.
  explicit Outline(std::vector<Ring> rings);
  explicit Outline(Ring ring);

  const std::vector<Ring>& rings() const { return rings_; }
  const BoundingBox& bounds() const { return bounds_; }
  std::size_t vertex_count() const;

 private:
  std::vector<Ring> rings_;
  BoundingBox bounds_{Point::Zero(), Point::Zero()};
};

/// Regular construction inscribed in the circle of `radius` about `center`.
/// The first vertex sits at angle `rotation` for polygons and stars; crosses
/// start at the right arm's upper corner.
Outline make_outline(const ShapeKind& kind, const Point& center, double radius, double rotation);

/// Odd-even ray casting with a horizontal ray towards +x. An edge counts when
/// p.y lies in [min_y, max_y) of the edge and the crossing is strictly right
/// of p, so shared vertices are never counted twice.
bool point_inside(const Outline& outline, const Point& p);

/// Sum of absolute shoelace areas of all rings.
double polygon_area(const Outline& outline);

double signed_ring_area(const Ring& ring);

/// Area-weighted centroid over rings.
Point centroid(const Outline& outline);

/// Rotate about the centroid, scale about the centroid, then translate.
Outline transform(const Outline& outline, double rotation, double scale, const Point& translate);

Outline rotate_about(const Outline& outline, const Point& pivot, double rotation);
Outline translated(const Outline& outline, const Point& offset);

BoundingBox bounds_of(const std::vector<Outline>& outlines);

}  // namespace chromou
