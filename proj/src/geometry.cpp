#include "chromou/geometry.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <numbers>
#include <span>
#include <string>

#include "chromou/errors.hpp"

namespace chromou {

namespace {

Ring polar_ring(const Point& center, double rotation, std::span<const double> radii) {
  const auto n = static_cast<Eigen::Index>(radii.size());
  Ring ring(2, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double angle = rotation + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    ring.col(k) = center + radii[static_cast<std::size_t>(k)] * Point(std::cos(angle), std::sin(angle));
  }
  return ring;
}

Ring uniform_polygon(const Point& center, double radius, double rotation, int sides) {
  std::vector<double> radii(static_cast<std::size_t>(sides), radius);
  return polar_ring(center, rotation, radii);
}

Ring star_ring(const Point& center, double radius, double rotation, const Star& star) {
  std::vector<double> radii;
  for (int k = 0; k < star.points; ++k) {
    radii.push_back(radius);
    radii.push_back(radius * star.inner_ratio);
  }
  return polar_ring(center, rotation, radii);
}

// Plus sign whose arm-end corners touch the circumscribing circle.
Ring cross_ring(const Point& center, double radius, double rotation, const Cross& cross) {
  const double ratio = cross.arm_width_ratio;
  const double half_side = radius / std::sqrt(1.0 + ratio * ratio);
  const double half_arm = ratio * half_side;
  const double s = half_side;
  const double w = half_arm;
  Ring local(2, 12);
  // clang-format off
  local << s,  w,  w, -w, -w, -s, -s, -w, -w,  w,  w,  s,
           w,  w,  s,  s,  w,  w, -w, -w, -s, -s, -w, -w;
  // clang-format on
  const Eigen::Rotation2Dd rot(rotation);
  return (rot.toRotationMatrix() * local).colwise() + center;
}

BoundingBox ring_bounds(const Ring& ring) {
  return {ring.rowwise().minCoeff(), ring.rowwise().maxCoeff()};
}

}  // namespace

void validate(const ShapeKind& kind) {
  std::visit(
      [](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, RegularPolygon>) {
          if (k.sides < 3) throw ParameterError("regular polygon needs at least 3 sides");
        } else if constexpr (std::is_same_v<K, Star>) {
          if (k.points < 4) throw ParameterError("star needs at least 4 points");
          if (!(k.inner_ratio > 0.0 && k.inner_ratio < 1.0)) {
            throw ParameterError("star inner ratio must lie in (0, 1)");
          }
        } else if constexpr (std::is_same_v<K, Cross>) {
          if (!(k.arm_width_ratio > 0.0 && k.arm_width_ratio < 1.0)) {
            throw ParameterError("cross arm width ratio must lie in (0, 1)");
          }
        }
      },
      kind);
}

Outline::Outline(Ring ring) : Outline(std::vector<Ring>{std::move(ring)}) {}

Outline::Outline(std::vector<Ring> rings) : rings_(std::move(rings)) {
  if (rings_.empty()) throw ParameterError("outline needs at least one ring");
  bool first = true;
  for (const Ring& ring : rings_) {
    const Eigen::Index n = ring.cols();
    if (n < 3) throw ParameterError("ring has " + std::to_string(n) + " vertices, need at least 3");
    if (!ring.allFinite()) throw ParameterError("ring has a non-finite coordinate");
    for (Eigen::Index i = 0; i < n; ++i) {
      if (ring.col(i) == ring.col((i + 1) % n)) {
        throw ParameterError("ring has consecutive duplicate vertices");
      }
    }
    const BoundingBox b = ring_bounds(ring);
    if (first) {
      bounds_ = b;
      first = false;
    } else {
      bounds_.extend(b);
    }
  }
}

std::size_t Outline::vertex_count() const {
  std::size_t total = 0;
  for (const Ring& ring : rings_) total += static_cast<std::size_t>(ring.cols());
  return total;
}

Outline make_outline(const ShapeKind& kind, const Point& center, double radius, double rotation) {
  validate(kind);
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ParameterError("radius must be positive");
  if (!center.allFinite() || !std::isfinite(rotation)) throw ParameterError("non-finite placement");
  return std::visit(
      [&](const auto& k) -> Outline {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, CircleApprox>) {
          return Outline(uniform_polygon(center, radius, rotation, CircleApprox::kSides));
        } else if constexpr (std::is_same_v<K, RegularPolygon>) {
          return Outline(uniform_polygon(center, radius, rotation, k.sides));
        } else if constexpr (std::is_same_v<K, Star>) {
          return Outline(star_ring(center, radius, rotation, k));
        } else {
          return Outline(cross_ring(center, radius, rotation, k));
        }
      },
      kind);
}

bool point_inside(const Outline& outline, const Point& p) {
  if (!outline.bounds().contains(p)) return false;
  bool inside = false;
  const double px = p.x();
  const double py = p.y();
  for (const Ring& ring : outline.rings()) {
    const Eigen::Index n = ring.cols();
    for (Eigen::Index i = 0, j = n - 1; i < n; j = i++) {
      const double yi = ring(1, i);
      const double yj = ring(1, j);
      if ((yi > py) != (yj > py)) {
        const double xi = ring(0, i);
        const double xj = ring(0, j);
        const double x_cross = xi + (py - yi) * (xj - xi) / (yj - yi);
        if (x_cross > px) inside = !inside;
      }
    }
  }
  return inside;
}

double signed_ring_area(const Ring& ring) {
  const Eigen::Index n = ring.cols();
  double twice = 0.0;
  for (Eigen::Index i = 0, j = n - 1; i < n; j = i++) {
    twice += ring(0, j) * ring(1, i) - ring(0, i) * ring(1, j);
  }
  return 0.5 * twice;
}

double polygon_area(const Outline& outline) {
  double area = 0.0;
  for (const Ring& ring : outline.rings()) area += std::abs(signed_ring_area(ring));
  return area;
}

Point centroid(const Outline& outline) {
  Point weighted = Point::Zero();
  double total = 0.0;
  for (const Ring& ring : outline.rings()) {
    const Eigen::Index n = ring.cols();
    const double a = signed_ring_area(ring);
    if (a == 0.0) continue;
    Point c = Point::Zero();
    for (Eigen::Index i = 0, j = n - 1; i < n; j = i++) {
      const double cross = ring(0, j) * ring(1, i) - ring(0, i) * ring(1, j);
      c += (ring.col(j) + ring.col(i)) * cross;
    }
    c /= 6.0 * a;
    weighted += std::abs(a) * c;
    total += std::abs(a);
  }
  if (total == 0.0) {
    // Degenerate area; fall back to the vertex mean.
    for (const Ring& ring : outline.rings()) weighted += ring.rowwise().sum();
    return weighted / static_cast<double>(outline.vertex_count());
  }
  return weighted / total;
}

Outline transform(const Outline& outline, double rotation, double scale, const Point& translate) {
  if (!(scale > 0.0)) throw ParameterError("scale must be positive");
  const Point pivot = centroid(outline);
  const Eigen::Matrix2d linear = scale * Eigen::Rotation2Dd(rotation).toRotationMatrix();
  std::vector<Ring> rings;
  rings.reserve(outline.rings().size());
  for (const Ring& ring : outline.rings()) {
    Ring moved = (linear * (ring.colwise() - pivot)).colwise() + (pivot + translate);
    rings.push_back(std::move(moved));
  }
  return Outline(std::move(rings));
}

Outline rotate_about(const Outline& outline, const Point& pivot, double rotation) {
  const Eigen::Matrix2d rot = Eigen::Rotation2Dd(rotation).toRotationMatrix();
  std::vector<Ring> rings;
  for (const Ring& ring : outline.rings()) {
    rings.emplace_back((rot * (ring.colwise() - pivot)).colwise() + pivot);
  }
  return Outline(std::move(rings));
}

Outline translated(const Outline& outline, const Point& offset) {
  std::vector<Ring> rings;
  for (const Ring& ring : outline.rings()) rings.emplace_back(ring.colwise() + offset);
  return Outline(std::move(rings));
}

BoundingBox bounds_of(const std::vector<Outline>& outlines) {
  if (outlines.empty()) return {Point::Zero(), Point::Zero()};
  BoundingBox box = outlines.front().bounds();
  for (const Outline& o : outlines) box.extend(o.bounds());
  return box;
}

}  // namespace chromou
