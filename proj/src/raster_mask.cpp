#include "chromou/raster_mask.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "chromou/errors.hpp"
#include "chromou/png_io.hpp"

namespace chromou {

BitMask::BitMask(int width, int height, bool fill) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) throw ParameterError("mask dimensions must be positive");
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill ? 1 : 0);
}

std::size_t BitMask::foreground_count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool pixel_covered(const Outline& outline, int x, int y) {
  int hits = 0;
  for (double oy : kSubsampleOffsets) {
    for (double ox : kSubsampleOffsets) {
      if (point_inside(outline, Point(x + ox, y + oy))) ++hits;
    }
  }
  return hits >= 2;
}

BitMask rasterize(std::span<const Outline> outlines, int width, int height) {
  BitMask mask(width, height);
  if (outlines.empty()) return mask;

  // Pixel ranges per outline; a subsample is inside the union when any outline
  // whose box holds it reports an odd crossing count.
  struct Span2 {
    int x0, x1, y0, y1;
  };
  std::vector<Span2> boxes;
  boxes.reserve(outlines.size());
  int gx0 = width, gx1 = -1, gy0 = height, gy1 = -1;
  for (const Outline& o : outlines) {
    const BoundingBox& b = o.bounds();
    Span2 s{std::max(0, static_cast<int>(std::floor(b.min.x()))), std::min(width - 1, static_cast<int>(std::floor(b.max.x()))),
            std::max(0, static_cast<int>(std::floor(b.min.y()))), std::min(height - 1, static_cast<int>(std::floor(b.max.y())))};
    boxes.push_back(s);
    if (s.x0 > s.x1 || s.y0 > s.y1) continue;
    gx0 = std::min(gx0, s.x0);
    gx1 = std::max(gx1, s.x1);
    gy0 = std::min(gy0, s.y0);
    gy1 = std::max(gy1, s.y1);
  }

  std::vector<std::size_t> active;
  for (int y = gy0; y <= gy1; ++y) {
    for (int x = gx0; x <= gx1; ++x) {
      active.clear();
      for (std::size_t k = 0; k < boxes.size(); ++k) {
        const Span2& s = boxes[k];
        if (x >= s.x0 && x <= s.x1 && y >= s.y0 && y <= s.y1) active.push_back(k);
      }
      if (active.empty()) continue;
      int hits = 0;
      for (double oy : kSubsampleOffsets) {
        for (double ox : kSubsampleOffsets) {
          const Point p(x + ox, y + oy);
          for (std::size_t k : active) {
            if (point_inside(outlines[k], p)) {
              ++hits;
              break;
            }
          }
        }
      }
      if (hits >= 2) mask.set(x, y, true);
    }
  }
  return mask;
}

BitMask import_mask(const GrayImage& image, int threshold, int width, int height) {
  if (image.width <= 0 || image.height <= 0 ||
      image.pixels.size() != static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height)) {
    throw InputError("grayscale image has inconsistent dimensions");
  }
  if (threshold < 0 || threshold > 255) throw ParameterError("threshold must lie in [0, 255]");
  BitMask mask(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(image.height - 1, static_cast<int>((static_cast<long long>(y) * image.height) / height));
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(image.width - 1, static_cast<int>((static_cast<long long>(x) * image.width) / width));
      const std::uint8_t v = image.pixels[static_cast<std::size_t>(sy) * static_cast<std::size_t>(image.width) + static_cast<std::size_t>(sx)];
      mask.set(x, y, v < threshold);
    }
  }
  return mask;
}

namespace {

GrayImage parse_pbm_p4(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  std::size_t pos = 2;
  auto next_int = [&]() -> int {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    long value = 0;
    bool any = false;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      value = value * 10 + (bytes[pos] - '0');
      if (value > 1 << 20) throw InputError(name + ": PBM dimension too large");
      any = true;
      ++pos;
    }
    if (!any) throw InputError(name + ": malformed PBM header");
    return static_cast<int>(value);
  };
  GrayImage img;
  img.width = next_int();
  img.height = next_int();
  if (img.width <= 0 || img.height <= 0) throw InputError(name + ": empty PBM");
  ++pos;  // single whitespace before raster
  const std::size_t row_bytes = (static_cast<std::size_t>(img.width) + 7) / 8;
  if (bytes.size() < pos + row_bytes * static_cast<std::size_t>(img.height)) {
    throw InputError(name + ": truncated PBM raster");
  }
  img.pixels.resize(static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height));
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const std::uint8_t byte = bytes[pos + static_cast<std::size_t>(y) * row_bytes + static_cast<std::size_t>(x / 8)];
      const bool black = (byte >> (7 - x % 8)) & 1;
      img.pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width) + static_cast<std::size_t>(x)] = black ? 0 : 255;
    }
  }
  return img;
}

}  // namespace

GrayImage load_gray_image(const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes;
  try {
    bytes = read_file(path);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  const std::string name = path.string();
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '4') return parse_pbm_p4(bytes, name);

  const Image rgb = decode_png(bytes);
  GrayImage gray{rgb.width, rgb.height, {}};
  gray.pixels.reserve(static_cast<std::size_t>(rgb.width) * static_cast<std::size_t>(rgb.height));
  for (std::size_t i = 0; i + 2 < rgb.pixels.size(); i += 3) {
    // Rec. 601 luma; identical channels map to themselves.
    const int luma = (299 * rgb.pixels[i] + 587 * rgb.pixels[i + 1] + 114 * rgb.pixels[i + 2] + 500) / 1000;
    gray.pixels.push_back(static_cast<std::uint8_t>(luma));
  }
  return gray;
}

OcclusionResult apply_occluders(const BitMask& mask, std::span<const Occluder> occluders) {
  const std::size_t before = mask.foreground_count();
  if (before == 0) throw InputError("occlusion requires a mask with foreground");
  for (const Occluder& o : occluders) {
    if (!(o.radius > 0.0)) throw ParameterError("occluder radius must be positive");
    if (o.center.x() < 0 || o.center.y() < 0 || o.center.x() > mask.width() || o.center.y() > mask.height()) {
      throw ParameterError("occluder centre outside the canvas");
    }
  }
  BitMask out = mask;
  for (const Occluder& o : occluders) {
    const int x0 = std::max(0, static_cast<int>(std::floor(o.center.x() - o.radius)));
    const int x1 = std::min(mask.width() - 1, static_cast<int>(std::ceil(o.center.x() + o.radius)));
    const int y0 = std::max(0, static_cast<int>(std::floor(o.center.y() - o.radius)));
    const int y1 = std::min(mask.height() - 1, static_cast<int>(std::ceil(o.center.y() + o.radius)));
    const double r2 = o.radius * o.radius;
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        if ((Point(x + 0.5, y + 0.5) - o.center).squaredNorm() <= r2) out.set(x, y, false);
      }
    }
  }
  const std::size_t after = out.foreground_count();
  return {std::move(out), static_cast<double>(before - after) / static_cast<double>(before)};
}

double coverage(const BitMask& mask) {
  return static_cast<double>(mask.foreground_count()) /
         (static_cast<double>(mask.width()) * static_cast<double>(mask.height()));
}

BitMask rotate_mask(const BitMask& mask, double rotation) {
  BitMask out(mask.width(), mask.height());
  const Point pivot(mask.width() / 2.0, mask.height() / 2.0);
  const double c = std::cos(rotation);
  const double s = std::sin(rotation);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      // Inverse map the destination pixel centre back into the source.
      const Point d = Point(x + 0.5, y + 0.5) - pivot;
      const Point src(c * d.x() + s * d.y() + pivot.x(), -s * d.x() + c * d.y() + pivot.y());
      const int sx = static_cast<int>(std::floor(src.x()));
      const int sy = static_cast<int>(std::floor(src.y()));
      if (sx >= 0 && sy >= 0 && sx < mask.width() && sy < mask.height() && mask.at(sx, sy)) out.set(x, y, true);
    }
  }
  return out;
}

BitMask mask_union(const BitMask& a, const BitMask& b) {
  if (a.width() != b.width() || a.height() != b.height()) throw ParameterError("mask size mismatch");
  BitMask out = a;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      if (b.at(x, y)) out.set(x, y, true);
    }
  }
  return out;
}

}  // namespace chromou
