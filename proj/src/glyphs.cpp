#include "chromou/glyphs.hpp"

#include <array>
#include <cmath>
#include <map>

#include "chromou/errors.hpp"

namespace chromou {

namespace {

using Bitmap = std::array<std::string_view, kGlyphRows>;

// clang-format off
const std::map<char32_t, Bitmap>& font() {
  static const std::map<char32_t, Bitmap> glyphs{
    {U'A', {".###.", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}},
    {U'B', {"####.", "#...#", "#...#", "####.", "#...#", "#...#", "####."}},
    {U'C', {".###.", "#...#", "#....", "#....", "#....", "#...#", ".###."}},
    {U'D', {"####.", "#...#", "#...#", "#...#", "#...#", "#...#", "####."}},
    {U'E', {"#####", "#....", "#....", "####.", "#....", "#....", "#####"}},
    {U'F', {"#####", "#....", "#....", "####.", "#....", "#....", "#...."}},
    {U'G', {".###.", "#...#", "#....", "#.###", "#...#", "#...#", ".####"}},
    {U'H', {"#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}},
    {U'I', {".###.", "..#..", "..#..", "..#..", "..#..", "..#..", ".###."}},
    {U'J', {"..###", "...#.", "...#.", "...#.", "...#.", "#..#.", ".##.."}},
    {U'K', {"#...#", "#..#.", "#.#..", "##...", "#.#..", "#..#.", "#...#"}},
    {U'L', {"#....", "#....", "#....", "#....", "#....", "#....", "#####"}},
    {U'M', {"#...#", "##.##", "#.#.#", "#.#.#", "#...#", "#...#", "#...#"}},
    {U'N', {"#...#", "#...#", "##..#", "#.#.#", "#..##", "#...#", "#...#"}},
    {U'O', {".###.", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."}},
    {U'P', {"####.", "#...#", "#...#", "####.", "#....", "#....", "#...."}},
    {U'Q', {".###.", "#...#", "#...#", "#...#", "#.#.#", "#..#.", ".##.#"}},
    {U'R', {"####.", "#...#", "#...#", "####.", "#.#..", "#..#.", "#...#"}},
    {U'S', {".####", "#....", "#....", ".###.", "....#", "....#", "####."}},
    {U'T', {"#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."}},
    {U'U', {"#...#", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."}},
    {U'V', {"#...#", "#...#", "#...#", "#...#", "#...#", ".#.#.", "..#.."}},
    {U'W', {"#...#", "#...#", "#...#", "#.#.#", "#.#.#", "#.#.#", ".#.#."}},
    {U'X', {"#...#", "#...#", ".#.#.", "..#..", ".#.#.", "#...#", "#...#"}},
    {U'Y', {"#...#", "#...#", ".#.#.", "..#..", "..#..", "..#..", "..#.."}},
    {U'Z', {"#####", "....#", "...#.", "..#..", ".#...", "#....", "#####"}},
    {U'0', {".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###."}},
    {U'1', {"..#..", ".##..", "..#..", "..#..", "..#..", "..#..", ".###."}},
    {U'2', {".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"}},
    {U'3', {"#####", "...#.", "..#..", "...#.", "....#", "#...#", ".###."}},
    {U'4', {"...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."}},
    {U'5', {"#####", "#....", "####.", "....#", "....#", "#...#", ".###."}},
    {U'6', {"..##.", ".#...", "#....", "####.", "#...#", "#...#", ".###."}},
    {U'7', {"#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."}},
    {U'8', {".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."}},
    {U'9', {".###.", "#...#", "#...#", ".####", "....#", "...#.", ".##.."}},
    {U'+', {".....", "..#..", "..#..", "#####", "..#..", "..#..", "....."}},
    {U'−', {".....", ".....", ".....", "#####", ".....", ".....", "....."}},
    {U'×', {".....", "#...#", ".#.#.", "..#..", ".#.#.", "#...#", "....."}},
  };
  return glyphs;
}
// clang-format on

char32_t canonical(char32_t c) {
  if (c == U'-') return U'−';
  if (c == U'x' || c == U'*') return U'×';
  return c;
}

}  // namespace

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  for (std::size_t i = 0; i < text.size();) {
    const auto lead = static_cast<unsigned char>(text[i]);
    int extra = 0;
    char32_t cp = 0;
    if (lead < 0x80) {
      cp = lead;
    } else if ((lead & 0xE0) == 0xC0) {
      cp = lead & 0x1F;
      extra = 1;
    } else if ((lead & 0xF0) == 0xE0) {
      cp = lead & 0x0F;
      extra = 2;
    } else if ((lead & 0xF8) == 0xF0) {
      cp = lead & 0x07;
      extra = 3;
    } else {
      throw InputError("invalid UTF-8 lead byte");
    }
    if (i + static_cast<std::size_t>(extra) >= text.size()) throw InputError("truncated UTF-8 sequence");
    for (int k = 1; k <= extra; ++k) {
      const auto cont = static_cast<unsigned char>(text[i + static_cast<std::size_t>(k)]);
      if ((cont & 0xC0) != 0x80) throw InputError("invalid UTF-8 continuation byte");
      cp = (cp << 6) | (cont & 0x3F);
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(extra) + 1;
  }
  return out;
}

bool has_glyph(char32_t c) { return font().contains(canonical(c)); }

Point text_extent_units(std::size_t glyph_count) {
  if (glyph_count == 0) return Point::Zero();
  return {static_cast<double>(kGlyphAdvance * glyph_count - 1), static_cast<double>(kGlyphRows)};
}

double fit_text_unit(std::size_t glyph_count, double max_diameter, double max_unit) {
  const double diagonal = text_extent_units(glyph_count).norm();
  if (diagonal == 0.0) return max_unit;
  return std::min(max_unit, max_diameter / diagonal);
}

std::vector<Outline> text_outlines(std::string_view utf8_text, const Point& center, double unit, double rotation) {
  if (!(unit > 0.0)) throw ParameterError("font unit must be positive");
  const std::u32string text = decode_utf8(utf8_text);
  const Point extent = text_extent_units(text.size()) * unit;
  const Point origin = center - extent / 2.0;
  std::vector<Outline> out;
  for (std::size_t g = 0; g < text.size(); ++g) {
    const auto it = font().find(canonical(text[g]));
    if (it == font().end()) throw InputError("no glyph for character in '" + std::string(utf8_text) + "'");
    const double gx = origin.x() + static_cast<double>(g * kGlyphAdvance) * unit;
    for (int row = 0; row < kGlyphRows; ++row) {
      const std::string_view bits = it->second[static_cast<std::size_t>(row)];
      for (int col = 0; col < kGlyphColumns;) {
        if (bits[static_cast<std::size_t>(col)] != '#') {
          ++col;
          continue;
        }
        int end = col;
        while (end < kGlyphColumns && bits[static_cast<std::size_t>(end)] == '#') ++end;
        const double x0 = gx + col * unit;
        const double x1 = gx + end * unit;
        const double y0 = origin.y() + row * unit;
        const double y1 = y0 + unit;
        Ring rect(2, 4);
        rect << x0, x1, x1, x0, y0, y0, y1, y1;
        Outline piece(std::move(rect));
        out.push_back(rotation == 0.0 ? std::move(piece) : rotate_about(piece, center, rotation));
        col = end;
      }
    }
  }
  return out;
}

}  // namespace chromou
