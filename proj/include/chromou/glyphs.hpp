#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "chromou/geometry.hpp"

namespace chromou {

/// Built-in 5x7 block font: A-Z, 0-9, '+', '-' / U+2212 and 'x' / U+00D7.
inline constexpr int kGlyphColumns = 5;
inline constexpr int kGlyphRows = 7;
inline constexpr int kGlyphAdvance = kGlyphColumns + 1;

/// Code points of a UTF-8 string. Throws InputError on malformed input.
std::u32string decode_utf8(std::string_view text);

bool has_glyph(char32_t c);

/// Width and height of a text block in font units.
Point text_extent_units(std::size_t glyph_count);

/// Largest unit (px per font cell) for which the text, rotated by any angle
/// about its centre, stays inside a disc of `max_diameter`; capped at `max_unit`.
double fit_text_unit(std::size_t glyph_count, double max_diameter, double max_unit);

/// One axis-aligned rectangle per horizontal run of lit cells, centred on
/// `center` and rotated about it. Throws InputError for characters without
/// a glyph.
std::vector<Outline> text_outlines(std::string_view utf8_text, const Point& center, double unit, double rotation);

}  // namespace chromou
