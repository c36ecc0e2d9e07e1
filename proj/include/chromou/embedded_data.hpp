#pragma once

#include <string_view>

// Bundled configuration files, compiled in from data/ at configure time.
namespace chromou::embedded {

extern const std::string_view kPaletteRegistry;
extern const std::string_view kQuestionTemplates;

}  // namespace chromou::embedded
