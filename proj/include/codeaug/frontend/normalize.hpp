#pragma once

#include <string>

#include "codeaug/frontend/parser.hpp"

namespace codeaug {

/// Prelude shared by every program so that both stdio and stream IO compile.
inline constexpr const char* kDefaultPrelude =
    "#include <stdio.h>\n#include <iostream>\nusing namespace std;\n";

/// Strips comments, canonicalizes whitespace and prepends `prelude` unless the
/// text already starts with it. The result is checked by parsing it.
SourceUnit normalize(const SourceUnit& unit, const std::string& prelude = kDefaultPrelude);

}  // namespace codeaug
