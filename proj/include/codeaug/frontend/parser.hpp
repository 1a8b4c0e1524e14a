#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "codeaug/frontend/ast.hpp"

namespace codeaug {

struct SourceUnit {
  std::string text;
  std::optional<std::string> origin;
};

/// Parses and resolves a complete program. Throws SyntaxError for malformed
/// or ill-typed input and UnsupportedConstruct for C/C++ outside the subset.
Ast parse(const SourceUnit& unit);
Ast parse(std::string_view text);

/// Name resolution and type annotation. Idempotent; run by parse() and again
/// after every rewrite so transformed trees are checked the same way.
void resolve(Ast& ast);

}  // namespace codeaug
