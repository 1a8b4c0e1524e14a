#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "codeaug/frontend/ast.hpp"

namespace codeaug {

struct Token {
  enum class Kind { Ident, Keyword, IntLit, FloatLit, CharLit, StringLit, Punct, Directive, End };

  Kind kind = Kind::End;
  std::string text;   // spelling; decoded value for char/string literals
  std::int64_t int_value = 0;
  double float_value = 0.0;
  SourcePos pos;
};

/// Splits mini-language source into tokens. Comments are skipped; a line
/// starting with `#` becomes a single Directive token.
std::vector<Token> tokenize(std::string_view text);

/// Removes // and /* */ comments, leaving string and character literals alone.
std::string strip_comments(std::string_view text);

/// Escapes a decoded string for use inside a double-quoted literal.
std::string escape_string(std::string_view s);
std::string escape_char(char c);

}  // namespace codeaug
