#include "codeaug/frontend/normalize.hpp"

#include <sstream>

#include "codeaug/frontend/lexer.hpp"

namespace codeaug {
namespace {

// CRLF becomes LF, trailing blanks and blank lines go away, and every line
// ends with exactly one newline. Tabs inside lines are left alone since they
// may sit in string literals.
std::string canonical_whitespace(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
      line.pop_back();
    }
    if (line.empty()) continue;
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace

SourceUnit normalize(const SourceUnit& unit, const std::string& prelude) {
  std::string body = canonical_whitespace(strip_comments(unit.text));
  std::string canon_prelude = canonical_whitespace(prelude);
  std::string text = body.compare(0, canon_prelude.size(), canon_prelude) == 0 ? body : canon_prelude + body;
  SourceUnit out{std::move(text), unit.origin};
  parse(out);
  return out;
}

}  // namespace codeaug
