#include "codeaug/frontend/lexer.hpp"

#include <array>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <limits>

#include "codeaug/errors.hpp"

namespace codeaug {
namespace {

constexpr std::array<std::string_view, 11> kKeywords = {
    "int", "double", "char", "void", "if", "else", "for", "while", "return", "break", "continue"};

// Longest first so that maximal munch works by linear scan.
constexpr std::array<std::string_view, 31> kPuncts = {
    "<<=", ">>=", "...", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "++", "--", "+=", "-=",
    "*=",  "/=",  "%=",  "->", "(",  ")",  "{",  "}",  "[",  "]",  ",",  ";",  "+",  "-",  "*",
    "/"};
constexpr std::string_view kSinglePuncts = "%<>=!&|^~?:.";

bool is_keyword(std::string_view s) {
  for (auto k : kKeywords) {
    if (k == s) return true;
  }
  return false;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    bool line_start = true;
    while (true) {
      skip_space_and_comments(line_start);
      if (at_end()) break;
      Token tok;
      tok.pos = {line_, col_};
      char c = peek();
      if (c == '#') {
        if (!line_start) throw SyntaxError(line_, col_, "'#' must start a line");
        std::string directive;
        while (!at_end() && peek() != '\n') directive += advance();
        while (!directive.empty() && std::isspace(static_cast<unsigned char>(directive.back()))) {
          directive.pop_back();
        }
        tok.kind = Token::Kind::Directive;
        tok.text = std::move(directive);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string word;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
          word += advance();
        }
        tok.kind = is_keyword(word) ? Token::Kind::Keyword : Token::Kind::Ident;
        tok.text = std::move(word);
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        lex_number(tok);
      } else if (c == '\'') {
        advance();
        if (at_end() || peek() == '\'' || peek() == '\n') {
          throw SyntaxError(tok.pos.line, tok.pos.col, "empty character literal");
        }
        tok.kind = Token::Kind::CharLit;
        tok.text = std::string(1, lex_char_in_literal('\''));
        tok.int_value = static_cast<signed char>(tok.text[0]);
        if (at_end() || advance() != '\'') {
          throw SyntaxError(tok.pos.line, tok.pos.col, "unterminated character literal");
        }
      } else if (c == '"') {
        advance();
        std::string value;
        while (true) {
          if (at_end() || peek() == '\n') {
            throw SyntaxError(tok.pos.line, tok.pos.col, "unterminated string literal");
          }
          if (peek() == '"') {
            advance();
            break;
          }
          value += lex_char_in_literal('"');
        }
        tok.kind = Token::Kind::StringLit;
        tok.text = std::move(value);
      } else {
        lex_punct(tok);
      }
      out.push_back(std::move(tok));
      line_start = false;
    }
    Token end;
    end.kind = Token::Kind::End;
    end.pos = {line_, col_};
    out.push_back(end);
    return out;
  }

 private:
  bool at_end() const { return i_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return i_ + ahead < text_.size() ? text_[i_ + ahead] : '\0';
  }
  char advance() {
    char c = text_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space_and_comments(bool& line_start) {
    while (!at_end()) {
      char c = peek();
      if (c == '\n') {
        advance();
        line_start = true;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        int line = line_, col = col_;
        advance();
        advance();
        while (!(peek() == '*' && peek(1) == '/')) {
          if (at_end()) throw SyntaxError(line, col, "unterminated comment");
          advance();
        }
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  char lex_char_in_literal(char quote) {
    char c = advance();
    if (c != '\\') return c;
    if (at_end()) throw SyntaxError(line_, col_, "unterminated escape");
    char e = advance();
    switch (e) {
      case 'n': return '\n';
      case 't': return '\t';
      case 'r': return '\r';
      case '0': return '\0';
      case '\\': return '\\';
      case '\'': return '\'';
      case '"': return '"';
      default:
        (void)quote;
        throw UnsupportedConstruct(line_, col_ - 2, std::string("unsupported escape '\\") + e + "'");
    }
  }

  void lex_number(Token& tok) {
    std::string spelling;
    bool is_float = false;
    while (std::isdigit(static_cast<unsigned char>(peek()))) spelling += advance();
    if (peek() == '.') {
      is_float = true;
      spelling += advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) spelling += advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t save = 1;
      if (peek(1) == '+' || peek(1) == '-') save = 2;
      if (std::isdigit(static_cast<unsigned char>(peek(save)))) {
        is_float = true;
        for (std::size_t k = 0; k < save; ++k) spelling += advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) spelling += advance();
      }
    }
    if (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
      throw UnsupportedConstruct(tok.pos.line, tok.pos.col,
                                 "numeric suffixes and non-decimal literals are not supported");
    }
    tok.text = spelling;
    if (is_float) {
      tok.kind = Token::Kind::FloatLit;
      tok.float_value = std::strtod(spelling.c_str(), nullptr);
      return;
    }
    if (spelling.size() > 1 && spelling[0] == '0') {
      throw UnsupportedConstruct(tok.pos.line, tok.pos.col, "octal literals are not supported");
    }
    errno = 0;
    unsigned long long v = std::strtoull(spelling.c_str(), nullptr, 10);
    if (errno == ERANGE || v > static_cast<unsigned long long>(std::numeric_limits<std::int64_t>::max())) {
      throw SyntaxError(tok.pos.line, tok.pos.col, "integer literal out of range");
    }
    tok.kind = Token::Kind::IntLit;
    tok.int_value = static_cast<std::int64_t>(v);
  }

  void lex_punct(Token& tok) {
    std::string_view rest = text_.substr(i_);
    for (auto p : kPuncts) {
      if (rest.substr(0, p.size()) == p) {
        for (std::size_t k = 0; k < p.size(); ++k) advance();
        tok.kind = Token::Kind::Punct;
        tok.text = std::string(p);
        return;
      }
    }
    if (kSinglePuncts.find(peek()) != std::string_view::npos) {
      tok.kind = Token::Kind::Punct;
      tok.text = std::string(1, advance());
      return;
    }
    throw SyntaxError(tok.pos.line, tok.pos.col, std::string("unexpected character '") + peek() + "'");
  }

  std::string_view text_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

std::string strip_comments(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '"' || c == '\'') {
      out += c;
      ++i;
      while (i < text.size() && text[i] != c && text[i] != '\n') {
        if (text[i] == '\\' && i + 1 < text.size()) out += text[i++];
        out += text[i++];
      }
      if (i < text.size() && text[i] == c) out += text[i++];
    } else if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      std::size_t end = text.find("*/", i + 2);
      std::size_t stop = end == std::string_view::npos ? text.size() : end + 2;
      // Keep line structure so diagnostics still point at the right line.
      out += ' ';
      for (std::size_t k = i; k < stop; ++k) {
        if (text[k] == '\n') out += '\n';
      }
      i = stop;
    } else {
      out += c;
      ++i;
    }
  }
  return out;
}

std::string escape_string(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\0': out += "\\0"; break;
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      default: out += c;
    }
  }
  return out;
}

std::string escape_char(char c) {
  switch (c) {
    case '\n': return "\\n";
    case '\t': return "\\t";
    case '\r': return "\\r";
    case '\0': return "\\0";
    case '\\': return "\\\\";
    case '\'': return "\\'";
    default: return std::string(1, c);
  }
}

}  // namespace codeaug
