#include "codeaug/frontend/parser.hpp"

#include <set>
#include <utility>

#include "codeaug/errors.hpp"
#include "codeaug/frontend/lexer.hpp"

namespace codeaug {
namespace {

const std::set<std::string, std::less<>> kUnsupportedWords = {
    "goto",   "switch", "case",     "default",  "do",      "struct",   "union",  "enum",
    "typedef", "sizeof", "float",   "long",     "short",   "unsigned", "signed", "const",
    "static", "extern", "bool",     "auto",     "register", "volatile", "class",  "template",
    "new",    "delete", "string",   "vector",   "malloc",  "free",     "puts",   "gets",
    "getchar", "putchar", "memset", "strlen"};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Ast program() {
    Ast ast;
    while (!at(Token::Kind::End)) {
      const Token& t = cur();
      if (t.kind == Token::Kind::Directive) {
        ast.includes.push_back(parse_include(t));
        ++i_;
      } else if (is_ident("using")) {
        ++i_;
        expect_ident("namespace");
        expect_ident("std");
        expect(";");
        ast.using_std = true;
      } else if (is_type_keyword()) {
        Type ty = parse_type();
        if (at(Token::Kind::Ident) && peek(1).text == "(" && peek(1).kind == Token::Kind::Punct) {
          ast.functions.push_back(parse_function(ty));
        } else {
          if (ty == Type::Void) fail_syntax("variables cannot have type void");
          ast.globals.push_back(parse_decl_rest(ty, t.pos));
          expect(";");
        }
      } else {
        reject_or_fail("expected a declaration or function definition");
      }
    }
    return ast;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  const Token& peek(std::size_t n) const {
    return toks_[std::min(i_ + n, toks_.size() - 1)];
  }
  bool at(Token::Kind k) const { return cur().kind == k; }
  bool is_punct(std::string_view p) const {
    return cur().kind == Token::Kind::Punct && cur().text == p;
  }
  bool is_keyword(std::string_view k) const {
    return cur().kind == Token::Kind::Keyword && cur().text == k;
  }
  bool is_ident(std::string_view s) const {
    return cur().kind == Token::Kind::Ident && cur().text == s;
  }
  bool is_type_keyword() const {
    return is_keyword("int") || is_keyword("double") || is_keyword("char") || is_keyword("void");
  }

  [[noreturn]] void fail_syntax(const std::string& msg) const {
    throw SyntaxError(cur().pos.line, cur().pos.col, msg);
  }
  [[noreturn]] void fail_unsupported(const std::string& msg) const {
    throw UnsupportedConstruct(cur().pos.line, cur().pos.col, msg);
  }
  [[noreturn]] void reject_or_fail(const std::string& msg) const {
    const Token& t = cur();
    if (t.kind == Token::Kind::Ident && kUnsupportedWords.count(t.text)) {
      fail_unsupported("'" + t.text + "' is not supported");
    }
    if (t.kind == Token::Kind::Punct &&
        (t.text == "?" || t.text == ":" || t.text == "." || t.text == "->" || t.text == "|" ||
         t.text == "^" || t.text == "~" || t.text == "<<=" || t.text == ">>=" ||
         t.text == "...")) {
      fail_unsupported("operator '" + t.text + "' is not supported");
    }
    if (t.kind == Token::Kind::End) fail_syntax("unexpected end of input");
    fail_syntax(msg + ", found '" + t.text + "'");
  }

  void expect(std::string_view p) {
    if (!is_punct(p)) reject_or_fail("expected '" + std::string(p) + "'");
    ++i_;
  }
  void expect_ident(std::string_view s) {
    if (!is_ident(s)) reject_or_fail("expected '" + std::string(s) + "'");
    ++i_;
  }
  std::string take_ident() {
    if (!at(Token::Kind::Ident)) reject_or_fail("expected identifier");
    if (kUnsupportedWords.count(cur().text)) fail_unsupported("'" + cur().text + "' is not supported");
    return toks_[i_++].text;
  }

  std::string parse_include(const Token& t) {
    std::string_view d = t.text;
    d.remove_prefix(1);
    while (!d.empty() && (d.front() == ' ' || d.front() == '\t')) d.remove_prefix(1);
    if (d.substr(0, 7) != "include") {
      throw UnsupportedConstruct(t.pos.line, t.pos.col, "only #include directives are supported");
    }
    d.remove_prefix(7);
    while (!d.empty() && (d.front() == ' ' || d.front() == '\t')) d.remove_prefix(1);
    if (d.size() < 3 || !((d.front() == '<' && d.back() == '>') || (d.front() == '"' && d.back() == '"'))) {
      throw SyntaxError(t.pos.line, t.pos.col, "malformed #include");
    }
    return std::string(d.substr(1, d.size() - 2));
  }

  Type parse_type() {
    const std::string& w = cur().text;
    Type ty = w == "int" ? Type::Int : w == "double" ? Type::Double : w == "char" ? Type::Char : Type::Void;
    ++i_;
    if (is_punct("*") || is_punct("&")) fail_unsupported("pointer and reference types are not supported");
    return ty;
  }

  FunctionDecl parse_function(Type ret) {
    FunctionDecl fn;
    fn.ret = ret;
    fn.pos = cur().pos;
    fn.name = take_ident();
    expect("(");
    if (is_keyword("void") && peek(1).text == ")") ++i_;
    while (!is_punct(")")) {
      if (!fn.params.empty()) expect(",");
      if (!is_type_keyword() || is_keyword("void")) reject_or_fail("expected parameter type");
      Param p;
      p.type = parse_type();
      p.name = take_ident();
      if (is_punct("[")) fail_unsupported("array parameters are not supported");
      fn.params.push_back(std::move(p));
    }
    expect(")");
    if (is_punct(";")) fail_unsupported("function prototypes are not supported");
    if (!is_punct("{")) reject_or_fail("expected function body");
    fn.body = parse_block();
    return fn;
  }

  Stmt parse_decl_rest(Type ty, SourcePos pos) {
    Stmt s;
    s.kind = Stmt::Kind::DeclStmt;
    s.pos = pos;
    s.base = ty;
    while (true) {
      Decl d;
      d.pos = cur().pos;
      d.name = take_ident();
      if (is_punct("[")) {
        ++i_;
        if (!at(Token::Kind::IntLit)) fail_unsupported("array extents must be integer literals");
        if (cur().int_value <= 0) fail_syntax("array extent must be positive");
        d.extent = cur().int_value;
        ++i_;
        expect("]");
        if (is_punct("[")) fail_unsupported("multi-dimensional arrays are not supported");
      }
      if (is_punct("=")) {
        ++i_;
        if (d.extent) fail_unsupported("array initializers are not supported");
        d.init = parse_assign();
      }
      s.decls.push_back(std::move(d));
      if (!is_punct(",")) break;
      ++i_;
    }
    return s;
  }

  Stmt parse_block() {
    Stmt b;
    b.kind = Stmt::Kind::Block;
    b.pos = cur().pos;
    expect("{");
    while (!is_punct("}")) {
      if (at(Token::Kind::End)) fail_syntax("unterminated block");
      b.kids.push_back(parse_stmt());
    }
    expect("}");
    return b;
  }

  Stmt parse_body() {
    if (is_punct("{")) return parse_block();
    SourcePos pos = cur().pos;
    if (is_type_keyword()) fail_syntax("a declaration cannot be the body of a control statement");
    Stmt inner = parse_stmt();
    if (inner.kind == Stmt::Kind::Block) return inner;
    Stmt b = Stmt::block({});
    b.pos = pos;
    b.kids.push_back(std::move(inner));
    b.elided = true;
    return b;
  }

  Stmt parse_stmt() {
    SourcePos pos = cur().pos;
    Stmt s;
    s.pos = pos;
    if (is_punct("{")) return parse_block();
    if (is_punct(";")) {
      ++i_;
      Stmt b = Stmt::block({});
      b.pos = pos;
      return b;
    }
    if (is_keyword("if")) {
      ++i_;
      s.kind = Stmt::Kind::If;
      expect("(");
      s.expr = parse_expr();
      expect(")");
      s.kids.push_back(parse_body());
      if (is_keyword("else")) {
        ++i_;
        s.kids.push_back(parse_body());
      }
      return s;
    }
    if (is_keyword("while")) {
      ++i_;
      s.kind = Stmt::Kind::While;
      expect("(");
      s.expr = parse_expr();
      expect(")");
      s.kids.push_back(parse_body());
      return s;
    }
    if (is_keyword("for")) {
      ++i_;
      s.kind = Stmt::Kind::For;
      expect("(");
      if (!is_punct(";")) {
        SourcePos ipos = cur().pos;
        if (is_type_keyword()) {
          Type ty = parse_type();
          if (ty == Type::Void) fail_syntax("variables cannot have type void");
          s.init.push_back(parse_decl_rest(ty, ipos));
        } else {
          Stmt e = Stmt::expr_stmt(parse_expr());
          e.pos = ipos;
          s.init.push_back(std::move(e));
        }
      }
      expect(";");
      if (!is_punct(";")) s.expr = parse_expr();
      expect(";");
      if (!is_punct(")")) s.step = parse_expr();
      expect(")");
      s.kids.push_back(parse_body());
      return s;
    }
    if (is_keyword("return")) {
      ++i_;
      s.kind = Stmt::Kind::Return;
      if (!is_punct(";")) s.expr = parse_expr();
      expect(";");
      return s;
    }
    if (is_keyword("break") || is_keyword("continue")) {
      s.kind = is_keyword("break") ? Stmt::Kind::Break : Stmt::Kind::Continue;
      ++i_;
      expect(";");
      return s;
    }
    if (is_keyword("else")) fail_syntax("'else' without a matching 'if'");
    if (is_type_keyword()) {
      Type ty = parse_type();
      if (ty == Type::Void) fail_syntax("variables cannot have type void");
      if (at(Token::Kind::Ident) && peek(1).kind == Token::Kind::Punct && peek(1).text == "(") {
        fail_unsupported("nested function declarations are not supported");
      }
      Stmt d = parse_decl_rest(ty, pos);
      expect(";");
      return d;
    }
    if (is_ident("printf") || is_ident("scanf")) {
      Stmt io = parse_c_io();
      io.pos = pos;
      expect(";");
      return io;
    }
    if (is_ident("cout") || is_ident("cin")) {
      Stmt io = parse_stream_io();
      io.pos = pos;
      expect(";");
      return io;
    }
    Stmt e = Stmt::expr_stmt(parse_expr());
    e.pos = pos;
    expect(";");
    return e;
  }

  // printf("fmt", args...) / scanf("fmt", &lv...)
  Stmt parse_c_io() {
    Stmt s;
    s.kind = Stmt::Kind::Io;
    s.io_style = IoStyle::C;
    bool read = cur().text == "scanf";
    s.io_dir = read ? IoDirection::Read : IoDirection::Write;
    ++i_;
    expect("(");
    if (!at(Token::Kind::StringLit)) fail_unsupported("format argument must be a string literal");
    SourcePos fpos = cur().pos;
    std::string fmt = cur().text;
    ++i_;
    std::vector<Expr> args;
    while (is_punct(",")) {
      ++i_;
      if (read) {
        if (!is_punct("&")) fail_unsupported("scanf arguments must be of the form &lvalue");
        ++i_;
        args.push_back(parse_postfix());
      } else {
        args.push_back(parse_assign());
      }
    }
    expect(")");
    auto fail_fmt = [&](const std::string& msg) {
      throw UnsupportedConstruct(fpos.line, fpos.col, msg);
    };
    std::size_t next_arg = 0;
    std::string text;
    auto flush_text = [&] {
      if (!text.empty()) {
        IoItem it;
        it.kind = IoItem::Kind::Text;
        it.text = std::move(text);
        s.io.push_back(std::move(it));
        text.clear();
      }
    };
    for (std::size_t k = 0; k < fmt.size(); ++k) {
      char c = fmt[k];
      if (c != '%') {
        if (read) {
          if (c != ' ' && c != '\n' && c != '\t') fail_fmt("scanf formats may only contain conversions and whitespace");
        } else {
          text += c;
        }
        continue;
      }
      if (k + 1 >= fmt.size()) fail_fmt("dangling '%' in format");
      char spec = fmt[++k];
      if (spec == '%' && !read) {
        text += '%';
        continue;
      }
      if (spec == 'l' && k + 1 < fmt.size() && fmt[k + 1] == 'f') {
        spec = 'f';
        ++k;
      }
      if (spec != 'd' && spec != 'f' && spec != 'c' && !(spec == 's' && !read)) {
        fail_fmt(std::string("unsupported conversion '%") + spec + "'");
      }
      if (next_arg >= args.size()) fail_fmt("too few arguments for format");
      flush_text();
      IoItem it;
      it.kind = IoItem::Kind::Value;
      it.spec = spec;
      it.value = std::move(args[next_arg++]);
      s.io.push_back(std::move(it));
    }
    flush_text();
    if (next_arg != args.size()) fail_fmt("too many arguments for format");
    return s;
  }

  // cout << a << "x" << endl / cin >> a >> b[i]
  Stmt parse_stream_io() {
    Stmt s;
    s.kind = Stmt::Kind::Io;
    s.io_style = IoStyle::Cpp;
    bool read = cur().text == "cin";
    s.io_dir = read ? IoDirection::Read : IoDirection::Write;
    ++i_;
    std::string_view op = read ? ">>" : "<<";
    if (!is_punct(op)) reject_or_fail("expected '" + std::string(op) + "'");
    while (is_punct(op)) {
      ++i_;
      IoItem it;
      if (!read && at(Token::Kind::StringLit)) {
        it.kind = IoItem::Kind::Text;
        it.text = cur().text;
        ++i_;
      } else if (!read && is_ident("endl")) {
        it.kind = IoItem::Kind::Text;
        it.text = "\n";
        it.endl = true;
        ++i_;
      } else {
        it.kind = IoItem::Kind::Value;
        it.value = read ? parse_postfix() : parse_additive();
      }
      s.io.push_back(std::move(it));
    }
    if (is_punct(read ? "<<" : ">>")) fail_unsupported("mixed stream directions are not supported");
    return s;
  }

  Expr parse_expr() {
    bool saved = stream_operand_;
    stream_operand_ = false;
    Expr e = parse_assign();
    stream_operand_ = saved;
    return e;
  }

  Expr parse_assign() {
    SourcePos pos = cur().pos;
    Expr lhs = parse_binary(0);
    static const std::set<std::string, std::less<>> kAssignOps = {"=", "+=", "-=", "*=", "/=", "%="};
    if (cur().kind == Token::Kind::Punct && kAssignOps.count(cur().text)) {
      std::string op = cur().text;
      ++i_;
      Expr rhs = parse_assign();
      Expr e;
      e.kind = Expr::Kind::Assign;
      e.text = op;
      e.pos = pos;
      e.args.push_back(std::move(lhs));
      e.args.push_back(std::move(rhs));
      return e;
    }
    return lhs;
  }

  static int binary_level(const Token& t) {
    if (t.kind != Token::Kind::Punct) return -1;
    const std::string& s = t.text;
    if (s == "||") return 0;
    if (s == "&&") return 1;
    if (s == "==" || s == "!=") return 2;
    if (s == "<" || s == "<=" || s == ">" || s == ">=") return 3;
    if (s == "+" || s == "-") return 4;
    if (s == "*" || s == "/" || s == "%") return 5;
    return -1;
  }

  Expr parse_binary(int min_level) {
    Expr lhs = parse_unary();
    while (true) {
      if (stream_operand_ && (is_punct("<<") || is_punct(">>"))) return lhs;
      if (is_punct("<<") || is_punct(">>") || is_punct("&") || is_punct("|") || is_punct("^")) {
        fail_unsupported("bitwise and shift operators are not supported");
      }
      if (is_punct("?")) fail_unsupported("the conditional operator is not supported");
      int level = binary_level(cur());
      if (level < min_level || level < 0) return lhs;
      std::string op = cur().text;
      SourcePos pos = cur().pos;
      ++i_;
      Expr rhs = parse_binary(level + 1);
      Expr e = Expr::binary(op, std::move(lhs), std::move(rhs));
      e.pos = pos;
      lhs = std::move(e);
    }
  }

  Expr parse_additive() {
    // Operands of a stream insertion bind tighter than '<<'.
    bool saved = stream_operand_;
    stream_operand_ = true;
    Expr lhs = parse_unary();
    while (true) {
      int level = binary_level(cur());
      if (level < 4) {
        stream_operand_ = saved;
        return lhs;
      }
      std::string op = cur().text;
      SourcePos pos = cur().pos;
      ++i_;
      Expr rhs = parse_binary(level + 1);
      Expr e = Expr::binary(op, std::move(lhs), std::move(rhs));
      e.pos = pos;
      lhs = std::move(e);
    }
  }

  Expr parse_unary() {
    SourcePos pos = cur().pos;
    if (is_punct("!") || is_punct("-") || is_punct("+") || is_punct("++") || is_punct("--")) {
      std::string op = cur().text;
      ++i_;
      Expr e = Expr::unary(op, parse_unary());
      e.pos = pos;
      return e;
    }
    if (is_punct("&")) fail_unsupported("address-of is only supported in scanf arguments");
    if (is_punct("*")) fail_unsupported("pointers are not supported");
    if (is_punct("(") && (peek(1).kind == Token::Kind::Keyword) &&
        (peek(1).text == "int" || peek(1).text == "double" || peek(1).text == "char")) {
      fail_unsupported("casts are not supported");
    }
    return parse_postfix();
  }

  Expr parse_postfix() {
    Expr e = parse_primary();
    while (true) {
      SourcePos pos = cur().pos;
      if (is_punct("[")) {
        if (e.kind != Expr::Kind::Ident) fail_unsupported("only named arrays can be indexed");
        ++i_;
        Expr idx;
        idx.kind = Expr::Kind::Index;
        idx.pos = e.pos;
        idx.args.push_back(std::move(e));
        idx.args.push_back(parse_expr());
        expect("]");
        if (is_punct("[")) fail_unsupported("multi-dimensional arrays are not supported");
        e = std::move(idx);
      } else if (is_punct("++") || is_punct("--")) {
        Expr u = Expr::unary(cur().text, std::move(e));
        u.postfix = true;
        u.pos = pos;
        ++i_;
        e = std::move(u);
      } else if (is_punct("(")) {
        fail_syntax("call target must be a function name");
      } else {
        return e;
      }
    }
  }

  Expr parse_primary() {
    const Token& t = cur();
    Expr e;
    e.pos = t.pos;
    switch (t.kind) {
      case Token::Kind::IntLit:
        e = Expr::int_lit(t.int_value);
        break;
      case Token::Kind::FloatLit:
        e = Expr::float_lit(t.float_value, t.text);
        break;
      case Token::Kind::CharLit:
        e = Expr::char_lit(t.text[0]);
        break;
      case Token::Kind::StringLit:
        e = Expr::string_lit(t.text);
        break;
      case Token::Kind::Ident: {
        if (t.text == "printf" || t.text == "scanf") {
          fail_unsupported("printf/scanf are only supported as statements");
        }
        if (t.text == "cout" || t.text == "cin" || t.text == "endl") {
          fail_unsupported("stream objects are only supported as statements");
        }
        std::string name = take_ident();
        if (is_punct("(")) {
          ++i_;
          e.kind = Expr::Kind::Call;
          e.text = name;
          while (!is_punct(")")) {
            if (!e.args.empty()) expect(",");
            e.args.push_back(parse_expr());
          }
          expect(")");
        } else {
          e = Expr::ident(name);
        }
        e.pos = t.pos;
        return e;
      }
      case Token::Kind::Punct:
        if (t.text == "(") {
          ++i_;
          Expr inner = parse_expr();
          expect(")");
          return inner;
        }
        reject_or_fail("expected expression");
      default:
        reject_or_fail("expected expression");
    }
    e.pos = t.pos;
    ++i_;
    return e;
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  bool stream_operand_ = false;
};

}  // namespace

Ast parse(std::string_view text) {
  Ast ast = Parser(tokenize(text)).program();
  resolve(ast);
  return ast;
}

Ast parse(const SourceUnit& unit) { return parse(std::string_view(unit.text)); }

}  // namespace codeaug
