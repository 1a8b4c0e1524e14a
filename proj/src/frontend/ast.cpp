#include "codeaug/frontend/ast.hpp"

#include <algorithm>
#include <cstring>
#include <set>

namespace codeaug {

const char* type_name(Type t) {
  switch (t) {
    case Type::Void: return "void";
    case Type::Int: return "int";
    case Type::Double: return "double";
    case Type::Char: return "char";
    case Type::String: return "string";
  }
  return "?";
}

Expr Expr::int_lit(std::int64_t v) {
  Expr e;
  e.kind = Kind::IntLit;
  e.int_value = v;
  return e;
}

Expr Expr::float_lit(double v, std::string spelling) {
  Expr e;
  e.kind = Kind::FloatLit;
  e.float_value = v;
  e.text = std::move(spelling);
  return e;
}

Expr Expr::char_lit(char c) {
  Expr e;
  e.kind = Kind::CharLit;
  e.int_value = static_cast<signed char>(c);
  e.text = std::string(1, c);
  return e;
}

Expr Expr::string_lit(std::string s) {
  Expr e;
  e.kind = Kind::StringLit;
  e.text = std::move(s);
  return e;
}

Expr Expr::ident(std::string name) {
  Expr e;
  e.kind = Kind::Ident;
  e.text = std::move(name);
  return e;
}

Expr Expr::unary(std::string op, Expr operand) {
  Expr e;
  e.kind = Kind::Unary;
  e.text = std::move(op);
  e.args.push_back(std::move(operand));
  return e;
}

Expr Expr::binary(std::string op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = Kind::Binary;
  e.text = std::move(op);
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

Stmt Stmt::block(std::vector<Stmt> stmts) {
  Stmt s;
  s.kind = Kind::Block;
  s.kids = std::move(stmts);
  return s;
}

Stmt Stmt::expr_stmt(Expr e) {
  Stmt s;
  s.kind = Kind::ExprStmt;
  s.expr = std::move(e);
  return s;
}

Stmt Stmt::ret(std::optional<Expr> e) {
  Stmt s;
  s.kind = Kind::Return;
  s.expr = std::move(e);
  return s;
}

const FunctionDecl* Ast::find_function(const std::string& name) const {
  for (const auto& f : functions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

namespace {

bool opt_equal(const std::optional<Expr>& a, const std::optional<Expr>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || structurally_equal(*a, *b);
}

template <typename T, typename Eq>
bool list_equal(const std::vector<T>& a, const std::vector<T>& b, Eq eq) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!eq(a[i], b[i])) return false;
  }
  return true;
}

bool decl_equal(const Decl& a, const Decl& b) {
  return a.name == b.name && a.extent == b.extent && opt_equal(a.init, b.init);
}

bool io_item_equal(const IoItem& a, const IoItem& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == IoItem::Kind::Text) return a.text == b.text && a.endl == b.endl;
  return a.spec == b.spec && opt_equal(a.value, b.value);
}

void collect(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::Ident || e.kind == Expr::Kind::Call) out.insert(e.text);
  for (const auto& a : e.args) collect(a, out);
}

void collect(const Stmt& s, std::set<std::string>& out) {
  if (s.expr) collect(*s.expr, out);
  if (s.step) collect(*s.step, out);
  for (const auto& d : s.decls) {
    out.insert(d.name);
    if (d.init) collect(*d.init, out);
  }
  for (const auto& it : s.io) {
    if (it.value) collect(*it.value, out);
  }
  for (const auto& k : s.init) collect(k, out);
  for (const auto& k : s.kids) collect(k, out);
}

}  // namespace

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.postfix != b.postfix) return false;
  switch (a.kind) {
    case Expr::Kind::IntLit:
    case Expr::Kind::CharLit:
      if (a.int_value != b.int_value) return false;
      break;
    case Expr::Kind::FloatLit:
      if (std::memcmp(&a.float_value, &b.float_value, sizeof(double)) != 0) return false;
      break;
    default:
      if (a.text != b.text) return false;
  }
  return list_equal(a.args, b.args, [](const Expr& x, const Expr& y) { return structurally_equal(x, y); });
}

bool structurally_equal(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind) return false;
  auto stmt_eq = [](const Stmt& x, const Stmt& y) { return structurally_equal(x, y); };
  switch (a.kind) {
    case Stmt::Kind::DeclStmt:
      return a.base == b.base && list_equal(a.decls, b.decls, decl_equal);
    case Stmt::Kind::Io:
      return a.io_dir == b.io_dir && a.io_style == b.io_style && list_equal(a.io, b.io, io_item_equal);
    default:
      return opt_equal(a.expr, b.expr) && opt_equal(a.step, b.step) && list_equal(a.init, b.init, stmt_eq) &&
             list_equal(a.kids, b.kids, stmt_eq);
  }
}

bool structurally_equal(const Ast& a, const Ast& b) {
  if (a.includes != b.includes || a.using_std != b.using_std) return false;
  auto stmt_eq = [](const Stmt& x, const Stmt& y) { return structurally_equal(x, y); };
  if (!list_equal(a.globals, b.globals, stmt_eq)) return false;
  return list_equal(a.functions, b.functions, [&](const FunctionDecl& x, const FunctionDecl& y) {
    if (x.ret != y.ret || x.name != y.name || x.params.size() != y.params.size()) return false;
    for (std::size_t i = 0; i < x.params.size(); ++i) {
      if (x.params[i].type != y.params[i].type || x.params[i].name != y.params[i].name) return false;
    }
    return structurally_equal(x.body, y.body);
  });
}

std::vector<std::string> collect_identifiers(const Ast& ast) {
  std::set<std::string> out;
  for (const auto& g : ast.globals) collect(g, out);
  for (const auto& f : ast.functions) {
    out.insert(f.name);
    for (const auto& p : f.params) out.insert(p.name);
    collect(f.body, out);
  }
  return {out.begin(), out.end()};
}

}  // namespace codeaug
