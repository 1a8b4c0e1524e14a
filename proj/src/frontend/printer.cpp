#include "codeaug/frontend/printer.hpp"

#include <cstdio>

#include "codeaug/frontend/lexer.hpp"

namespace codeaug {
namespace {

constexpr int kAssignPrec = 1;
constexpr int kUnaryPrec = 8;
constexpr int kPostfixPrec = 9;
constexpr int kPrimaryPrec = 10;
constexpr int kAdditivePrec = 6;

int binary_prec(const std::string& op) {
  if (op == "||") return 2;
  if (op == "&&") return 3;
  if (op == "==" || op == "!=") return 4;
  if (op == "<" || op == "<=" || op == ">" || op == ">=") return 5;
  if (op == "+" || op == "-") return 6;
  return 7;
}

int prec(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Assign: return kAssignPrec;
    case Expr::Kind::Binary: return binary_prec(e.text);
    case Expr::Kind::Unary: return e.postfix ? kPostfixPrec : kUnaryPrec;
    case Expr::Kind::Index:
    case Expr::Kind::Call: return kPostfixPrec;
    default: return kPrimaryPrec;
  }
}

std::string float_spelling(const Expr& e) {
  if (!e.text.empty()) return e.text;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", e.float_value);
  std::string s = buf;
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

void emit(const Expr& e, int min_prec, std::string& out);

void emit_wrapped(const Expr& e, int min_prec, std::string& out) {
  bool paren = prec(e) < min_prec;
  if (paren) out += '(';
  emit(e, paren ? 0 : min_prec, out);
  if (paren) out += ')';
}

void emit(const Expr& e, int /*min_prec*/, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::IntLit:
      out += std::to_string(e.int_value);
      break;
    case Expr::Kind::FloatLit:
      out += float_spelling(e);
      break;
    case Expr::Kind::CharLit:
      out += '\'' + escape_char(static_cast<char>(e.int_value)) + '\'';
      break;
    case Expr::Kind::StringLit:
      out += '"' + escape_string(e.text) + '"';
      break;
    case Expr::Kind::Ident:
      out += e.text;
      break;
    case Expr::Kind::Index:
      out += e.args[0].text;
      out += '[';
      emit_wrapped(e.args[1], 0, out);
      out += ']';
      break;
    case Expr::Kind::Call:
      out += e.text;
      out += '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        emit_wrapped(e.args[i], kAssignPrec, out);
      }
      out += ')';
      break;
    case Expr::Kind::AddrOf:
      out += '&';
      emit_wrapped(e.args[0], kUnaryPrec, out);
      break;
    case Expr::Kind::Unary: {
      const Expr& operand = e.args[0];
      if (e.postfix) {
        emit_wrapped(operand, kPostfixPrec, out);
        out += e.text;
        break;
      }
      out += e.text;
      // Keep "- -x" and "-(--x)" from fusing into a different token.
      bool fuses = operand.kind == Expr::Kind::Unary && !operand.postfix &&
                   (operand.text[0] == e.text[0]) && (e.text == "-" || e.text == "+");
      if (fuses) {
        out += '(';
        emit(operand, 0, out);
        out += ')';
      } else {
        emit_wrapped(operand, kUnaryPrec, out);
      }
      break;
    }
    case Expr::Kind::Binary: {
      int p = binary_prec(e.text);
      emit_wrapped(e.args[0], p, out);
      out += ' ' + e.text + ' ';
      emit_wrapped(e.args[1], p + 1, out);
      break;
    }
    case Expr::Kind::Assign:
      emit_wrapped(e.args[0], kPostfixPrec, out);
      out += ' ' + e.text + ' ';
      emit_wrapped(e.args[1], kAssignPrec, out);
      break;
  }
}

std::string expr_text(const Expr& e, int min_prec = 0) {
  std::string out;
  emit_wrapped(e, min_prec, out);
  return out;
}

std::string decl_text(const Stmt& s) {
  std::string out = type_name(s.base);
  out += ' ';
  for (std::size_t i = 0; i < s.decls.size(); ++i) {
    const Decl& d = s.decls[i];
    if (i) out += ", ";
    out += d.name;
    if (d.extent) out += '[' + std::to_string(*d.extent) + ']';
    if (d.init) out += " = " + expr_text(*d.init, kAssignPrec);
  }
  return out;
}

std::string c_format_spec(const IoItem& it, IoDirection dir) {
  if (dir == IoDirection::Read && it.spec == 'f') return "%lf";
  return std::string("%") + it.spec;
}

std::string io_text(const Stmt& s) {
  std::string out;
  if (s.io_style == IoStyle::Cpp) {
    bool read = s.io_dir == IoDirection::Read;
    out = read ? "cin" : "cout";
    for (const auto& it : s.io) {
      out += read ? " >> " : " << ";
      if (it.kind == IoItem::Kind::Text) {
        out += it.endl ? "endl" : '"' + escape_string(it.text) + '"';
      } else {
        out += expr_text(*it.value, kAdditivePrec);
      }
    }
    return out;
  }
  std::string fmt;
  std::string args;
  if (s.io_dir == IoDirection::Read) {
    for (const auto& it : s.io) {
      if (!fmt.empty() || it.spec == 'c') fmt += ' ';
      fmt += c_format_spec(it, s.io_dir);
      args += ", &" + expr_text(*it.value, kUnaryPrec);
    }
    return "scanf(\"" + fmt + "\"" + args + ")";
  }
  for (const auto& it : s.io) {
    if (it.kind == IoItem::Kind::Text) {
      for (char c : it.text) {
        if (c == '%') fmt += "%%";
        else fmt += escape_string(std::string_view(&c, 1));
      }
    } else {
      fmt += c_format_spec(it, s.io_dir);
      args += ", " + expr_text(*it.value, kAssignPrec);
    }
  }
  return "printf(\"" + fmt + "\"" + args + ")";
}

class Printer {
 public:
  std::string program(const Ast& ast) {
    for (const auto& inc : ast.includes) out_ += "#include <" + inc + ">\n";
    if (ast.using_std) out_ += "using namespace std;\n";
    bool any_header = !ast.includes.empty() || ast.using_std;
    if (!ast.globals.empty()) {
      if (any_header) out_ += '\n';
      for (const auto& g : ast.globals) out_ += decl_text(g) + ";\n";
    }
    for (std::size_t i = 0; i < ast.functions.size(); ++i) {
      if (i > 0 || any_header || !ast.globals.empty()) out_ += '\n';
      function(ast.functions[i]);
    }
    return std::move(out_);
  }

 private:
  void indent(int level) { out_.append(static_cast<std::size_t>(level) * 4, ' '); }

  void function(const FunctionDecl& f) {
    out_ += type_name(f.ret);
    out_ += ' ' + f.name + '(';
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      if (i) out_ += ", ";
      out_ += type_name(f.params[i].type);
      out_ += ' ' + f.params[i].name;
    }
    out_ += ") {\n";
    for (const auto& s : f.body.kids) stmt(s, 1);
    out_ += "}\n";
  }

  // Prints a control-statement body starting right after the header. Returns
  // true when braces were printed (the closing brace ends the last line
  // without a newline so `else` can follow on it).
  bool body(const Stmt& b, int level, bool before_else) {
    bool elide = b.elided && can_elide(b) && !(before_else && ends_with_open_if(b.kids[0]));
    if (elide) {
      out_ += '\n';
      stmt(b.kids[0], level + 1);
      return false;
    }
    out_ += " {\n";
    for (const auto& k : b.kids) stmt(k, level + 1);
    indent(level);
    out_ += '}';
    return true;
  }

  void stmt(const Stmt& s, int level) {
    indent(level);
    stmt_inline(s, level);
  }

  // Assumes indentation for the first line is already emitted.
  void stmt_inline(const Stmt& s, int level) {
    switch (s.kind) {
      case Stmt::Kind::Block:
        out_ += "{\n";
        for (const auto& k : s.kids) stmt(k, level + 1);
        indent(level);
        out_ += "}\n";
        break;
      case Stmt::Kind::If: {
        out_ += "if (" + expr_text(*s.expr) + ")";
        bool has_else = s.kids.size() > 1;
        bool braced = body(s.kids[0], level, has_else);
        if (!has_else) {
          if (braced) out_ += '\n';
          break;
        }
        if (braced) {
          out_ += " else";
        } else {
          indent(level);
          out_ += "else";
        }
        const Stmt& eb = s.kids[1];
        if (eb.elided && eb.kids.size() == 1 && eb.kids[0].kind == Stmt::Kind::If) {
          out_ += ' ';
          stmt_inline(eb.kids[0], level);
          break;
        }
        if (body(eb, level, false)) out_ += '\n';
        break;
      }
      case Stmt::Kind::While:
        out_ += "while (" + expr_text(*s.expr) + ")";
        if (body(s.kids[0], level, false)) out_ += '\n';
        break;
      case Stmt::Kind::For: {
        out_ += "for (";
        if (!s.init.empty()) {
          const Stmt& i = s.init[0];
          out_ += i.kind == Stmt::Kind::DeclStmt ? decl_text(i) : expr_text(*i.expr);
        }
        out_ += ';';
        if (s.expr) out_ += ' ' + expr_text(*s.expr);
        out_ += ';';
        if (s.step) out_ += ' ' + expr_text(*s.step);
        out_ += ')';
        if (body(s.kids[0], level, false)) out_ += '\n';
        break;
      }
      case Stmt::Kind::Return:
        out_ += s.expr ? "return " + expr_text(*s.expr) + ";\n" : "return;\n";
        break;
      case Stmt::Kind::ExprStmt:
        out_ += expr_text(*s.expr) + ";\n";
        break;
      case Stmt::Kind::DeclStmt:
        out_ += decl_text(s) + ";\n";
        break;
      case Stmt::Kind::Io:
        out_ += io_text(s) + ";\n";
        break;
      case Stmt::Kind::Break:
        out_ += "break;\n";
        break;
      case Stmt::Kind::Continue:
        out_ += "continue;\n";
        break;
    }
  }

  std::string out_;
};

}  // namespace

bool can_elide(const Stmt& body) {
  return body.kind == Stmt::Kind::Block && body.kids.size() == 1 &&
         body.kids[0].kind != Stmt::Kind::DeclStmt && body.kids[0].kind != Stmt::Kind::Block;
}

bool ends_with_open_if(const Stmt& s) {
  auto elided_tail = [](const Stmt& b) -> const Stmt* {
    return (b.elided && can_elide(b)) ? &b.kids[0] : nullptr;
  };
  switch (s.kind) {
    case Stmt::Kind::If: {
      if (s.kids.size() < 2) return true;
      const Stmt* t = elided_tail(s.kids[1]);
      return t && ends_with_open_if(*t);
    }
    case Stmt::Kind::While:
    case Stmt::Kind::For: {
      const Stmt* t = elided_tail(s.kids[0]);
      return t && ends_with_open_if(*t);
    }
    default:
      return false;
  }
}

std::string print_program(const Ast& ast) { return Printer().program(ast); }

SourceUnit pretty_print(const Ast& ast) { return SourceUnit{print_program(ast), std::nullopt}; }

std::string print_expr(const Expr& e) { return expr_text(e); }

}  // namespace codeaug
