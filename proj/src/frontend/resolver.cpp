#include <map>
#include <set>
#include <string>
#include <vector>

#include "codeaug/errors.hpp"
#include "codeaug/frontend/parser.hpp"

namespace codeaug {
namespace {

const std::set<std::string, std::less<>> kReserved = {"printf", "scanf", "cout", "cin",
                                                      "endl",   "std",   "using", "namespace"};

struct VarInfo {
  Type type = Type::Int;
  bool is_array = false;
};

bool is_numeric(Type t) { return t == Type::Int || t == Type::Double || t == Type::Char; }
bool is_integral(Type t) { return t == Type::Int || t == Type::Char; }

char spec_for(Type t) {
  switch (t) {
    case Type::Int: return 'd';
    case Type::Double: return 'f';
    case Type::Char: return 'c';
    case Type::String: return 's';
    default: return '?';
  }
}

class Resolver {
 public:
  explicit Resolver(Ast& ast) : ast_(ast) {}

  void run() {
    std::set<std::string> fn_names;
    for (const auto& f : ast_.functions) {
      if (!fn_names.insert(f.name).second) {
        throw SyntaxError(f.pos.line, f.pos.col, "redefinition of function '" + f.name + "'");
      }
      if (kReserved.count(f.name)) {
        throw UnsupportedConstruct(f.pos.line, f.pos.col, "'" + f.name + "' cannot be redefined");
      }
    }
    all_functions_ = fn_names;

    scopes_.emplace_back();
    for (auto& g : ast_.globals) declare_stmt(g);

    int mains = 0;
    for (auto& f : ast_.functions) {
      if (f.name == "main") {
        ++mains;
        if (f.ret != Type::Int || !f.params.empty()) {
          throw SyntaxError(f.pos.line, f.pos.col, "main must be declared as int main()");
        }
      }
      current_ = &f;
      defined_[f.name] = &f;  // visible to itself for recursion
      scopes_.emplace_back();
      for (const auto& p : f.params) {
        declare(p.name, {p.type, false}, f.pos);
      }
      for (auto& s : f.body.kids) stmt(s);
      scopes_.pop_back();
      current_ = nullptr;
    }
    if (mains != 1) throw SyntaxError(1, 1, "program must define exactly one function named main");
  }

 private:
  [[noreturn]] static void fail(SourcePos p, const std::string& msg) {
    throw SyntaxError(p.line, p.col, msg);
  }

  void declare(const std::string& name, VarInfo info, SourcePos pos) {
    if (kReserved.count(name)) throw UnsupportedConstruct(pos.line, pos.col, "'" + name + "' is reserved");
    if (all_functions_.count(name)) fail(pos, "variable '" + name + "' shadows a function");
    auto& scope = scopes_.back();
    if (scope.count(name)) fail(pos, "redeclaration of '" + name + "'");
    scope[name] = info;
  }

  const VarInfo* lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  void declare_stmt(Stmt& s) {
    if (s.base == Type::Void) fail(s.pos, "variables cannot have type void");
    for (auto& d : s.decls) {
      if (d.init) {
        Type t = expr(*d.init, true);
        if (!is_numeric(t)) fail(d.init->pos, "initializer must be numeric");
      }
      declare(d.name, {s.base, d.extent.has_value()}, d.pos);
    }
  }

  void body(Stmt& b) {
    scopes_.emplace_back();
    for (auto& k : b.kids) stmt(k);
    scopes_.pop_back();
  }

  void stmt(Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Block:
        body(s);
        break;
      case Stmt::Kind::If:
        cond(*s.expr);
        for (auto& k : s.kids) body(k);
        break;
      case Stmt::Kind::While:
        cond(*s.expr);
        ++loop_depth_;
        body(s.kids[0]);
        --loop_depth_;
        break;
      case Stmt::Kind::For:
        scopes_.emplace_back();
        for (auto& i : s.init) stmt(i);
        if (s.expr) cond(*s.expr);
        if (s.step) expr(*s.step, false);
        ++loop_depth_;
        body(s.kids[0]);
        --loop_depth_;
        scopes_.pop_back();
        break;
      case Stmt::Kind::Return:
        if (current_->ret == Type::Void) {
          if (s.expr) fail(s.pos, "void function cannot return a value");
        } else {
          if (!s.expr) fail(s.pos, "non-void function must return a value");
          if (!is_numeric(expr(*s.expr, true))) fail(s.pos, "return value must be numeric");
        }
        break;
      case Stmt::Kind::ExprStmt:
        expr(*s.expr, false);
        break;
      case Stmt::Kind::DeclStmt:
        declare_stmt(s);
        break;
      case Stmt::Kind::Io:
        io(s);
        break;
      case Stmt::Kind::Break:
      case Stmt::Kind::Continue:
        if (loop_depth_ == 0) fail(s.pos, std::string(s.kind == Stmt::Kind::Break ? "break" : "continue") +
                                              " outside of a loop");
        break;
    }
  }

  void cond(Expr& e) {
    if (!is_numeric(expr(e, true))) fail(e.pos, "condition must be numeric");
  }

  void io(Stmt& s) {
    for (auto& it : s.io) {
      if (it.kind == IoItem::Kind::Text) continue;
      Expr& v = *it.value;
      Type t;
      if (s.io_dir == IoDirection::Read) {
        if (!is_lvalue(v)) fail(v.pos, "input target must be a variable or array element");
        t = expr(v, true);
      } else if (v.kind == Expr::Kind::StringLit) {
        v.type = t = Type::String;
      } else {
        t = expr(v, true);
      }
      if (s.io_style == IoStyle::Cpp) {
        it.spec = spec_for(t);
      } else if (spec_for(t) != it.spec) {
        throw UnsupportedConstruct(v.pos.line, v.pos.col,
                                   std::string("conversion '%") + it.spec + "' does not match argument type " +
                                       type_name(t));
      }
    }
  }

  bool is_lvalue(const Expr& e) const {
    if (e.kind == Expr::Kind::Index) return true;
    if (e.kind != Expr::Kind::Ident) return false;
    const VarInfo* v = lookup(e.text);
    return v && !v->is_array;
  }

  Type expr(Expr& e, bool value_used) {
    e.type = compute(e, value_used);
    return e.type;
  }

  Type numeric_operand(Expr& e) {
    Type t = expr(e, true);
    if (!is_numeric(t)) fail(e.pos, "operand must be numeric");
    return t;
  }

  Type compute(Expr& e, bool value_used) {
    switch (e.kind) {
      case Expr::Kind::IntLit: return Type::Int;
      case Expr::Kind::FloatLit: return Type::Double;
      case Expr::Kind::CharLit: return Type::Char;
      case Expr::Kind::StringLit:
        throw UnsupportedConstruct(e.pos.line, e.pos.col, "string literals are only supported in output");
      case Expr::Kind::AddrOf:
        throw UnsupportedConstruct(e.pos.line, e.pos.col, "address-of is only supported in scanf");
      case Expr::Kind::Ident: {
        const VarInfo* v = lookup(e.text);
        if (!v) fail(e.pos, "use of undeclared identifier '" + e.text + "'");
        if (v->is_array) fail(e.pos, "array '" + e.text + "' must be indexed");
        return v->type;
      }
      case Expr::Kind::Index: {
        const Expr& base = e.args[0];
        const VarInfo* v = lookup(base.text);
        if (!v) fail(base.pos, "use of undeclared identifier '" + base.text + "'");
        if (!v->is_array) fail(base.pos, "'" + base.text + "' is not an array");
        e.args[0].type = v->type;
        if (!is_integral(expr(e.args[1], true))) fail(e.args[1].pos, "array subscript must be integral");
        return v->type;
      }
      case Expr::Kind::Call: {
        auto it = defined_.find(e.text);
        if (it == defined_.end()) {
          if (all_functions_.count(e.text)) fail(e.pos, "function '" + e.text + "' used before its definition");
          fail(e.pos, "call to undeclared function '" + e.text + "'");
        }
        const FunctionDecl& fn = *it->second;
        if (fn.name == "main") fail(e.pos, "main cannot be called");
        if (fn.params.size() != e.args.size()) fail(e.pos, "wrong number of arguments to '" + e.text + "'");
        for (auto& a : e.args) numeric_operand(a);
        if (fn.ret == Type::Void && value_used) fail(e.pos, "void value used in an expression");
        return fn.ret;
      }
      case Expr::Kind::Unary: {
        const std::string& op = e.text;
        if (op == "++" || op == "--") {
          if (!is_lvalue(e.args[0])) fail(e.pos, "operand of " + op + " must be an lvalue");
          return numeric_operand(e.args[0]);
        }
        Type t = numeric_operand(e.args[0]);
        if (op == "!") return Type::Int;
        return t == Type::Double ? Type::Double : Type::Int;
      }
      case Expr::Kind::Binary: {
        Type l = numeric_operand(e.args[0]);
        Type r = numeric_operand(e.args[1]);
        const std::string& op = e.text;
        if (op == "%" && !(is_integral(l) && is_integral(r))) fail(e.pos, "operands of % must be integral");
        if (op == "+" || op == "-" || op == "*" || op == "/" || op == "%") {
          return (l == Type::Double || r == Type::Double) ? Type::Double : Type::Int;
        }
        return Type::Int;
      }
      case Expr::Kind::Assign: {
        if (!is_lvalue(e.args[0])) fail(e.pos, "left side of assignment must be an lvalue");
        Type l = numeric_operand(e.args[0]);
        Type r = numeric_operand(e.args[1]);
        if (e.text == "%=" && !(is_integral(l) && is_integral(r))) fail(e.pos, "operands of %= must be integral");
        return l;
      }
    }
    return Type::Void;
  }

  Ast& ast_;
  std::vector<std::map<std::string, VarInfo>> scopes_;
  std::map<std::string, const FunctionDecl*> defined_;
  std::set<std::string> all_functions_;
  const FunctionDecl* current_ = nullptr;
  int loop_depth_ = 0;
};

}  // namespace

void resolve(Ast& ast) { Resolver(ast).run(); }

}  // namespace codeaug
