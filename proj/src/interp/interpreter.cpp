#include "codeaug/interp/interpreter.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace codeaug {

const char* status_name(ExecResult::Status s) {
  switch (s) {
    case ExecResult::Status::Ok: return "ok";
    case ExecResult::Status::StepLimit: return "step_limit";
    case ExecResult::Status::RuntimeError: return "runtime_error";
  }
  return "?";
}

namespace {

constexpr int kMaxCallDepth = 1000;

struct Value {
  Type type = Type::Int;
  std::int64_t i = 0;
  double d = 0.0;

  static Value of_int(std::int64_t v) { return {Type::Int, v, 0.0}; }
  static Value of_double(double v) { return {Type::Double, 0, v}; }
  static Value of_char(std::int64_t v) { return {Type::Char, static_cast<signed char>(static_cast<unsigned char>(v)), 0.0}; }

  double as_double() const { return type == Type::Double ? d : static_cast<double>(i); }
  bool truthy() const { return type == Type::Double ? d != 0.0 : i != 0; }
};

struct RuntimeFault {
  std::string message;
};
struct StepLimitHit {};

struct Var {
  Type type = Type::Int;
  bool is_array = false;
  std::vector<Value> cells;  // size 1 for scalars
};

using Scope = std::vector<std::pair<std::string, Var>>;

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}
std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

Value convert(const Value& v, Type to) {
  if (to == v.type) return v;
  switch (to) {
    case Type::Double:
      return Value::of_double(v.as_double());
    case Type::Int:
    case Type::Char: {
      std::int64_t n = v.i;
      if (v.type == Type::Double) {
        double t = std::trunc(v.d);
        if (!(t >= -9223372036854775808.0 && t < 9223372036854775808.0)) {
          throw RuntimeFault{"floating value out of integer range"};
        }
        n = static_cast<std::int64_t>(t);
      }
      return to == Type::Int ? Value::of_int(n) : Value::of_char(n);
    }
    default:
      return v;
  }
}

Value zero_of(Type t) {
  switch (t) {
    case Type::Double: return Value::of_double(0.0);
    case Type::Char: return Value::of_char(0);
    default: return Value::of_int(0);
  }
}

std::string format_value(const Value& v, char spec) {
  switch (spec) {
    case 'f': {
      char buf[512];
      std::snprintf(buf, sizeof buf, "%.6f", v.as_double());
      return buf;
    }
    case 'c':
      return std::string(1, static_cast<char>(v.i));
    default:
      return std::to_string(v.i);
  }
}

enum class Flow { Normal, Break, Continue, Return };

class Machine {
 public:
  Machine(const Ast& ast, std::string_view in, std::uint64_t limit) : ast_(ast), in_(in), limit_(limit) {}

  ExecResult run() {
    ExecResult r;
    try {
      frames_.emplace_back();
      frames_.back().emplace_back();
      for (const auto& g : ast_.globals) declare(g, globals_);
      frames_.clear();
      const FunctionDecl* main_fn = ast_.find_function("main");
      call(*main_fn, {});
      r.status = ExecResult::Status::Ok;
    } catch (const RuntimeFault& f) {
      r.status = ExecResult::Status::RuntimeError;
      r.message = f.message;
    } catch (const StepLimitHit&) {
      r.status = ExecResult::Status::StepLimit;
    }
    r.stdout_bytes = std::move(out_);
    return r;
  }

 private:
  // Name lookup: innermost scope of the current frame outwards, then globals.
  Var& lookup(const std::string& name) {
    if (!frames_.empty()) {
      auto& scopes = frames_.back();
      for (auto s = scopes.rbegin(); s != scopes.rend(); ++s) {
        for (auto& [n, v] : *s) {
          if (n == name) return v;
        }
      }
    }
    for (auto& [n, v] : globals_) {
      if (n == name) return v;
    }
    throw std::logic_error("unresolved identifier " + name);
  }

  void declare(const Stmt& s, Scope& scope) {
    for (const auto& d : s.decls) {
      Var v;
      v.type = s.base;
      v.is_array = d.extent.has_value();
      v.cells.assign(d.extent ? static_cast<std::size_t>(*d.extent) : 1, zero_of(s.base));
      if (d.init) v.cells[0] = convert(eval(*d.init), s.base);
      scope.emplace_back(d.name, std::move(v));
    }
  }

  Scope& top_scope() { return frames_.back().back(); }

  Value call(const FunctionDecl& fn, std::vector<Value> args) {
    if (static_cast<int>(frames_.size()) >= kMaxCallDepth) throw RuntimeFault{"call depth exceeded"};
    frames_.emplace_back();
    frames_.back().emplace_back();
    for (std::size_t i = 0; i < fn.params.size(); ++i) {
      Var v;
      v.type = fn.params[i].type;
      v.cells.push_back(convert(args[i], v.type));
      top_scope().emplace_back(fn.params[i].name, std::move(v));
    }
    std::optional<Value> ret;
    for (const auto& s : fn.body.kids) {
      Flow f = exec(s, ret);
      if (f == Flow::Return) break;
    }
    frames_.pop_back();
    if (fn.ret == Type::Void) return Value::of_int(0);
    return ret ? convert(*ret, fn.ret) : zero_of(fn.ret);
  }

  Flow exec_block(const Stmt& b, std::optional<Value>& ret) {
    frames_.back().emplace_back();
    Flow result = Flow::Normal;
    for (const auto& k : b.kids) {
      result = exec(k, ret);
      if (result != Flow::Normal) break;
    }
    frames_.back().pop_back();
    return result;
  }

  Flow exec(const Stmt& s, std::optional<Value>& ret) {
    if (++steps_ > limit_) throw StepLimitHit{};
    switch (s.kind) {
      case Stmt::Kind::Block:
        return exec_block(s, ret);
      case Stmt::Kind::If:
        if (eval(*s.expr).truthy()) return exec_block(s.kids[0], ret);
        if (s.kids.size() > 1) return exec_block(s.kids[1], ret);
        return Flow::Normal;
      case Stmt::Kind::While:
        while (eval(*s.expr).truthy()) {
          Flow f = exec_block(s.kids[0], ret);
          if (f == Flow::Break) break;
          if (f == Flow::Return) return f;
          if (++steps_ > limit_) throw StepLimitHit{};
        }
        return Flow::Normal;
      case Stmt::Kind::For: {
        frames_.back().emplace_back();
        Flow out = Flow::Normal;
        for (const auto& i : s.init) exec(i, ret);
        while (!s.expr || eval(*s.expr).truthy()) {
          Flow f = exec_block(s.kids[0], ret);
          if (f == Flow::Break) break;
          if (f == Flow::Return) {
            out = f;
            break;
          }
          if (s.step) eval(*s.step);
          if (++steps_ > limit_) throw StepLimitHit{};
        }
        frames_.back().pop_back();
        return out;
      }
      case Stmt::Kind::Return:
        if (s.expr) ret = eval(*s.expr);
        return Flow::Return;
      case Stmt::Kind::ExprStmt:
        eval(*s.expr);
        return Flow::Normal;
      case Stmt::Kind::DeclStmt:
        declare(s, top_scope());
        return Flow::Normal;
      case Stmt::Kind::Io:
        io(s);
        return Flow::Normal;
      case Stmt::Kind::Break:
        return Flow::Break;
      case Stmt::Kind::Continue:
        return Flow::Continue;
    }
    return Flow::Normal;
  }

  void io(const Stmt& s) {
    if (s.io_dir == IoDirection::Write) {
      for (const auto& it : s.io) {
        if (it.kind == IoItem::Kind::Text) {
          out_ += it.text;
        } else if (it.spec == 's') {
          out_ += it.value->text;
        } else {
          out_ += format_value(eval(*it.value), it.spec);
        }
      }
      return;
    }
    for (const auto& it : s.io) {
      const Expr& target = *it.value;
      std::optional<std::int64_t> index;
      if (target.kind == Expr::Kind::Index) index = eval(target.args[1]).i;
      Value v;
      switch (it.spec) {
        case 'f': v = Value::of_double(read_double()); break;
        case 'c': v = Value::of_char(read_char()); break;
        default: v = Value::of_int(read_int()); break;
      }
      store(target, index, v);
    }
  }

  void skip_ws() {
    while (pos_ < in_.size() && std::isspace(static_cast<unsigned char>(in_[pos_]))) ++pos_;
  }

  std::int64_t read_int() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < in_.size() && (in_[pos_] == '-' || in_[pos_] == '+')) ++pos_;
    std::size_t digits = pos_;
    while (pos_ < in_.size() && std::isdigit(static_cast<unsigned char>(in_[pos_]))) ++pos_;
    if (pos_ == digits) {
      pos_ = start;
      throw RuntimeFault{"scanf on exhausted or malformed input"};
    }
    std::string tok(in_.substr(start, pos_ - start));
    errno = 0;
    long long v = std::strtoll(tok.c_str(), nullptr, 10);
    if (errno == ERANGE) throw RuntimeFault{"input integer out of range"};
    return v;
  }

  double read_double() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < in_.size() && !std::isspace(static_cast<unsigned char>(in_[pos_]))) ++pos_;
    std::string tok(in_.substr(start, pos_ - start));
    if (tok.empty()) throw RuntimeFault{"scanf on exhausted or malformed input"};
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) throw RuntimeFault{"scanf on exhausted or malformed input"};
    return v;
  }

  char read_char() {
    skip_ws();
    if (pos_ >= in_.size()) throw RuntimeFault{"scanf on exhausted or malformed input"};
    return in_[pos_++];
  }

  Value& cell(const Expr& target, std::optional<std::int64_t> index, Type* type_out = nullptr) {
    const std::string& name = target.kind == Expr::Kind::Index ? target.args[0].text : target.text;
    Var& v = lookup(name);
    if (type_out) *type_out = v.type;
    if (!index) return v.cells[0];
    if (*index < 0 || *index >= static_cast<std::int64_t>(v.cells.size())) {
      throw RuntimeFault{"array index " + std::to_string(*index) + " out of bounds for '" + name + "'"};
    }
    return v.cells[static_cast<std::size_t>(*index)];
  }

  Value store(const Expr& target, std::optional<std::int64_t> index, const Value& v) {
    Type t;
    Value& c = cell(target, index, &t);
    c = convert(v, t);
    return c;
  }

  static Value arith(const std::string& op, const Value& a, const Value& b) {
    if (a.type == Type::Double || b.type == Type::Double) {
      double x = a.as_double(), y = b.as_double();
      switch (op[0]) {
        case '+': return Value::of_double(x + y);
        case '-': return Value::of_double(x - y);
        case '*': return Value::of_double(x * y);
        case '/':
          if (y == 0.0) throw RuntimeFault{"division by zero"};
          return Value::of_double(x / y);
      }
      throw std::logic_error("bad double operator " + op);
    }
    std::int64_t x = a.i, y = b.i;
    switch (op[0]) {
      case '+': return Value::of_int(wrap_add(x, y));
      case '-': return Value::of_int(wrap_sub(x, y));
      case '*': return Value::of_int(wrap_mul(x, y));
      case '/':
        if (y == 0) throw RuntimeFault{"division by zero"};
        if (x == std::numeric_limits<std::int64_t>::min() && y == -1) return Value::of_int(x);
        return Value::of_int(x / y);
      case '%':
        if (y == 0) throw RuntimeFault{"division by zero"};
        if (y == -1) return Value::of_int(0);
        return Value::of_int(x % y);
    }
    throw std::logic_error("bad integer operator " + op);
  }

  static bool compare(const std::string& op, const Value& a, const Value& b) {
    if (a.type == Type::Double || b.type == Type::Double) {
      double x = a.as_double(), y = b.as_double();
      if (op == "<") return x < y;
      if (op == "<=") return x <= y;
      if (op == ">") return x > y;
      if (op == ">=") return x >= y;
      if (op == "==") return x == y;
      return x != y;
    }
    std::int64_t x = a.i, y = b.i;
    if (op == "<") return x < y;
    if (op == "<=") return x <= y;
    if (op == ">") return x > y;
    if (op == ">=") return x >= y;
    if (op == "==") return x == y;
    return x != y;
  }

  Value eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::IntLit: return Value::of_int(e.int_value);
      case Expr::Kind::FloatLit: return Value::of_double(e.float_value);
      case Expr::Kind::CharLit: return Value::of_char(e.int_value);
      case Expr::Kind::Ident: return cell(e, std::nullopt);
      case Expr::Kind::Index: return cell(e, eval(e.args[1]).i);
      case Expr::Kind::Call: {
        std::vector<Value> args;
        args.reserve(e.args.size());
        for (const auto& a : e.args) args.push_back(eval(a));
        return call(*ast_.find_function(e.text), std::move(args));
      }
      case Expr::Kind::Unary: {
        const std::string& op = e.text;
        if (op == "++" || op == "--") {
          const Expr& target = e.args[0];
          std::optional<std::int64_t> index;
          if (target.kind == Expr::Kind::Index) index = eval(target.args[1]).i;
          Value old = cell(target, index);
          Value one = old.type == Type::Double ? Value::of_double(1.0) : Value::of_int(1);
          Value updated = store(target, index, arith(op == "++" ? "+" : "-", old, one));
          return e.postfix ? old : updated;
        }
        Value v = eval(e.args[0]);
        if (op == "!") return Value::of_int(!v.truthy());
        if (v.type == Type::Double) return Value::of_double(op == "-" ? -v.d : v.d);
        return Value::of_int(op == "-" ? wrap_sub(0, v.i) : v.i);
      }
      case Expr::Kind::Binary: {
        const std::string& op = e.text;
        if (op == "&&") {
          if (!eval(e.args[0]).truthy()) return Value::of_int(0);
          return Value::of_int(eval(e.args[1]).truthy());
        }
        if (op == "||") {
          if (eval(e.args[0]).truthy()) return Value::of_int(1);
          return Value::of_int(eval(e.args[1]).truthy());
        }
        Value a = eval(e.args[0]);
        Value b = eval(e.args[1]);
        if (op.size() == 1 && std::string_view("+-*/%").find(op[0]) != std::string_view::npos) {
          return arith(op, a, b);
        }
        return Value::of_int(compare(op, a, b));
      }
      case Expr::Kind::Assign: {
        const Expr& target = e.args[0];
        std::optional<std::int64_t> index;
        if (target.kind == Expr::Kind::Index) index = eval(target.args[1]).i;
        if (e.text == "=") {
          Value rhs = eval(e.args[1]);
          return store(target, index, rhs);
        }
        Value old = cell(target, index);
        Value rhs = eval(e.args[1]);
        return store(target, index, arith(e.text.substr(0, 1), old, rhs));
      }
      case Expr::Kind::StringLit:
      case Expr::Kind::AddrOf:
        break;
    }
    throw std::logic_error("unexpected expression in evaluation");
  }

  const Ast& ast_;
  std::string_view in_;
  std::size_t pos_ = 0;
  std::uint64_t limit_;
  std::uint64_t steps_ = 0;
  std::string out_;
  Scope globals_;
  std::vector<std::vector<Scope>> frames_;
};

}  // namespace

ExecResult run(const Ast& ast, std::string_view stdin_bytes, std::uint64_t step_limit) {
  return Machine(ast, stdin_bytes, step_limit).run();
}

}  // namespace codeaug
