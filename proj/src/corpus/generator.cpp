#include "codeaug/corpus/generator.hpp"

#include <functional>
#include <set>
#include <stdexcept>

#include "codeaug/frontend/lexer.hpp"
#include "codeaug/frontend/normalize.hpp"
#include "codeaug/frontend/parser.hpp"
#include "codeaug/frontend/printer.hpp"
#include "codeaug/interp/interpreter.hpp"

namespace codeaug {
namespace {

const char* const kTemplateNames[] = {
    "array_max",   "array_sum",   "reverse_print", "count_above",  "bubble_sort", "second_max",
    "average",     "min_index",   "count_even",    "prefix_sums",  "fibonacci",   "factorial_mod",
    "gcd_all",     "count_primes", "value_range",  "sign_pattern",
};
constexpr int kTemplates = static_cast<int>(sizeof(kTemplateNames) / sizeof(kTemplateNames[0]));

struct OutItem {
  bool text = true;
  std::string s;
  char spec = 'd';
};

OutItem txt(std::string s) { return {true, std::move(s), 'd'}; }
OutItem val(std::string e, char spec = 'd') { return {false, std::move(e), spec}; }

struct Style {
  bool cpp_io = false;
  bool use_endl = false;
  bool while_loops = false;
  bool elide = false;
  bool merge_decls = false;
  bool use_helper = false;
  bool global_array = false;
  bool explicit_return = true;
  bool compound_assign = true;
  int decoy = 0;
};

class Builder {
 public:
  Builder(Rng& rng, int class_id) : rng_(rng), tmpl_(class_id % kTemplates), scale_(class_id / kTemplates + 1) {
    // Solutions to one problem share idioms, so each class leans toward its
    // own surface style; individual programs still vary around it.
    Rng profile(derive_seed(0x5EEDC1A55ULL, static_cast<std::uint64_t>(class_id)));
    auto lean = [&](double lo, double hi) { return profile.coin() ? hi : lo; };
    const double p_cpp = lean(0.15, 0.85), p_endl = lean(0.2, 0.8), p_while = lean(0.05, 0.35);
    const double p_elide = lean(0.1, 0.6), p_merge = lean(0.1, 0.6), p_compound = lean(0.2, 0.8);
    style_.cpp_io = rng.uniform() < p_cpp;
    style_.use_endl = rng.uniform() < p_endl;
    style_.while_loops = rng.uniform() < p_while;
    style_.elide = rng.uniform() < p_elide;
    style_.merge_decls = rng.uniform() < p_merge;
    style_.use_helper = rng.coin();
    style_.global_array = rng.below(6) == 0;
    style_.explicit_return = rng.below(20) != 0;
    style_.compound_assign = rng.uniform() < p_compound;
    style_.decoy = static_cast<int>(rng.below(4));
    arr_ = name({"a", "arr", "nums", "num", "v", "data", "x", "vals"});
    len_ = name({"n", "len", "m", "size", "cnt_n", "total_n", "num_items"});
    idx_ = name({"i", "j", "k", "idx", "t", "u"});
    idx2_ = name({"j", "k", "q", "w", "jj", "r"});
    acc_ = name({"sum", "s", "acc", "total", "res", "ans", "result", "out"});
    aux_ = name({"tmp", "best", "cur", "b", "mx", "hold", "top"});
  }

  std::string build() {
    std::string prelude = kDefaultPrelude;
    header_ += prelude;
    if (style_.global_array) globals_ += "int " + arr_ + "[100];\n";
    body();
    std::string text = header_;
    if (!globals_.empty()) text += "\n" + globals_;
    for (const auto& h : helpers_) text += "\n" + h;
    text += "\nint main() {\n" + main_ + "}\n";
    return text;
  }

 private:
  std::string name(std::initializer_list<const char*> pool) {
    std::vector<std::string> opts(pool.begin(), pool.end());
    for (int tries = 0; tries < 64; ++tries) {
      std::string s = rng_.pick(opts);
      if (!used_.count(s)) {
        used_.insert(s);
        return s;
      }
    }
    std::string s = std::string(rng_.pick(opts)) + "_" + std::to_string(used_.size());
    used_.insert(s);
    return s;
  }

  void line(const std::string& s) {
    main_.append(static_cast<std::size_t>(depth_) * 4, ' ');
    main_ += s;
    main_ += '\n';
  }
  void open(const std::string& header) {
    line(header + " {");
    ++depth_;
    scopes_.emplace_back();
  }
  void close() {
    --depth_;
    scopes_.pop_back();
    line("}");
  }
  bool declared(const std::string& n) const {
    for (const auto& s : scopes_) {
      if (s.count(n)) return true;
    }
    return false;
  }
  void declare(const std::string& decl_text, const std::string& n) {
    scopes_.back().insert(n);
    line(decl_text);
  }

  // Body with a single statement; elided when the style asks for it.
  void single(const std::string& header, const std::function<void()>& stmt) {
    if (style_.elide) {
      line(header);
      ++depth_;
      scopes_.emplace_back();
      stmt();
      scopes_.pop_back();
      --depth_;
    } else {
      open(header);
      stmt();
      close();
    }
  }

  // Counting loop `for (var = start; cond; step)` in either for or while form.
  void loop(const std::string& var, const std::string& start, const std::string& cond, const std::string& step,
            const std::function<void()>& body, bool single_stmt) {
    if (!style_.while_loops) {
      std::string header = "for (int " + var + " = " + start + "; " + cond + "; " + step + ")";
      if (single_stmt) {
        single(header, body);
      } else {
        open(header);
        body();
        close();
      }
      return;
    }
    if (declared(var)) {
      line(var + " = " + start + ";");
    } else {
      declare("int " + var + " = " + start + ";", var);
    }
    open("while (" + cond + ")");
    body();
    line(step + ";");
    close();
  }

  std::string add_to(const std::string& target, const std::string& e) {
    return style_.compound_assign ? target + " += " + e + ";" : target + " = " + target + " + " + e + ";";
  }

  void print(const std::vector<OutItem>& items) {
    if (silent_) return;
    if (style_.cpp_io) {
      std::string s = "cout";
      for (const auto& it : items) {
        if (it.text) {
          s += " << ";
          s += (it.s == "\n" && style_.use_endl) ? "endl" : "\"" + escape_string(it.s) + "\"";
        } else {
          s += " << " + it.s;
        }
      }
      line(s + ";");
      return;
    }
    std::string fmt, args;
    for (const auto& it : items) {
      if (it.text) {
        fmt += escape_string(it.s);
      } else {
        fmt += std::string("%") + it.spec;
        args += ", " + it.s;
      }
    }
    line("printf(\"" + fmt + "\"" + args + ");");
  }

  void read_int(const std::string& lvalue) {
    if (style_.cpp_io) {
      line("cin >> " + lvalue + ";");
    } else {
      line("scanf(\"%d\", &" + lvalue + ");");
    }
  }

  std::string scaled(const std::string& e) const {
    return scale_ == 1 ? e : "(" + e + ") * " + std::to_string(scale_);
  }

  std::string at(const std::string& i) const { return arr_ + "[" + i + "]"; }

  void read_input() {
    if (style_.global_array) {
      declare("int " + len_ + ";", len_);
    } else if (style_.merge_decls) {
      declare("int " + len_ + ", " + arr_ + "[100];", len_);
    } else {
      declare("int " + len_ + ";", len_);
      declare("int " + arr_ + "[100];", arr_);
    }
    read_int(len_);
    loop(idx_, "0", idx_ + " < " + len_, idx_ + "++", [&] { read_int(at(idx_)); }, true);
  }

  void decoy() {
    switch (style_.decoy) {
      case 1:
        print({txt(rng_.coin() ? "Result:\n" : "answer\n")});
        break;
      case 2: {
        std::string chk = name({"chk", "check", "dbg", "probe"});
        declare("int " + chk + " = 0;", chk);
        loop(idx_, "0", idx_ + " < " + len_, idx_ + "++",
             [&] { line(add_to(chk, at(idx_) + " % " + std::to_string(rng_.range(2, 9)))); }, true);
        break;
      }
      case 3:
        print({val(len_), txt("\n")});
        break;
      default:
        break;
    }
  }

  void body() {
    scopes_.emplace_back();
    read_input();
    if (rng_.coin()) decoy();
    if (rng_.coin()) leftover();
    run_template(tmpl_);
    if (style_.explicit_return) line("return 0;");
  }

  void run_template(int t) {
    switch (t) {
      case 0: array_max(); break;
      case 1: array_sum(); break;
      case 2: reverse_print(); break;
      case 3: count_above(); break;
      case 4: bubble_sort(); break;
      case 5: second_max(); break;
      case 6: average(); break;
      case 7: min_index(); break;
      case 8: count_even(); break;
      case 9: prefix_sums(); break;
      case 10: fibonacci(); break;
      case 11: factorial_mod(); break;
      case 12: gcd_all(); break;
      case 13: count_primes(); break;
      case 14: value_range(); break;
      default: sign_pattern(); break;
    }
  }

  // Another template's computation whose result is never printed, as left
  // behind by an edited solution. Only templates that leave the array
  // untouched qualify.
  void leftover() {
    static const int kPure[] = {0, 1, 3, 5, 6, 7, 8, 9, 10, 13, 14};
    int t = tmpl_;
    while (t == tmpl_) t = kPure[rng_.below(std::size(kPure))];
    std::string acc = acc_, aux = aux_;
    acc_ = name({"sum", "s", "acc", "total", "res", "ans", "result", "out"});
    aux_ = name({"tmp", "best", "cur", "b", "mx", "hold", "top"});
    silent_ = true;
    run_template(t);
    silent_ = false;
    acc_ = acc;
    aux_ = aux;
  }

  void array_max() {
    if (style_.use_helper) {
      std::string x = name({"x", "p1", "lhs"}), y = name({"y", "p2", "rhs"});
      helpers_.push_back("int max2(int " + x + ", int " + y + ") {\n    if (" + x + " > " + y + ")" +
                         (style_.elide ? "\n        return " + x + ";\n" : " {\n        return " + x + ";\n    }\n") +
                         "    return " + y + ";\n}\n");
    }
    declare("int " + aux_ + " = " + at("0") + ";", aux_);
    loop(idx_, "1", idx_ + " < " + len_, idx_ + "++", [&] {
      if (style_.use_helper) {
        line(aux_ + " = max2(" + aux_ + ", " + at(idx_) + ");");
      } else {
        single("if (" + at(idx_) + " > " + aux_ + ")", [&] { line(aux_ + " = " + at(idx_) + ";"); });
      }
    }, true);
    print({val(scaled(aux_)), txt("\n")});
  }

  void array_sum() {
    declare("int " + acc_ + " = 0;", acc_);
    loop(idx_, "0", idx_ + " < " + len_, idx_ + "++", [&] { line(add_to(acc_, at(idx_))); }, true);
    print({val(scaled(acc_)), txt("\n")});
  }

  void reverse_print() {
    loop(idx_, len_ + " - 1", idx_ + " >= 0", idx_ + "--",
         [&] { print({val(scaled(at(idx_))), txt(" ")}); }, true);
    print({txt("\n")});
  }

  void count_above() {
    std::string limit = std::to_string(rng_.range(0, 10));
    declare("int " + acc_ + " = 0;", acc_);
    loop(idx_, "0", idx_ + " < " + len_, idx_ + "++",
         [&] { single("if (" + at(idx_) + " > " + limit + ")", [&] { line(acc_ + "++;"); }); }, true);
    print({val(scaled(acc_)), txt("\n")});
  }

  void bubble_sort() {
    loop(idx_, "0", idx_ + " < " + len_, idx_ + "++", [&] {
      loop(idx2_, "0", idx2_ + " < " + len_ + " - 1 - " + idx_, idx2_ + "++", [&] {
        open("if (" + at(idx2_) + " > " + at(idx2_ + " + 1") + ")");
        declare("int " + aux_ + " = " + at(idx2_) + ";", aux_);
        line(at(idx2_) + " = " + at(idx2_ + " + 1") + ";");
        line(at(idx2_ + " + 1") + " = " + aux_ + ";");
        close();
      }, true);
    }, !style_.while_loops);
    loop(idx_, "0", idx_ + " < " + len_, idx_ + "++", [&] { print({val(scaled(at(idx_))), txt(" ")}); }, true);
    print({txt("\n")});
  }

  void second_max() {
    std::string second = name({"second", "sec", "runner", "max2nd"});
    if (style_.merge_decls) {
      declare("int " + aux_ + " = -1000000, " + second + " = -1000000;", aux_);
      scopes_.back().insert(second);
    } else {
      declare("int " + aux_ + " = -1000000;", aux_);
      declare("int " + second + " = -1000000;", second);
    }
    loop(idx_, "0", idx_ + " < " + len_, idx_ + "++", [&] {
      open("if (" + at(idx_) + " > " + aux_ + ")");
      line(second + " = " + aux_ + ";");
      line(aux_ + " = " + at(idx_) + ";");
      --depth_;
      scopes_.pop_back();
      single("} else if (" + at(idx_) + " > " + second + ")", [&] { line(second + " = " + at(idx_) + ";"); });
      if (!style_.elide) {
        // single() already closed the braced else-if body.
      }
    }, true);
    print({val(scaled(aux_)), txt(" "), val(scaled(second)), txt("\n")});
  }

  void average() {
    declare("double " + acc_ + " = 0.0;", acc_);
    loop(idx_, "0", idx_ + " < " + len_, idx_ + "++", [&] { line(add_to(acc_, at(idx_))); }, true);
    std::string avg = name({"avg", "mean", "average"});
    declare("double " + avg + " = " + acc_ + " / " + len_ + ";", avg);
    print({val(scaled(avg), 'f'), txt("\n")});
  }

  void min_index() {
    declare("int " + aux_ + " = 0;", aux_);
    loop(idx_, "1", idx_ + " < " + len_, idx_ + "++", [&] {
      single("if (" + at(idx_) + " < " + at(aux_) + ")", [&] { line(aux_ + " = " + idx_ + ";"); });
    }, true);
    print({val(scaled(aux_)), txt("\n")});
  }

  void count_even() {
    declare("int " + acc_ + " = 0;", acc_);
    loop(idx_, "0", idx_ + " < " + len_, idx_ + "++", [&] {
      single("if (" + at(idx_) + " % 2 == 0)", [&] { line(acc_ + "++;"); });
    }, true);
    print({val(scaled(acc_)), txt("\n")});
  }

  void prefix_sums() {
    declare("int " + acc_ + " = 0;", acc_);
    loop(idx_, "0", idx_ + " < " + len_, idx_ + "++", [&] {
      line(add_to(acc_, at(idx_)));
      print({val(scaled(acc_)), txt(" ")});
    }, false);
    print({txt("\n")});
  }

  void fibonacci() {
    if (style_.use_helper) {
      std::string k = name({"k", "steps", "count"});
      helpers_.push_back("int fib(int " + k + ") {\n    int f0 = 0, f1 = 1;\n    while (" + k +
                         " > 0) {\n        int f2 = f0 + f1;\n        f0 = f1;\n        f1 = f2;\n        " + k +
                         "--;\n    }\n    return f0;\n}\n");
      print({val(scaled("fib(" + len_ + ")")), txt("\n")});
      return;
    }
    std::string f0 = name({"f0", "prev", "fa"}), f1 = name({"f1", "curr", "fb"});
    if (style_.merge_decls) {
      declare("int " + f0 + " = 0, " + f1 + " = 1;", f0);
      scopes_.back().insert(f1);
    } else {
      declare("int " + f0 + " = 0;", f0);
      declare("int " + f1 + " = 1;", f1);
    }
    loop(idx_, "0", idx_ + " < " + len_, idx_ + "++", [&] {
      declare("int " + aux_ + " = " + f0 + " + " + f1 + ";", aux_);
      line(f0 + " = " + f1 + ";");
      line(f1 + " = " + aux_ + ";");
    }, false);
    print({val(scaled(f0)), txt("\n")});
  }

  void factorial_mod() {
    declare("int " + acc_ + " = 1;", acc_);
    loop(idx_, "0", idx_ + " < " + len_, idx_ + "++", [&] {
      open("if (" + at(idx_) + " < 0)");
      line(at(idx_) + " = -" + at(idx_) + ";");
      close();
      line(acc_ + " = " + acc_ + " * (" + at(idx_) + " + 1) % 1000007;");
    }, false);
    print({val(scaled(acc_)), txt("\n")});
  }

  void gcd_all() {
    std::string x = name({"x", "u1", "aa"}), y = name({"y", "u2", "bb"});
    helpers_.push_back("int gcd(int " + x + ", int " + y + ") {\n    while (" + y + " != 0) {\n        int r = " + x +
                       " % " + y + ";\n        " + x + " = " + y + ";\n        " + y + " = r;\n    }\n    return " + x +
                       ";\n}\n");
    declare("int " + acc_ + " = 0;", acc_);
    loop(idx_, "0", idx_ + " < " + len_, idx_ + "++", [&] {
      single("if (" + at(idx_) + " < 0)", [&] { line(at(idx_) + " = -" + at(idx_) + ";"); });
      line(acc_ + " = gcd(" + acc_ + ", " + at(idx_) + " + 1);");
    }, false);
    print({val(scaled(acc_)), txt("\n")});
  }

  void count_primes() {
    std::string x = name({"x", "val", "cand"}), d = name({"d", "div", "f"});
    std::string check = style_.use_helper ? "is_prime" : "prime_check";
    helpers_.push_back("int " + check + "(int " + x + ") {\n    if (" + x + " < 2) {\n        return 0;\n    }\n" +
                       "    for (int " + d + " = 2; " + d + " * " + d + " <= " + x + "; " + d + "++) {\n        if (" +
                       x + " % " + d + " == 0) {\n            return 0;\n        }\n    }\n    return 1;\n}\n");
    declare("int " + acc_ + " = 0;", acc_);
    loop(idx_, "0", idx_ + " < " + len_, idx_ + "++", [&] {
      single("if (" + check + "(" + at(idx_) + "))", [&] { line(acc_ + "++;"); });
    }, true);
    print({val(scaled(acc_)), txt("\n")});
  }

  void value_range() {
    std::string lo = name({"lo", "low", "mn", "smallest"});
    declare("int " + aux_ + " = " + at("0") + ";", aux_);
    declare("int " + lo + " = " + at("0") + ";", lo);
    loop(idx_, "0", idx_ + " < " + len_, idx_ + "++", [&] {
      single("if (" + at(idx_) + " > " + aux_ + ")", [&] { line(aux_ + " = " + at(idx_) + ";"); });
      single("if (" + at(idx_) + " < " + lo + ")", [&] { line(lo + " = " + at(idx_) + ";"); });
    }, false);
    print({val(scaled(aux_ + " - " + lo)), txt("\n")});
  }

  void sign_pattern() {
    std::string c = name({"c", "ch", "mark", "sym"});
    declare("char " + c + ";", c);
    declare("int " + acc_ + " = 0;", acc_);
    loop(idx_, "0", idx_ + " < " + len_, idx_ + "++", [&] {
      open("if (" + at(idx_) + " > 0)");
      line(c + " = '+';");
      line(acc_ + "++;");
      close();
      open("else");
      line(c + " = '-';");
      close();
      print({val(c, 'c')});
    }, false);
    print({txt("\n")});
    if (scale_ > 1) print({val(scaled(acc_)), txt("\n")});
  }

  Rng& rng_;
  int tmpl_;
  int scale_;
  Style style_;
  std::set<std::string> used_;
  std::string arr_, len_, idx_, idx2_, acc_, aux_;
  std::string header_, globals_, main_;
  std::vector<std::string> helpers_;
  std::vector<std::set<std::string>> scopes_;
  int depth_ = 1;
  bool silent_ = false;
};

}  // namespace

int template_count() { return kTemplates; }

std::string template_name(int class_id) {
  std::string n = kTemplateNames[class_id % kTemplates];
  if (class_id >= kTemplates) n += "_x" + std::to_string(class_id / kTemplates + 1);
  return n;
}

std::string generate_program(int class_id, Rng& rng) { return Builder(rng, class_id).build(); }

std::string random_input(Rng& rng) {
  std::int64_t n = rng.range(1, 10);
  std::string s = std::to_string(n) + "\n";
  for (std::int64_t i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += std::to_string(rng.range(-20, 50));
  }
  return s + "\n";
}

std::vector<std::string> oracle_inputs(const std::string& sample_id, std::uint64_t seed, int count) {
  std::vector<std::string> out;
  Rng rng(derive_seed(seed, "oracle:" + sample_id));
  for (int i = 0; i < count; ++i) {
    if (i == 0) {
      out.push_back("1\n" + std::to_string(rng.range(-20, 50)) + "\n");
    } else {
      out.push_back(random_input(rng));
    }
  }
  return out;
}

std::vector<GeneratedProgram> generate_corpus(int n_classes, int per_class, std::uint64_t seed) {
  if (n_classes < 2) throw std::invalid_argument("n_classes must be at least 2");
  std::vector<GeneratedProgram> out;
  out.reserve(static_cast<std::size_t>(n_classes) * static_cast<std::size_t>(per_class));
  for (int c = 0; c < n_classes; ++c) {
    for (int j = 0; j < per_class; ++j) {
      char id[32];
      std::snprintf(id, sizeof id, "c%03d_%04d", c, j);
      Rng rng(derive_seed(seed, id));
      Ast ast = parse(generate_program(c, rng));
      GeneratedProgram p{id, c, print_program(ast)};
      for (const auto& input : oracle_inputs(p.id, seed, 3)) {
        ExecResult r = run(ast, input);
        if (r.status != ExecResult::Status::Ok) {
          throw std::logic_error("generated program " + p.id + " failed: " + r.message + "\n" + p.code);
        }
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace codeaug
