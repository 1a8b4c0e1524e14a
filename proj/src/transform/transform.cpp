#include "codeaug/transform/transform.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "codeaug/errors.hpp"
#include "codeaug/frontend/parser.hpp"
#include "codeaug/frontend/printer.hpp"

namespace codeaug {

TransformFamily family_of(TransformKind k) {
  switch (k) {
    case TransformKind::ForToWhile:
    case TransformKind::WhileToFor:
    case TransformKind::IfElseSwap:
      return TransformFamily::Control;
    case TransformKind::IoCToCpp:
    case TransformKind::IoCppToC:
      return TransformFamily::Api;
    default:
      return TransformFamily::Declaration;
  }
}

std::string_view kind_name(TransformKind k) {
  switch (k) {
    case TransformKind::ForToWhile: return "for_to_while";
    case TransformKind::WhileToFor: return "while_to_for";
    case TransformKind::IfElseSwap: return "if_else_swap";
    case TransformKind::IoCToCpp: return "io_c_to_cpp";
    case TransformKind::IoCppToC: return "io_cpp_to_c";
    case TransformKind::UnusedDecl: return "unused_decl";
    case TransformKind::BraceToggle: return "brace_toggle";
    case TransformKind::ReturnNormalize: return "return_normalize";
    case TransformKind::DeclMerge: return "decl_merge";
    case TransformKind::DeclSplit: return "decl_split";
    case TransformKind::DeclSwap: return "decl_swap";
  }
  return "?";
}

std::string_view family_name(TransformFamily f) {
  switch (f) {
    case TransformFamily::Control: return "control";
    case TransformFamily::Api: return "api";
    case TransformFamily::Declaration: return "declaration";
  }
  return "?";
}

std::optional<TransformKind> parse_kind(std::string_view name) {
  for (auto k : kAllTransformKinds) {
    if (kind_name(k) == name) return k;
  }
  return std::nullopt;
}

std::vector<TransformKind> parse_kind_list(std::string_view list) {
  std::set<TransformKind> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    std::string_view item = list.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      bool matched = false;
      for (auto k : kAllTransformKinds) {
        if (item == "all" || family_name(family_of(k)) == item || kind_name(k) == item) {
          out.insert(k);
          matched = true;
        }
      }
      if (!matched) throw DataError("unknown transform kind '" + std::string(item) + "'");
    }
    start = end + 1;
  }
  return {out.begin(), out.end()};
}

namespace {

using Path = std::vector<int>;

Stmt& node_at(Ast& ast, const Path& path) {
  Stmt* s = &ast.functions.at(static_cast<std::size_t>(path.at(0))).body;
  for (std::size_t i = 1; i < path.size(); ++i) s = &s->kids.at(static_cast<std::size_t>(path[i]));
  return *s;
}

template <typename Fn>
void walk(const Stmt& s, Path& path, const Fn& fn) {
  fn(s, path);
  for (std::size_t i = 0; i < s.kids.size(); ++i) {
    path.push_back(static_cast<int>(i));
    walk(s.kids[i], path, fn);
    path.pop_back();
  }
}

template <typename Fn>
void walk(const Ast& ast, const Fn& fn) {
  for (std::size_t f = 0; f < ast.functions.size(); ++f) {
    Path path{static_cast<int>(f)};
    walk(ast.functions[f].body, path, fn);
  }
}

bool has_bound_continue(const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::Continue: return true;
    case Stmt::Kind::While:
    case Stmt::Kind::For: return false;
    default:
      return std::any_of(s.kids.begin(), s.kids.end(), has_bound_continue);
  }
}

bool is_trivial_return_value(const Expr& e) {
  return e.kind == Expr::Kind::Ident || e.kind == Expr::Kind::IntLit || e.kind == Expr::Kind::FloatLit ||
         e.kind == Expr::Kind::CharLit;
}

// No side effects and no way to fault, so evaluation order is unobservable.
bool is_pure_total(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::IntLit:
    case Expr::Kind::FloatLit:
    case Expr::Kind::CharLit:
    case Expr::Kind::Ident:
      return true;
    case Expr::Kind::Unary:
      return (e.text == "-" || e.text == "+" || e.text == "!") && is_pure_total(e.args[0]);
    case Expr::Kind::Binary:
      return e.text != "/" && e.text != "%" && is_pure_total(e.args[0]) && is_pure_total(e.args[1]);
    default:
      return false;
  }
}

void names_read(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::Ident) out.insert(e.text);
  if (e.kind == Expr::Kind::Index) out.insert(e.args[0].text);
  for (const auto& a : e.args) names_read(a, out);
}

bool single_plain_decl(const Stmt& s) {
  return s.kind == Stmt::Kind::DeclStmt && s.decls.size() == 1 && !s.decls[0].init;
}

bool mergeable_pair(const Stmt& a, const Stmt& b) {
  return single_plain_decl(a) && single_plain_decl(b) && a.base == b.base;
}

bool swappable_pair(const Stmt& a, const Stmt& b) {
  if (a.kind != Stmt::Kind::DeclStmt || b.kind != Stmt::Kind::DeclStmt) return false;
  std::set<std::string> names_a, names_b, reads_a, reads_b;
  for (const auto& d : a.decls) {
    names_a.insert(d.name);
    if (d.init) {
      if (!is_pure_total(*d.init)) return false;
      names_read(*d.init, reads_a);
    }
  }
  for (const auto& d : b.decls) {
    names_b.insert(d.name);
    if (d.init) {
      if (!is_pure_total(*d.init)) return false;
      names_read(*d.init, reads_b);
    }
  }
  for (const auto& n : names_a) {
    if (names_b.count(n) || reads_b.count(n)) return false;
  }
  for (const auto& n : names_b) {
    if (reads_a.count(n)) return false;
  }
  return true;
}

// Bodies of control statements whose brace flag can be flipped with a
// visible change in the printed text.
bool brace_togglable(const Stmt& owner, std::size_t kid) {
  const Stmt& b = owner.kids[kid];
  if (!can_elide(b)) return false;
  bool then_of_if_else = owner.kind == Stmt::Kind::If && kid == 0 && owner.kids.size() > 1;
  if (then_of_if_else && ends_with_open_if(b.kids[0])) return false;
  return true;
}

int function_index(const Ast& ast, const std::string& name) {
  for (std::size_t i = 0; i < ast.functions.size(); ++i) {
    if (ast.functions[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

bool main_needs_return(const Ast& ast) {
  int m = function_index(ast, "main");
  const auto& kids = ast.functions[static_cast<std::size_t>(m)].body.kids;
  return kids.empty() || kids.back().kind != Stmt::Kind::Return;
}

// Replaces parent.kids[index, index+count) by `with`, keeping the invariant
// that an elided body never wraps a lone Block.
void splice(Stmt& parent, std::size_t index, std::size_t count, std::vector<Stmt> with) {
  auto& kids = parent.kids;
  kids.erase(kids.begin() + static_cast<std::ptrdiff_t>(index),
             kids.begin() + static_cast<std::ptrdiff_t>(index + count));
  kids.insert(kids.begin() + static_cast<std::ptrdiff_t>(index), std::make_move_iterator(with.begin()),
              std::make_move_iterator(with.end()));
  if (!parent.elided) return;
  if (kids.size() == 1 && kids[0].kind == Stmt::Kind::Block) {
    Stmt inner = std::move(kids[0]);
    kids = std::move(inner.kids);
    parent.elided = false;
  } else if (kids.size() != 1) {
    parent.elided = false;
  }
}

const std::vector<std::string>& fresh_stems() {
  static const std::vector<std::string> stems = {"tmp", "aux", "buf", "unused", "pad", "spare",
                                                 "dummy", "scratch", "extra", "slot", "cell", "hold"};
  return stems;
}

std::string fresh_name(const Ast& ast, Rng& rng, const std::set<std::string>& taken_extra = {}) {
  auto ids = collect_identifiers(ast);
  std::set<std::string> taken(ids.begin(), ids.end());
  taken.insert(taken_extra.begin(), taken_extra.end());
  while (true) {
    std::string name = rng.pick(fresh_stems()) + "_" + std::to_string(rng.below(1000));
    if (!taken.count(name)) return name;
  }
}

Expr random_literal(Type t, Rng& rng) {
  switch (t) {
    case Type::Double: {
      std::int64_t whole = rng.range(0, 99);
      std::int64_t frac = rng.range(0, 9);
      std::string spelling = std::to_string(whole) + "." + std::to_string(frac);
      return Expr::float_lit(static_cast<double>(whole) + static_cast<double>(frac) / 10.0, spelling);
    }
    case Type::Char:
      return Expr::char_lit(static_cast<char>('a' + rng.below(26)));
    default:
      return Expr::int_lit(rng.range(0, 99));
  }
}

void ensure_stream_headers(Ast& ast) {
  if (std::find(ast.includes.begin(), ast.includes.end(), "iostream") == ast.includes.end()) {
    ast.includes.push_back("iostream");
  }
  ast.using_std = true;
}

void ensure_stdio_header(Ast& ast) {
  if (std::find(ast.includes.begin(), ast.includes.end(), "stdio.h") == ast.includes.end() &&
      std::find(ast.includes.begin(), ast.includes.end(), "cstdio") == ast.includes.end()) {
    ast.includes.insert(ast.includes.begin(), "stdio.h");
  }
}

}  // namespace

std::vector<Site> applicable_sites(const Ast& ast, TransformKind kind) {
  std::vector<Site> sites;
  auto add = [&](const Path& p) { sites.push_back(Site{p, kind}); };
  int main_idx = function_index(ast, "main");
  walk(ast, [&](const Stmt& s, const Path& path) {
    switch (kind) {
      case TransformKind::ForToWhile:
        if (s.kind == Stmt::Kind::For && !has_bound_continue(s.kids[0])) add(path);
        break;
      case TransformKind::WhileToFor:
        if (s.kind == Stmt::Kind::While) add(path);
        break;
      case TransformKind::IfElseSwap:
        if (s.kind == Stmt::Kind::If && s.kids.size() == 2) add(path);
        break;
      case TransformKind::IoCToCpp:
        if (s.kind == Stmt::Kind::Io && s.io_style == IoStyle::C && !s.io.empty()) add(path);
        break;
      case TransformKind::IoCppToC:
        if (s.kind == Stmt::Kind::Io && s.io_style == IoStyle::Cpp) add(path);
        break;
      case TransformKind::UnusedDecl:
        if (s.kind == Stmt::Kind::Block) add(path);
        break;
      case TransformKind::BraceToggle:
        if (s.kind == Stmt::Kind::If || s.kind == Stmt::Kind::While || s.kind == Stmt::Kind::For) {
          for (std::size_t k = 0; k < s.kids.size(); ++k) {
            if (brace_togglable(s, k)) {
              Path p = path;
              p.push_back(static_cast<int>(k));
              add(p);
            }
          }
        }
        break;
      case TransformKind::ReturnNormalize:
        if (path.size() == 1 && path[0] == main_idx && main_needs_return(ast)) add(path);
        if (s.kind == Stmt::Kind::Return && s.expr && !is_trivial_return_value(*s.expr)) add(path);
        break;
      case TransformKind::DeclMerge:
        if (s.kind == Stmt::Kind::Block) {
          for (std::size_t i = 0; i + 1 < s.kids.size(); ++i) {
            if (mergeable_pair(s.kids[i], s.kids[i + 1])) {
              Path p = path;
              p.push_back(static_cast<int>(i));
              add(p);
            }
          }
        }
        break;
      case TransformKind::DeclSplit:
        if (s.kind == Stmt::Kind::Block) {
          for (std::size_t i = 0; i < s.kids.size(); ++i) {
            if (s.kids[i].kind == Stmt::Kind::DeclStmt && s.kids[i].decls.size() > 1) {
              Path p = path;
              p.push_back(static_cast<int>(i));
              add(p);
            }
          }
        }
        break;
      case TransformKind::DeclSwap:
        if (s.kind == Stmt::Kind::Block) {
          for (std::size_t i = 0; i + 1 < s.kids.size(); ++i) {
            if (swappable_pair(s.kids[i], s.kids[i + 1])) {
              Path p = path;
              p.push_back(static_cast<int>(i));
              add(p);
            }
          }
        }
        break;
    }
  });
  // BraceToggle, DeclMerge, DeclSplit and DeclSwap sites are discovered from
  // their parent, so restore strict pre-order by path.
  std::stable_sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) { return a.path < b.path; });
  return sites;
}

Ast apply(const Ast& input, const Site& site, Rng& rng) {
  auto sites = applicable_sites(input, site.kind);
  if (std::find(sites.begin(), sites.end(), site) == sites.end()) {
    std::string p;
    for (int i : site.path) p += (p.empty() ? "" : ",") + std::to_string(i);
    throw InapplicableSite(std::string(kind_name(site.kind)) + " does not apply at [" + p + "]");
  }

  Ast ast = input;
  const Path& path = site.path;
  Path parent_path(path.begin(), path.end() - (path.size() > 1 ? 1 : 0));
  auto parent_and_index = [&]() -> std::pair<Stmt*, std::size_t> {
    return {&node_at(ast, parent_path), static_cast<std::size_t>(path.back())};
  };
  const FunctionDecl& fn = ast.functions[static_cast<std::size_t>(path[0])];

  switch (site.kind) {
    case TransformKind::ForToWhile: {
      auto [parent, idx] = parent_and_index();
      Stmt f = std::move(parent->kids[idx]);
      Stmt loop;
      loop.kind = Stmt::Kind::While;
      loop.pos = f.pos;
      loop.expr = f.expr ? std::move(*f.expr) : Expr::int_lit(1);
      Stmt body = std::move(f.kids[0]);
      if (f.step) {
        bool declares = std::any_of(body.kids.begin(), body.kids.end(),
                                    [](const Stmt& k) { return k.kind == Stmt::Kind::DeclStmt; });
        Stmt step = Stmt::expr_stmt(std::move(*f.step));
        if (declares) {
          body.elided = false;
          body = Stmt::block({std::move(body), std::move(step)});
        } else {
          body.kids.push_back(std::move(step));
          body.elided = false;
        }
      }
      loop.kids.push_back(std::move(body));
      std::vector<Stmt> replacement;
      if (!f.init.empty()) {
        replacement.push_back(Stmt::block({std::move(f.init[0]), std::move(loop)}));
      } else {
        replacement.push_back(std::move(loop));
      }
      splice(*parent, idx, 1, std::move(replacement));
      break;
    }
    case TransformKind::WhileToFor: {
      Stmt& w = node_at(ast, path);
      w.kind = Stmt::Kind::For;
      break;
    }
    case TransformKind::IfElseSwap: {
      Stmt& s = node_at(ast, path);
      s.expr = Expr::unary("!", std::move(*s.expr));
      std::swap(s.kids[0], s.kids[1]);
      break;
    }
    case TransformKind::IoCToCpp: {
      Stmt& s = node_at(ast, path);
      s.io_style = IoStyle::Cpp;
      for (auto& it : s.io) {
        if (it.kind == IoItem::Kind::Value && it.spec == 's') {
          it.kind = IoItem::Kind::Text;
          it.text = it.value->text;
          it.value.reset();
        }
      }
      ensure_stream_headers(ast);
      break;
    }
    case TransformKind::IoCppToC: {
      Stmt& s = node_at(ast, path);
      s.io_style = IoStyle::C;
      std::vector<IoItem> merged;
      for (auto& it : s.io) {
        if (it.kind == IoItem::Kind::Text) {
          if (it.text.empty()) continue;
          if (!merged.empty() && merged.back().kind == IoItem::Kind::Text) {
            merged.back().text += it.text;
            continue;
          }
          it.endl = false;
        }
        merged.push_back(std::move(it));
      }
      s.io = std::move(merged);
      ensure_stdio_header(ast);
      break;
    }
    case TransformKind::UnusedDecl: {
      Stmt& block = node_at(ast, path);
      static constexpr Type kTypes[] = {Type::Int, Type::Double, Type::Char};
      Type t = kTypes[rng.below(3)];
      std::size_t pos = rng.below(block.kids.size() + 1);
      Stmt decl;
      decl.kind = Stmt::Kind::DeclStmt;
      decl.base = t;
      Decl d;
      d.name = fresh_name(input, rng);
      if (rng.coin()) d.init = random_literal(t, rng);
      decl.decls.push_back(std::move(d));
      splice(block, pos, 0, {std::move(decl)});
      break;
    }
    case TransformKind::BraceToggle: {
      Stmt& body = node_at(ast, path);
      body.elided = !body.elided;
      break;
    }
    case TransformKind::ReturnNormalize: {
      Stmt& target = node_at(ast, path);
      if (target.kind == Stmt::Kind::Block) {
        target.kids.push_back(Stmt::ret(Expr::int_lit(0)));
        break;
      }
      auto [parent, idx] = parent_and_index();
      std::string name = fresh_name(input, rng);
      Stmt decl;
      decl.kind = Stmt::Kind::DeclStmt;
      decl.base = fn.ret;
      Decl d;
      d.name = name;
      d.init = std::move(*parent->kids[idx].expr);
      decl.decls.push_back(std::move(d));
      std::vector<Stmt> repl;
      repl.push_back(Stmt::block({std::move(decl), Stmt::ret(Expr::ident(name))}));
      splice(*parent, idx, 1, std::move(repl));
      break;
    }
    case TransformKind::DeclMerge: {
      auto [parent, idx] = parent_and_index();
      std::size_t run = 1;
      while (idx + run < parent->kids.size() && mergeable_pair(parent->kids[idx], parent->kids[idx + run])) ++run;
      std::size_t arity = 2 + rng.below(run - 1);
      Stmt merged = parent->kids[idx];
      for (std::size_t k = 1; k < arity; ++k) merged.decls.push_back(parent->kids[idx + k].decls[0]);
      splice(*parent, idx, arity, {std::move(merged)});
      break;
    }
    case TransformKind::DeclSplit: {
      auto [parent, idx] = parent_and_index();
      const Stmt& multi = parent->kids[idx];
      std::vector<Stmt> parts;
      for (const auto& d : multi.decls) {
        Stmt one;
        one.kind = Stmt::Kind::DeclStmt;
        one.pos = d.pos;
        one.base = multi.base;
        one.decls.push_back(d);
        parts.push_back(std::move(one));
      }
      splice(*parent, idx, 1, std::move(parts));
      break;
    }
    case TransformKind::DeclSwap: {
      auto [parent, idx] = parent_and_index();
      std::swap(parent->kids[idx], parent->kids[idx + 1]);
      break;
    }
  }
  resolve(ast);
  return ast;
}

ChainResult apply_sequence(const Ast& ast, int k, std::span<const TransformKind> kinds, std::uint64_t seed,
                           std::string origin_id) {
  std::set<TransformKind> unique(kinds.begin(), kinds.end());
  std::vector<TransformKind> pool(unique.begin(), unique.end());
  Rng select(derive_seed(seed, "select"));
  ChainResult out{ast, TransformRecord{std::move(origin_id), {}, seed}};
  for (int step = 0; step < k; ++step) {
    std::vector<std::pair<TransformKind, std::vector<Site>>> live;
    for (auto kind : pool) {
      auto sites = applicable_sites(out.ast, kind);
      if (!sites.empty()) live.emplace_back(kind, std::move(sites));
    }
    if (live.empty()) break;
    const auto& [kind, sites] = live[select.below(live.size())];
    const Site& site = sites[select.below(sites.size())];
    std::uint64_t step_seed = derive_seed(seed, static_cast<std::uint64_t>(step));
    Rng rng(step_seed);
    out.ast = apply(out.ast, site, rng);
    out.record.steps.push_back(TransformStep{kind, site.path, step_seed});
  }
  if (out.record.steps.empty()) throw NoApplicableTransform("no transform in the requested set applies");
  return out;
}

Ast replay(const Ast& origin, const TransformRecord& record) {
  Ast ast = origin;
  for (const auto& step : record.steps) {
    Rng rng(step.seed);
    ast = apply(ast, Site{step.path, step.kind}, rng);
  }
  return ast;
}

TransformRecord compose(const TransformRecord& first, const TransformRecord& second) {
  TransformRecord out = first;
  out.steps.insert(out.steps.end(), second.steps.begin(), second.steps.end());
  return out;
}

}  // namespace codeaug
