#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "codeaug/frontend/ast.hpp"
#include "codeaug/util/rng.hpp"

namespace codeaug {

enum class TransformKind {
  ForToWhile,
  WhileToFor,
  IfElseSwap,
  IoCToCpp,
  IoCppToC,
  UnusedDecl,
  BraceToggle,
  ReturnNormalize,
  DeclMerge,
  DeclSplit,
  DeclSwap,
};

enum class TransformFamily { Control, Api, Declaration };

inline constexpr TransformKind kAllTransformKinds[] = {
    TransformKind::ForToWhile,  TransformKind::WhileToFor,      TransformKind::IfElseSwap,
    TransformKind::IoCToCpp,    TransformKind::IoCppToC,        TransformKind::UnusedDecl,
    TransformKind::BraceToggle, TransformKind::ReturnNormalize, TransformKind::DeclMerge,
    TransformKind::DeclSplit,   TransformKind::DeclSwap,
};

TransformFamily family_of(TransformKind k);
std::string_view kind_name(TransformKind k);  // snake_case, e.g. "for_to_while"
std::string_view family_name(TransformFamily f);
std::optional<TransformKind> parse_kind(std::string_view name);

/// Parses a comma-separated list of kind names or family names
/// ("control", "api", "declaration"); "all" selects every kind.
std::vector<TransformKind> parse_kind_list(std::string_view list);

/// A node address: path[0] indexes the function, the remaining entries index
/// child statements starting at the function body (Block statements, If
/// then/else, loop bodies).
struct Site {
  std::vector<int> path;
  TransformKind kind = TransformKind::ForToWhile;

  bool operator==(const Site&) const = default;
};

struct TransformStep {
  TransformKind kind = TransformKind::ForToWhile;
  std::vector<int> path;
  std::uint64_t seed = 0;  // seeds the generator handed to apply()

  bool operator==(const TransformStep&) const = default;
};

struct TransformRecord {
  std::string origin_id;
  std::vector<TransformStep> steps;
  std::uint64_t seed = 0;
};

/// Every site where `kind` can fire, in pre-order.
std::vector<Site> applicable_sites(const Ast& ast, TransformKind kind);

/// Applies one rewrite. Random choices (fresh names, insertion position,
/// merge arity) come from `rng` only. Throws InapplicableSite when `site` is
/// not in applicable_sites(ast, site.kind).
Ast apply(const Ast& ast, const Site& site, Rng& rng);

struct ChainResult {
  Ast ast;
  TransformRecord record;
};

/// Applies up to `k` random rewrites drawn from `kinds`: each step picks an
/// applicable kind uniformly, then one of its sites uniformly. Stops early
/// (shorter record) when nothing applies; throws NoApplicableTransform when
/// no step fires at all.
ChainResult apply_sequence(const Ast& ast, int k, std::span<const TransformKind> kinds, std::uint64_t seed,
                           std::string origin_id = {});

/// Re-applies the steps of `record` to `origin`.
Ast replay(const Ast& origin, const TransformRecord& record);

/// Concatenates two records: `second` continues from where `first` ended.
TransformRecord compose(const TransformRecord& first, const TransformRecord& second);

}  // namespace codeaug
