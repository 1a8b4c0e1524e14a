#pragma once

#include <string>

#include "codeaug/frontend/ast.hpp"
#include "codeaug/frontend/parser.hpp"

namespace codeaug {

/// Canonical formatting: one statement per line, four-space indentation,
/// braces on every body unless the body is flagged as elided and eliding is
/// unambiguous.
std::string print_program(const Ast& ast);
SourceUnit pretty_print(const Ast& ast);

std::string print_expr(const Expr& e);

/// True when printing `body` without braces is well-formed: a single
/// statement that is neither a declaration nor a block.
bool can_elide(const Stmt& body);

/// True when `s`, printed with elided bodies, ends in an `if` lacking an
/// `else`, so a following `else` would bind to it.
bool ends_with_open_if(const Stmt& s);

}  // namespace codeaug
