#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace codeaug {

struct SourcePos {
  int line = 0;
  int col = 0;
};

/// Static type of an expression or declaration. `String` only ever types a
/// string literal; arrays are tracked on the declaration, not here.
enum class Type { Void, Int, Double, Char, String };

const char* type_name(Type t);

struct Expr {
  enum class Kind {
    IntLit,
    FloatLit,
    CharLit,
    StringLit,
    Ident,
    Index,   // args[0] is the array identifier, args[1] the subscript
    Call,    // text holds the callee name
    Unary,   // text holds the operator; "++"/"--" with postfix flag
    Binary,  // text holds the operator; args[0] op args[1]
    Assign,  // text holds "=", "+=", ...; args[0] is an lvalue
    AddrOf,  // only as a scanf argument
  };

  Kind kind = Kind::IntLit;
  std::string text;  // identifier, operator, float spelling, or decoded string
  std::int64_t int_value = 0;
  double float_value = 0.0;
  bool postfix = false;
  std::vector<Expr> args;
  SourcePos pos;
  Type type = Type::Void;  // filled by the resolver

  static Expr int_lit(std::int64_t v);
  static Expr float_lit(double v, std::string spelling);
  static Expr char_lit(char c);
  static Expr string_lit(std::string s);
  static Expr ident(std::string name);
  static Expr unary(std::string op, Expr operand);
  static Expr binary(std::string op, Expr lhs, Expr rhs);
};

struct Decl {
  std::string name;
  std::optional<std::int64_t> extent;  // positive for 1-D arrays
  std::optional<Expr> init;
  SourcePos pos;
};

/// One formatted-IO element. Text items are literal output bytes; value items
/// carry the expression and the printf/scanf conversion character.
struct IoItem {
  enum class Kind { Text, Value };
  Kind kind = Kind::Text;
  std::string text;
  bool endl = false;  // stream form spelled as `endl`
  std::optional<Expr> value;
  char spec = 'd';  // d, f, c, s
};

enum class IoDirection { Write, Read };
enum class IoStyle { C, Cpp };

struct Stmt {
  enum class Kind { Block, If, While, For, Return, ExprStmt, DeclStmt, Io, Break, Continue };

  Kind kind = Kind::Block;
  SourcePos pos;

  // Child statements addressed by site paths. Block: the statement list.
  // If: [then, else?]. While/For: [body]. Bodies are always Blocks.
  std::vector<Stmt> kids;

  // If/While/For condition, Return value, ExprStmt expression.
  std::optional<Expr> expr;

  // For only: optional init statement (DeclStmt or ExprStmt) and step.
  std::vector<Stmt> init;
  std::optional<Expr> step;

  // DeclStmt.
  Type base = Type::Int;
  std::vector<Decl> decls;

  // Io.
  IoDirection io_dir = IoDirection::Write;
  IoStyle io_style = IoStyle::C;
  std::vector<IoItem> io;

  // Block only: printed without braces when it is a body holding a single
  // non-declaration statement.
  bool elided = false;

  static Stmt block(std::vector<Stmt> stmts);
  static Stmt expr_stmt(Expr e);
  static Stmt ret(std::optional<Expr> e);
};

struct Param {
  Type type = Type::Int;
  std::string name;
};

struct FunctionDecl {
  Type ret = Type::Int;
  std::string name;
  std::vector<Param> params;
  Stmt body;  // Block
  SourcePos pos;
};

struct Ast {
  std::vector<std::string> includes;  // header names, e.g. "stdio.h"
  bool using_std = false;
  std::vector<Stmt> globals;  // DeclStmts
  std::vector<FunctionDecl> functions;

  const FunctionDecl* find_function(const std::string& name) const;
};

/// Structural equality: ignores source positions, resolved types, literal
/// spellings and brace elision.
bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const Stmt& a, const Stmt& b);
bool structurally_equal(const Ast& a, const Ast& b);

/// Every identifier spelled anywhere in the program (variables, parameters,
/// functions).
std::vector<std::string> collect_identifiers(const Ast& ast);

}  // namespace codeaug
