// Abstract syntax for MiniLang candidate programs. One function per
// program; statements are assignment, array store, if/else, while and
// return; expressions are integer/boolean arithmetic with Euclidean
// div/mod, short-circuit && and ||, array indexing and len().
#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "sep/value.hpp"

namespace sep {

enum class Type { Int, Bool, IntArray, Unit };

const char* type_name(Type t);

enum class BinOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnOp { Neg, Not };

const char* binop_symbol(BinOp op);
const char* unop_symbol(UnOp op);
bool binop_is_comparison(BinOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  struct IntLit { Int value; };
  struct BoolLit { bool value; };
  struct Var { std::string name; };
  struct Unary { UnOp op; ExprPtr operand; };
  struct Binary { BinOp op; ExprPtr lhs, rhs; };
  struct Index { ExprPtr array, index; };
  struct Len { ExprPtr array; };

  using Node = std::variant<IntLit, BoolLit, Var, Unary, Binary, Index, Len>;
  Node node;
};

ExprPtr make_int(Int v);
ExprPtr make_bool(bool v);
ExprPtr make_var(std::string name);
ExprPtr make_unary(UnOp op, ExprPtr e);
ExprPtr make_binary(BinOp op, ExprPtr l, ExprPtr r);
ExprPtr make_index(ExprPtr a, ExprPtr i);
ExprPtr make_len(ExprPtr a);

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;
using Block = std::vector<StmtPtr>;

struct Stmt {
  struct Assign { std::string name; ExprPtr value; };
  struct ArrayStore { std::string array; ExprPtr index, value; };
  struct If { ExprPtr cond; Block then_body, else_body; };
  struct While { ExprPtr cond; Block body; };
  struct Return { ExprPtr value; };  // null value returns unit

  using Node = std::variant<Assign, ArrayStore, If, While, Return>;
  Node node;
};

struct Param {
  std::string name;
  Type type = Type::Int;
  friend bool operator==(const Param&, const Param&) = default;
};

struct FunctionDef {
  std::string name;
  std::vector<Param> params;
  Type return_type = Type::Int;
  Block body;
};

// A parsed candidate: stable id plus its position in the candidate pool.
struct Program {
  std::string id;
  std::string source;
  FunctionDef ast;
  int generation_index = 0;
};

bool expr_equal(const Expr& a, const Expr& b);
bool stmt_equal(const Stmt& a, const Stmt& b);
bool block_equal(const Block& a, const Block& b);
bool function_equal(const FunctionDef& a, const FunctionDef& b);

// Canonical source form; parse(print_function(f)) is structurally equal to f.
std::string print_function(const FunctionDef& f);
std::string print_expr(const Expr& e);

}  // namespace sep
