// Symbolic terms over the input symbols of one problem, and the path
// conditions accumulated while exploring a candidate. Terms are pure:
// exceptional cases (zero divisors, out-of-range indices) are forked
// into separate paths before a term is ever built, so every term can be
// evaluated totally under any model of its path condition.
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "sep/ast.hpp"
#include "sep/value.hpp"

namespace sep {

enum class SymOp {
  Add, Sub, Mul, Div, Mod,
  Eq, Ne, Lt, Le, Gt, Ge,
  And, Or, Neg, Not,
};

SymOp sym_op_of(BinOp op);
SymOp sym_op_of(UnOp op);
const char* sym_op_name(SymOp op);

struct SymTerm;
using SymValue = std::shared_ptr<const SymTerm>;

struct SymTerm {
  struct Const { Value value; };            // Int or Bool
  struct Sym { std::string name; Type type; };
  struct App { SymOp op; std::vector<SymValue> args; };

  std::variant<Const, Sym, App> node;
  Type type = Type::Int;

  bool is_const() const { return std::holds_alternative<Const>(node); }
  const Value& const_value() const { return std::get<Const>(node).value; }
};

SymValue sv_const(Value v);
SymValue sv_int(Int v);
SymValue sv_bool(bool v);
SymValue sv_sym(std::string name, Type type);
// Builds an application with constant folding. Div/Mod require the
// divisor to be provably nonzero (constant zero divisors are forked into
// exception paths before this is called).
SymValue sv_app(SymOp op, std::vector<SymValue> args);
SymValue sv_not(SymValue a);

std::string term_to_string(const SymTerm& t);

// Structural equality (cheap pointer check first).
bool term_equal(const SymValue& a, const SymValue& b);

// Evaluates a term under a full assignment of its symbols.
Value eval_term(const SymTerm& t, const std::map<std::string, Value>& model);

void collect_symbols(const SymTerm& t, std::map<std::string, Type>& out);

// Conjunction of branch predicates, in accumulation order.
struct PathCondition {
  std::vector<SymValue> conjuncts;

  // Skips literal `true`; keeps everything else, including literal `false`.
  void append(SymValue c);
  bool is_literally_false() const;
  PathCondition with(SymValue c) const;
  std::map<std::string, Type> symbols() const;
  std::string to_string() const;
};

// Evaluates pc under a model: true iff every conjunct holds.
bool pc_holds(const PathCondition& pc, const std::map<std::string, Value>& model);

}  // namespace sep
