// Concrete MiniLang interpreter. Deterministic, fuel-bounded; the single
// source of truth for language semantics (the symbolic engine mirrors it
// term by term).
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sep/ast.hpp"
#include "sep/value.hpp"

namespace sep {

// Caller-side bug: args do not fit the signature. Distinct from
// in-language exceptions, which are ExecutionOutcomes.
struct TypeMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runs p on args. Every statement and expression node evaluation costs
// one unit of fuel; when it runs out the outcome is ResourceExhausted.
ExecutionOutcome interpret(const Program& p, const std::vector<Value>& args, int64_t fuel);

// Thrown by eval_expr on in-language failures (div by zero, ...).
struct EvalException {
  ExceptionKind kind;
};

// Evaluates one expression over concrete values (used for constraint
// checks and solver-model validation). Short-circuit && and ||.
Value eval_expr(const Expr& e, const std::map<std::string, Value>& env);

}  // namespace sep
