// Problem-domain constraints: parsing and normalization of constraint
// strings, and their injection as solver-level assumptions that prune
// symbolic paths outside the valid input domain.
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sep/ast.hpp"
#include "sep/interp.hpp"
#include "sep/parse.hpp"
#include "sep/solver.hpp"
#include "sep/symval.hpp"

namespace sep {

struct ConstraintParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownParameter : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyDomain : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainConstraints {
  std::vector<std::string> raw;
  std::vector<ExprPtr> normalized;  // binary comparisons only; no chains
};

// Parses constraint strings over the signature parameters. Chained
// comparisons are split into binary conjuncts; top-level conjunctions
// are split as well. Array parameters may appear only under len().
// Division inside constraints needs a nonzero constant divisor so every
// constraint is a total predicate.
DomainConstraints parse_constraints(const std::vector<std::string>& raw,
                                    const std::vector<Param>& params);

// Input symbols for one concrete array-length configuration: scalars map
// to symbols of their own name, arrays to one fresh element symbol per
// slot (`a__0`, `a__1`, ...).
struct SymbolEnv {
  std::map<std::string, SymValue> scalars;
  std::map<std::string, std::vector<SymValue>> arrays;
};

SymbolEnv make_symbol_env(const std::vector<Param>& params,
                          const std::map<std::string, int64_t>& array_lengths);

// The assumption conjunction seeding every sym_execute call; len(a)
// folds to the concrete length constant. Throws EmptyDomain when the
// result is literally false.
PathCondition inject_assumptions(const DomainConstraints& constraints, const SymbolEnv& env);

// One-per-problem satisfiability check of the assumptions alone.
void ensure_nonempty(const PathCondition& assumptions, SmtSession& session);

enum class PruneDecision { Keep, Drop };

// Drop iff pc ∧ assumptions is UNSAT; Unknown keeps the path.
PruneDecision prune_on_violation(const PathCondition& pc, const PathCondition& assumptions,
                                 SmtSession& session);

// Evaluates all constraints on concrete arguments (counterexample and
// public-example validation).
bool constraints_hold(const DomainConstraints& constraints, const std::vector<Param>& params,
                      const std::vector<Value>& args);

// Inclusive [lo, hi] for every scalar int parameter, when the unit
// conjuncts bound them on both sides; nullopt otherwise. Bool params are
// always finite and not listed.
std::optional<Bounds> scalar_domain_bounds(const DomainConstraints& constraints,
                                           const std::vector<Param>& params);

// Bounds on len(a) for an array parameter drawn from unit conjuncts:
// {lo, hi} with hi possibly missing.
struct LengthBounds {
  int64_t lo = 0;
  std::optional<int64_t> hi;
};
LengthBounds length_bounds(const DomainConstraints& constraints, const std::string& param);

}  // namespace sep
