// Bounded symbolic execution of MiniLang. Maintains symbolic stores,
// forks on branches, zero divisors, symbolic array indices and
// short-circuit operators, prunes infeasible paths through a pluggable
// feasibility oracle, and enumerates (path condition, leaf outcome)
// pairs under explicit budgets. Exploration is depth-first, then-branch
// first, so output order is deterministic.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sep/ast.hpp"
#include "sep/domain.hpp"
#include "sep/symval.hpp"

namespace sep {

struct Budget {
  int max_paths = 256;
  int loop_unroll_limit = 32;
  int solver_timeout_ms = 2000;
  int64_t total_deadline_ms = 60000;
};

enum class Feasibility { Sat, Unsat, Unknown };

// Decides satisfiability of a path condition conjoined with the domain
// assumptions the oracle was built with. Unknown is treated as feasible.
using FeasibilityOracle = std::function<Feasibility(const PathCondition&)>;

struct SymOutcome {
  enum class Kind { Return, Exception, Abandoned };
  enum class AbandonReason { UnrollLimit, PathLimit, SolverTimeout };

  PathCondition pc;
  Kind kind = Kind::Return;
  std::optional<SymValue> return_value;  // nullopt: unit return
  ExceptionKind exception = ExceptionKind::DivByZero;
  AbandonReason reason = AbandonReason::UnrollLimit;
  std::map<std::string, std::vector<SymValue>> mutated_inputs;

  bool abandoned() const { return kind == Kind::Abandoned; }
};

struct SymExecResult {
  std::vector<SymOutcome> leaves;
  int abandoned_count = 0;
  int feasibility_unknowns = 0;
  bool hit_path_limit = false;
  bool hit_deadline = false;

  // No abandoned leaves and no Unknown feasibility verdicts.
  bool complete() const {
    return abandoned_count == 0 && feasibility_unknowns == 0 && !hit_deadline;
  }
};

// Explores p over the symbols in env. `assumptions` are not merged into
// leaf path conditions; they reach pruning only through the oracle,
// which must decide pc ∧ assumptions.
SymExecResult sym_execute(const Program& p, const SymbolEnv& env,
                          const PathCondition& assumptions, const Budget& budget,
                          const FeasibilityOracle& oracle);

// Concrete lengths to instantiate an array parameter with, honoring
// len() bounds in the constraints and capped at max_len. covers_domain
// is true only when the constraints bound the length from above within
// max_len, i.e. the returned list exhausts the domain's lengths.
struct LengthPlan {
  std::vector<int64_t> lengths;
  bool covers_domain = false;
};
LengthPlan array_length_strategy(const std::string& param, const DomainConstraints& constraints,
                                 int64_t max_len);

}  // namespace sep
