// Bounded functional-equivalence checking of two candidates under the
// problem's domain constraints. Both programs are explored symbolically
// over one shared set of input symbols; for every compatible pair of
// leaves the disequality of their outcomes is put to the solver, and the
// first satisfying model becomes a validated counterexample. No
// counterexample within budget means the pair is treated as equivalent.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sep/domain.hpp"
#include "sep/interp.hpp"
#include "sep/solver.hpp"
#include "sep/symexec.hpp"

namespace sep {

struct TestCase {
  std::vector<Value> args;
  ExecutionOutcome expected;
};

// The selector-visible part of a problem. Hidden tests live only in the
// harness layer, so selectors cannot read them by construction.
struct ProblemInputs {
  std::string id;
  FunctionDef signature;  // header only; body empty
  DomainConstraints constraints;
  std::vector<TestCase> public_examples;
};

struct EquivVerdict {
  enum class Kind { Distinct, NotDistinguished };
  Kind kind = Kind::NotDistinguished;

  // Distinct: a domain-valid input on which concrete outcomes differ,
  // re-validated through the interpreter before being returned.
  std::map<std::string, Value> counterexample;
  ExecutionOutcome outcome_i, outcome_j;

  // NotDistinguished accounting.
  bool exhaustive = false;
  int abandoned_paths = 0;

  bool distinct() const { return kind == Kind::Distinct; }
};

struct PairCheckResult {
  EquivVerdict verdict;
  double wall_ms = 0.0;
  uint64_t smt_queries = 0;
};

// Searches for an input in Dom(constraints) on which p_i and p_j
// disagree. Array parameters are instantiated per concrete length from
// array_length_strategy; max_array_len caps that enumeration.
PairCheckResult check_divergence(const Program& p_i, const Program& p_j,
                                 const ProblemInputs& spec, const Budget& budget,
                                 const SolverConfig& solver_cfg, int64_t max_array_len = 4);

struct PublicRunResult {
  bool pass = true;
  int first_failure = -1;  // example index when !pass
};

// Runs the public examples through the interpreter; exceptions and
// ResourceExhausted count as failures unless expected.
PublicRunResult run_public_examples(const Program& p, const ProblemInputs& spec, int64_t fuel);

}  // namespace sep
