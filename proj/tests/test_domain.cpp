#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle.hpp"
#include "sep/domain.hpp"
#include "sep/symexec.hpp"

using namespace sep;

namespace {
std::vector<Param> params_n() { return parse_signature("fn f(n: int) -> int").params; }
}  // namespace

TEST_CASE("chained comparison normalizes into binary conjuncts") {
  DomainConstraints c = parse_constraints({"1 <= n <= 100"}, params_n());
  REQUIRE(c.normalized.size() == 2);
  CHECK(print_expr(*c.normalized[0]) == "1 <= n");
  CHECK(print_expr(*c.normalized[1]) == "n <= 100");
  CHECK(c.raw == std::vector<std::string>{"1 <= n <= 100"});
}

TEST_CASE("plain comparison passes through; top-level && splits") {
  DomainConstraints c = parse_constraints({"x > 0"}, parse_signature("fn f(x: int) -> int").params);
  REQUIRE(c.normalized.size() == 1);
  CHECK(print_expr(*c.normalized[0]) == "x > 0");

  DomainConstraints c2 = parse_constraints(
      {"x > 0 && x < 9"}, parse_signature("fn f(x: int) -> int").params);
  CHECK(c2.normalized.size() == 2);

  // Disjunctions stay intact.
  DomainConstraints c3 = parse_constraints(
      {"x < 0 || x > 5"}, parse_signature("fn f(x: int) -> int").params);
  CHECK(c3.normalized.size() == 1);
}

TEST_CASE("element references are rejected; len() is allowed") {
  auto params = parse_signature("fn f(a: int[]) -> int").params;
  CHECK_THROWS_AS(parse_constraints({"len(a) <= 3 && a[0] >= 0"}, params), ConstraintParseError);
  DomainConstraints ok = parse_constraints({"len(a) <= 3"}, params);
  CHECK(ok.normalized.size() == 1);
}

TEST_CASE("unknown parameters and non-constant divisors are rejected") {
  CHECK_THROWS_AS(parse_constraints({"m > 0"}, params_n()), UnknownParameter);
  CHECK_THROWS_AS(parse_constraints({"n div n > 0"}, params_n()), ConstraintParseError);
  CHECK_THROWS_AS(parse_constraints({"n mod 0 == 1"}, params_n()), ConstraintParseError);
  // Constant divisor is fine.
  CHECK(parse_constraints({"n mod 2 == 0"}, params_n()).normalized.size() == 1);
}

TEST_CASE("inject_assumptions lowers constraints over the input symbols") {
  DomainConstraints c = parse_constraints({"1 <= n", "n <= 100"}, params_n());
  SymbolEnv env = make_symbol_env(params_n(), {});
  PathCondition pc = inject_assumptions(c, env);
  REQUIRE(pc.conjuncts.size() == 2);
  CHECK(term_to_string(*pc.conjuncts[0]) == "(<= 1 n)");
  CHECK(term_to_string(*pc.conjuncts[1]) == "(<= n 100)");
}

TEST_CASE("len() folds to the chosen concrete length") {
  auto params = parse_signature("fn f(a: int[]) -> int").params;
  DomainConstraints c = parse_constraints({"len(a) == 2"}, params);
  SymbolEnv env = make_symbol_env(params, {{"a", 2}});
  // 2 == 2 folds away entirely: the assumption set is empty (true).
  PathCondition pc = inject_assumptions(c, env);
  CHECK(pc.conjuncts.empty());
  // The wrong length folds to literal false and raises EmptyDomain.
  SymbolEnv env3 = make_symbol_env(params, {{"a", 3}});
  CHECK_THROWS_AS(inject_assumptions(c, env3), EmptyDomain);
}

TEST_CASE("contradictory scalar constraints surface as EmptyDomain at the solver check") {
  DomainConstraints c = parse_constraints({"n >= 1", "n <= 0"}, params_n());
  SymbolEnv env = make_symbol_env(params_n(), {});
  PathCondition pc = inject_assumptions(c, env);  // not literally false
  SmtSession session{SolverConfig{}};
  CHECK_THROWS_AS(ensure_nonempty(pc, session), EmptyDomain);

  DomainConstraints sat = parse_constraints({"n >= 1", "n <= 9"}, params_n());
  PathCondition pc2 = inject_assumptions(sat, env);
  CHECK_NOTHROW(ensure_nonempty(pc2, session));
}

TEST_CASE("prune_on_violation drops exactly the UNSAT combinations") {
  SymbolEnv env = make_symbol_env(params_n(), {});
  SymValue n = env.scalars.at("n");
  DomainConstraints c = parse_constraints({"1 <= n <= 100"}, params_n());
  PathCondition assumptions = inject_assumptions(c, env);
  SmtSession session{SolverConfig{}};

  PathCondition over;
  over.append(sv_app(SymOp::Gt, {n, sv_int(Int(100))}));
  CHECK(prune_on_violation(over, assumptions, session) == PruneDecision::Drop);

  PathCondition inside;
  inside.append(sv_app(SymOp::Gt, {n, sv_int(Int(50))}));
  CHECK(prune_on_violation(inside, assumptions, session) == PruneDecision::Keep);

  // Self-contradictory pc: n mod 2 = 0 and n mod 2 = 1 (UNSAT by
  // enumeration over the domain box).
  PathCondition parity;
  parity.append(sv_app(SymOp::Eq, {sv_app(SymOp::Mod, {n, sv_int(Int(2))}), sv_int(Int(0))}));
  parity.append(sv_app(SymOp::Eq, {sv_app(SymOp::Mod, {n, sv_int(Int(2))}), sv_int(Int(1))}));
  CHECK(prune_on_violation(parity, assumptions, session) == PruneDecision::Drop);
}

TEST_CASE("pruning soundness: no domain input loses its leaf") {
  // Loop bounded by the constrained parameter; every n in 1..8 must
  // still satisfy one kept leaf after pruning.
  Program p = test::parse_program(
      "fn f(n: int) -> int { s = 0; i = 1; while (i <= n) { s = s + i; i = i + 1; } return s; }");
  ProblemInputs inputs = test::make_inputs("fn f(n: int) -> int", {"1 <= n <= 8"});
  SymbolEnv env = make_symbol_env(inputs.signature.params, {});
  PathCondition assumptions = inject_assumptions(inputs.constraints, env);
  SmtSession session{SolverConfig{}};
  FeasibilityOracle oracle = [&](const PathCondition& pc) {
    return prune_on_violation(pc, assumptions, session) == PruneDecision::Drop
               ? Feasibility::Unsat
               : Feasibility::Sat;
  };
  Budget b;
  b.loop_unroll_limit = 32;
  SymExecResult r = sym_execute(p, env, assumptions, b, oracle);
  for (const auto& args : test::enumerate_args(inputs)) {
    std::map<std::string, Value> model{{"n", args[0]}};
    int hits = 0;
    for (const auto& leaf : r.leaves) hits += !leaf.abandoned() && pc_holds(leaf.pc, model);
    CHECK(hits == 1);
  }
}

TEST_CASE("pruning effectiveness on the loop pattern") {
  Program p = test::parse_program(
      "fn f(n: int) -> int { s = 0; i = 1; while (i <= n) { s = s + i; i = i + 1; } return s; }");
  ProblemInputs inputs = test::make_inputs("fn f(n: int) -> int", {"1 <= n <= 8"});
  SymbolEnv env = make_symbol_env(inputs.signature.params, {});
  PathCondition assumptions = inject_assumptions(inputs.constraints, env);
  SmtSession session{SolverConfig{}};
  Budget b;
  b.loop_unroll_limit = 32;

  FeasibilityOracle pruning = [&](const PathCondition& pc) {
    return prune_on_violation(pc, assumptions, session) == PruneDecision::Drop
               ? Feasibility::Unsat
               : Feasibility::Sat;
  };
  SymExecResult with = sym_execute(p, env, assumptions, b, pruning);

  FeasibilityOracle keep_all = [](const PathCondition&) { return Feasibility::Unknown; };
  SymExecResult without = sym_execute(p, env, {}, b, keep_all);

  // Feasible unroll depths are exactly n = 1..8.
  CHECK(with.leaves.size() == 8);
  CHECK(with.abandoned_count == 0);
  CHECK(without.leaves.size() > with.leaves.size());
  CHECK(without.abandoned_count >= 1);
}

TEST_CASE("constraints_hold evaluates concrete argument tuples") {
  auto params = parse_signature("fn f(n: int, a: int[]) -> int").params;
  DomainConstraints c = parse_constraints({"1 <= n <= 5", "len(a) <= 2"}, params);
  CHECK(constraints_hold(c, params, {Value(Int(3)), Value(IntArray{1})}));
  CHECK(!constraints_hold(c, params, {Value(Int(9)), Value(IntArray{1})}));
  CHECK(!constraints_hold(c, params, {Value(Int(3)), Value(IntArray{1, 2, 3})}));
}

TEST_CASE("scalar_domain_bounds and length_bounds extraction") {
  auto params = parse_signature("fn f(n: int, a: int[]) -> int").params;
  DomainConstraints c = parse_constraints({"1 <= n <= 5", "2 <= len(a)", "len(a) < 4"}, params);
  auto b = scalar_domain_bounds(c, params);
  REQUIRE(b.has_value());
  CHECK(b->at("n") == std::pair<Int, Int>{Int(1), Int(5)});
  LengthBounds lb = length_bounds(c, "a");
  CHECK(lb.lo == 2);
  REQUIRE(lb.hi.has_value());
  CHECK(*lb.hi == 3);

  DomainConstraints open = parse_constraints({"n >= 1"}, params);
  CHECK(!scalar_domain_bounds(open, params).has_value());
}
