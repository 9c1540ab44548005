#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "sep/solver.hpp"
#include "sep/symexec.hpp"

using namespace sep;

namespace {

// Feasibility through the enumerative backend, sound UNSAT only when the
// path carries its own bounds (plus the fixed assumption set).
FeasibilityOracle make_oracle(const PathCondition& assumptions, SmtSession& session) {
  return [&assumptions, &session](const PathCondition& pc) {
    std::vector<SymValue> asserts = assumptions.conjuncts;
    asserts.insert(asserts.end(), pc.conjuncts.begin(), pc.conjuncts.end());
    if (asserts.empty()) return Feasibility::Sat;
    SolverVerdict v = session.check_auto(make_query(std::move(asserts), 2000));
    if (v.sat()) return Feasibility::Sat;
    if (v.unsat()) return Feasibility::Unsat;
    return Feasibility::Unknown;
  };
}

FeasibilityOracle keep_everything() {
  return [](const PathCondition&) { return Feasibility::Unknown; };
}

SymbolEnv scalar_env(const std::vector<Param>& params) {
  return make_symbol_env(params, {});
}

int non_abandoned(const SymExecResult& r) {
  return (int)r.leaves.size() - r.abandoned_count;
}

}  // namespace

TEST_CASE("straight-line code yields one leaf with an empty pc") {
  Program p = test::parse_program("fn f(x: int) -> int { return x; }");
  SymbolEnv env = scalar_env(p.ast.params);
  SymExecResult r = sym_execute(p, env, {}, Budget{}, keep_everything());
  REQUIRE(r.leaves.size() == 1);
  CHECK(r.leaves[0].pc.conjuncts.empty());
  CHECK(r.leaves[0].kind == SymOutcome::Kind::Return);
  REQUIRE(r.leaves[0].return_value.has_value());
  CHECK(term_to_string(**r.leaves[0].return_value) == "x");
  CHECK(r.complete());
}

TEST_CASE("single branch yields two leaves with complementary pcs") {
  Program p = test::parse_program(
      "fn f(x: int) -> int { if (x > 0) { return 1; } else { return 0; } }");
  SymbolEnv env = scalar_env(p.ast.params);
  SymExecResult r = sym_execute(p, env, {}, Budget{}, keep_everything());
  REQUIRE(r.leaves.size() == 2);
  CHECK(term_to_string(*r.leaves[0].pc.conjuncts.at(0)) == "(> x 0)");
  CHECK(term_to_string(*r.leaves[1].pc.conjuncts.at(0)) == "(not (> x 0))");
}

TEST_CASE("bounded loop under 1<=n<=3: exactly the three unroll depths") {
  // Hand enumeration: the loop body runs n times; under the assumption
  // the feasible exits are n=1,2,3, so three Return leaves and nothing
  // abandoned at unroll limit 8.
  Program p = test::parse_program(
      "fn f(n: int) -> int { i = 0; while (i < n) { i = i + 1; } return i; }");
  SymbolEnv env = scalar_env(p.ast.params);
  PathCondition assumptions;
  assumptions.append(sv_app(SymOp::Le, {sv_int(Int(1)), env.scalars.at("n")}));
  assumptions.append(sv_app(SymOp::Le, {env.scalars.at("n"), sv_int(Int(3))}));
  SmtSession session{SolverConfig{}};
  Budget budget;
  budget.loop_unroll_limit = 8;
  SymExecResult r = sym_execute(p, env, assumptions, budget, make_oracle(assumptions, session));
  CHECK(r.leaves.size() == 3);
  CHECK(r.abandoned_count == 0);
  CHECK(r.complete());

  // Cross-check against the interpreter over the whole domain: each
  // concrete n must satisfy exactly one leaf pc and match its outcome.
  for (int n = 1; n <= 3; ++n) {
    std::map<std::string, Value> model{{"n", Value(Int(n))}};
    int hits = 0;
    for (const auto& leaf : r.leaves) {
      if (!pc_holds(leaf.pc, model)) continue;
      ++hits;
      ExecutionOutcome concrete = interpret(p, {Value(Int(n))}, 100000);
      REQUIRE(leaf.return_value.has_value());
      CHECK(eval_term(**leaf.return_value, model) == concrete.return_value);
    }
    CHECK(hits == 1);
  }
}

TEST_CASE("chain of k independent branches explodes to 2^k paths") {
  Program p = test::parse_program(
      "fn f(x: int, y: int) -> int {"
      "  s = 0;"
      "  if (x > 0) { s = s + 1; }"
      "  if (y > 0) { s = s + 2; }"
      "  if (x + y > 0) { s = s + 4; }"
      "  return s;"
      "}");
  SymbolEnv env = scalar_env(p.ast.params);
  SymExecResult r = sym_execute(p, env, {}, Budget{}, keep_everything());
  CHECK(r.leaves.size() == 8);
}

TEST_CASE("divisor forking: zero branch becomes an exception leaf") {
  Program p = test::parse_program("fn f(x: int) -> int { return 10 div x; }");
  SymbolEnv env = scalar_env(p.ast.params);
  SymExecResult r = sym_execute(p, env, {}, Budget{}, keep_everything());
  REQUIRE(r.leaves.size() == 2);
  CHECK(r.leaves[0].kind == SymOutcome::Kind::Exception);
  CHECK(r.leaves[0].exception == ExceptionKind::DivByZero);
  CHECK(r.leaves[1].kind == SymOutcome::Kind::Return);
}

TEST_CASE("short-circuit operators fork instead of evaluating eagerly") {
  // With a pruning oracle, the guarded division never produces a
  // DivByZero leaf: the x = 0 case short-circuits before the division.
  Program p = test::parse_program(
      "fn f(x: int) -> int { if (x != 0 && 10 div x > 1) { return 1; } return 0; }");
  SymbolEnv env = scalar_env(p.ast.params);
  PathCondition assumptions;
  assumptions.append(sv_app(SymOp::Ge, {env.scalars.at("x"), sv_int(Int(-20))}));
  assumptions.append(sv_app(SymOp::Le, {env.scalars.at("x"), sv_int(Int(20))}));
  SmtSession session{SolverConfig{}};
  SymExecResult r = sym_execute(p, env, assumptions, Budget{}, make_oracle(assumptions, session));
  for (const auto& leaf : r.leaves) CHECK(leaf.kind != SymOutcome::Kind::Exception);
  // x=0 short-circuit path, div>1 path, and div<=1 path at least.
  CHECK(non_abandoned(r) >= 3);
  CHECK(r.complete());
}

TEST_CASE("symbolic array index forks per slot plus out-of-bounds") {
  Program p = test::parse_program("fn f(a: int[], i: int) -> int { return a[i]; }");
  SymbolEnv env = make_symbol_env(p.ast.params, {{"a", 3}});
  SymExecResult r = sym_execute(p, env, {}, Budget{}, keep_everything());
  REQUIRE(r.leaves.size() == 4);  // slots 0..2 + OOB
  int oob = 0;
  for (const auto& leaf : r.leaves)
    oob += leaf.kind == SymOutcome::Kind::Exception &&
           leaf.exception == ExceptionKind::IndexOutOfBounds;
  CHECK(oob == 1);
  // Mutated inputs carry the (unchanged) element terms for `a`.
  for (const auto& leaf : r.leaves) {
    REQUIRE(leaf.mutated_inputs.count("a"));
    CHECK(leaf.mutated_inputs.at("a").size() == 3);
  }
}

TEST_CASE("array store updates the symbolic array state") {
  Program p = test::parse_program("fn f(a: int[]) -> unit { a[0] = a[0] + 1; return; }");
  SymbolEnv env = make_symbol_env(p.ast.params, {{"a", 2}});
  SymExecResult r = sym_execute(p, env, {}, Budget{}, keep_everything());
  REQUIRE(r.leaves.size() == 1);
  CHECK(term_to_string(*r.leaves[0].mutated_inputs.at("a")[0]) == "(+ a__0 1)");
  CHECK(term_to_string(*r.leaves[0].mutated_inputs.at("a")[1]) == "a__1");
}

TEST_CASE("unroll limit abandons only the runaway path") {
  Program p = test::parse_program(
      "fn f(n: int) -> int { i = 0; while (i < n) { i = i + 1; } return i; }");
  SymbolEnv env = scalar_env(p.ast.params);
  Budget budget;
  budget.loop_unroll_limit = 4;
  SymExecResult r = sym_execute(p, env, {}, Budget{budget.max_paths, 4, 2000, 60000},
                                keep_everything());
  // Exits at i = 0..4 plus one abandoned continuation.
  CHECK(non_abandoned(r) == 5);
  CHECK(r.abandoned_count == 1);
  int unroll_hits = 0;
  for (const auto& leaf : r.leaves)
    unroll_hits += leaf.abandoned() && leaf.reason == SymOutcome::AbandonReason::UnrollLimit;
  CHECK(unroll_hits == 1);
  CHECK(!r.complete());
}

TEST_CASE("path limit caps exploration deterministically") {
  Program p = test::parse_program(
      "fn f(x: int, y: int) -> int {"
      "  s = 0;"
      "  if (x > 0) { s = s + 1; }"
      "  if (y > 0) { s = s + 2; }"
      "  if (x + y > 0) { s = s + 4; }"
      "  return s;"
      "}");
  SymbolEnv env = scalar_env(p.ast.params);
  Budget budget;
  budget.max_paths = 3;
  SymExecResult r = sym_execute(p, env, {}, budget, keep_everything());
  CHECK(r.hit_path_limit);
  CHECK(r.leaves.size() == 4);  // three returns then the PathLimit marker
  CHECK(r.leaves.back().abandoned());
  CHECK(r.leaves.back().reason == SymOutcome::AbandonReason::PathLimit);
}

TEST_CASE("infeasible branches are pruned through the oracle") {
  Program p = test::parse_program(
      "fn f(x: int) -> int { if (x > 10) { return 1; } return 0; }");
  SymbolEnv env = scalar_env(p.ast.params);
  PathCondition assumptions;
  assumptions.append(sv_app(SymOp::Ge, {env.scalars.at("x"), sv_int(Int(0))}));
  assumptions.append(sv_app(SymOp::Le, {env.scalars.at("x"), sv_int(Int(5))}));
  SmtSession session{SolverConfig{}};
  SymExecResult r = sym_execute(p, env, assumptions, Budget{}, make_oracle(assumptions, session));
  REQUIRE(r.leaves.size() == 1);  // x > 10 is outside the domain
  REQUIRE(r.leaves[0].return_value.has_value());
  CHECK(term_to_string(**r.leaves[0].return_value) == "0");
}

TEST_CASE("leaf soundness on randomized programs") {
  // For every non-abandoned leaf, a model of its pc must reproduce the
  // leaf outcome through the interpreter.
  std::mt19937_64 rng(987654);
  SolverConfig scfg;
  int leaves_checked = 0;
  for (int iter = 0; iter < 40; ++iter) {
    Program p = test::random_program(rng);
    SymbolEnv env = scalar_env(p.ast.params);
    PathCondition assumptions;
    assumptions.append(sv_app(SymOp::Ge, {env.scalars.at("x"), sv_int(Int(-6))}));
    assumptions.append(sv_app(SymOp::Le, {env.scalars.at("x"), sv_int(Int(6))}));
    assumptions.append(sv_app(SymOp::Ge, {env.scalars.at("y"), sv_int(Int(-6))}));
    assumptions.append(sv_app(SymOp::Le, {env.scalars.at("y"), sv_int(Int(6))}));
    SmtSession session{scfg};
    SymExecResult r = sym_execute(p, env, assumptions, Budget{}, make_oracle(assumptions, session));
    for (const auto& leaf : r.leaves) {
      if (leaf.abandoned()) continue;
      std::vector<SymValue> asserts = assumptions.conjuncts;
      asserts.insert(asserts.end(), leaf.pc.conjuncts.begin(), leaf.pc.conjuncts.end());
      SolverVerdict v = SmtSession{scfg}.check_auto(make_query(asserts, 2000));
      if (!v.sat()) continue;
      std::map<std::string, Value> model = v.model;
      if (!model.count("x")) model["x"] = Value(Int(0));
      if (!model.count("y")) model["y"] = Value(Int(0));
      ExecutionOutcome concrete =
          interpret(p, {model.at("x"), model.at("y")}, 1000000);
      ++leaves_checked;
      if (leaf.kind == SymOutcome::Kind::Exception) {
        REQUIRE(concrete.kind == ExecutionOutcome::Kind::Exception);
        CHECK(concrete.exception == leaf.exception);
      } else {
        REQUIRE(concrete.kind == ExecutionOutcome::Kind::Return);
        if (leaf.return_value.has_value())
          CHECK(eval_term(**leaf.return_value, model) == concrete.return_value);
        else
          CHECK(concrete.return_value.is_unit());
      }
    }
  }
  CHECK(leaves_checked > 100);
}

TEST_CASE("coverage: every domain point satisfies exactly one leaf pc") {
  Program p = test::parse_program(
      "fn f(x: int, y: int) -> int {"
      "  if (x > y) { return x - y; }"
      "  if (x == y) { return 0; }"
      "  return y - x;"
      "}");
  SymbolEnv env = scalar_env(p.ast.params);
  SymExecResult r = sym_execute(p, env, {}, Budget{}, keep_everything());
  for (int x = -4; x <= 4; ++x) {
    for (int y = -4; y <= 4; ++y) {
      std::map<std::string, Value> model{{"x", Value(Int(x))}, {"y", Value(Int(y))}};
      int hits = 0;
      for (const auto& leaf : r.leaves) hits += pc_holds(leaf.pc, model);
      CHECK(hits == 1);
    }
  }
}

TEST_CASE("array_length_strategy honors bounds, defaults and empty domains") {
  auto params = parse_signature("fn f(a: int[], n: int) -> int").params;
  DomainConstraints c1 = parse_constraints({"1 <= len(a) <= 3"}, params);
  LengthPlan p1 = array_length_strategy("a", c1, 4);
  CHECK(p1.lengths == std::vector<int64_t>{1, 2, 3});
  CHECK(p1.covers_domain);

  DomainConstraints c2 = parse_constraints({}, params);
  LengthPlan p2 = array_length_strategy("a", c2, 2);
  CHECK(p2.lengths == std::vector<int64_t>{0, 1, 2});
  CHECK(!p2.covers_domain);

  DomainConstraints c3 = parse_constraints({"len(a) == 5"}, params);
  CHECK_THROWS_AS(array_length_strategy("a", c3, 4), EmptyDomain);
}
