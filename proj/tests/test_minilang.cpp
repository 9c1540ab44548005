#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "sep/interp.hpp"
#include "sep/parse.hpp"

using namespace sep;

TEST_CASE("parse identity function") {
  Program p = parse("fn f(x: int) -> int { return x; }");
  CHECK(p.ast.name == "f");
  REQUIRE(p.ast.params.size() == 1);
  CHECK(p.ast.params[0].name == "x");
  CHECK(p.ast.params[0].type == Type::Int);
  REQUIRE(p.ast.body.size() == 1);
  const auto* ret = std::get_if<Stmt::Return>(&p.ast.body[0]->node);
  REQUIRE(ret != nullptr);
  CHECK(std::holds_alternative<Expr::Var>(ret->value->node));
}

TEST_CASE("parse error carries position and expected set") {
  try {
    parse("fn f(x: int) -> int { return x + ; }");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.column == 34);  // the `;`
    CHECK(!e.expected.empty());
  }
}

TEST_CASE("parse rejects duplicate function definitions") {
  CHECK_THROWS_WITH_AS(parse("fn f(x: int) -> int { return x; } fn g(x: int) -> int { return x; }"),
                       doctest::Contains("duplicate function"), ParseError);
}

TEST_CASE("parse rejects unknown identifiers and type errors") {
  CHECK_THROWS_AS(parse("fn f(x: int) -> int { return z; }"), ParseError);
  CHECK_THROWS_AS(parse("fn f(x: int) -> int { return x && true; }"), ParseError);
  CHECK_THROWS_AS(parse("fn f(x: int, x: int) -> int { return x; }"), ParseError);
  CHECK_THROWS_AS(parse("fn f(b: bool) -> int { return b + 1; }"), ParseError);
  // Use before definite assignment on one arm.
  CHECK_THROWS_AS(parse("fn f(x: int) -> int { if (x > 0) { t = 1; } return t; }"), ParseError);
  // Chained comparisons belong to the constraint grammar only.
  CHECK_THROWS_AS(parse("fn f(x: int) -> bool { return 1 <= x <= 5; }"), ParseError);
}

TEST_CASE("array mutation program round-trips through the printer") {
  const char* src = "fn f(a: int[]) -> int { a[0] = 1; return a[0]; }";
  Program p = parse(src);
  REQUIRE(p.ast.body.size() == 2);
  CHECK(std::holds_alternative<Stmt::ArrayStore>(p.ast.body[0]->node));
  Program again = parse(print_function(p.ast));
  CHECK(function_equal(p.ast, again.ast));
}

TEST_CASE("pretty-print / parse round trip on randomized programs") {
  std::mt19937_64 rng(20260810);
  for (int i = 0; i < 200; ++i) {
    Program p = sep::test::random_program(rng);
    Program q = parse(print_function(p.ast));
    CHECK(function_equal(p.ast, q.ast));
    // And printing is a fixed point once canonical.
    CHECK(print_function(p.ast) == print_function(q.ast));
  }
}

TEST_CASE("interpret: identity and exceptions") {
  Program ident = parse("fn f(x: int) -> int { return x; }");
  ExecutionOutcome o = interpret(ident, {Value(Int(7))}, 1000);
  CHECK(o.kind == ExecutionOutcome::Kind::Return);
  CHECK(o.return_value == Value(Int(7)));

  Program div = parse("fn f(x: int) -> int { return 1 div x; }");
  ExecutionOutcome d = interpret(div, {Value(Int(0))}, 1000);
  CHECK(d.kind == ExecutionOutcome::Kind::Exception);
  CHECK(d.exception == ExceptionKind::DivByZero);

  Program mod = parse("fn f(x: int) -> int { return 1 mod x; }");
  CHECK(interpret(mod, {Value(Int(0))}, 1000).exception == ExceptionKind::ModByZero);

  Program idx = parse("fn f(a: int[]) -> int { return a[5]; }");
  ExecutionOutcome e = interpret(idx, {Value(IntArray{1, 2})}, 1000);
  CHECK(e.exception == ExceptionKind::IndexOutOfBounds);
}

TEST_CASE("interpret: loop sum hand trace") {
  // s accumulates 1+2+3+4 = 10 for n=4 (hand-evaluated trace).
  Program p = parse(
      "fn f(n: int) -> int {"
      "  s = 0; i = 1;"
      "  while (i <= n) { s = s + i; i = i + 1; }"
      "  return s;"
      "}");
  ExecutionOutcome o = interpret(p, {Value(Int(4))}, 10000);
  CHECK(o.return_value == Value(Int(10)));
  CHECK(interpret(p, {Value(Int(1))}, 10000).return_value == Value(Int(1)));
}

TEST_CASE("interpret: fuel exhaustion and monotonicity") {
  Program spin = parse("fn f(n: int) -> int { while (true) { n = n + 1; } return n; }");
  CHECK(interpret(spin, {Value(Int(0))}, 500).kind == ExecutionOutcome::Kind::ResourceExhausted);

  Program p = parse("fn f(n: int) -> int { s = 0; i = 0; while (i < n) { s = s + i; i = i + 1; } return s; }");
  // Find the minimal fuel that completes, then every larger fuel must
  // produce the identical outcome.
  int64_t f_min = 1;
  while (interpret(p, {Value(Int(6))}, f_min).kind == ExecutionOutcome::Kind::ResourceExhausted)
    ++f_min;
  ExecutionOutcome base = interpret(p, {Value(Int(6))}, f_min);
  for (int64_t extra : {1, 2, 10, 1000})
    CHECK(outcomes_equal(base, interpret(p, {Value(Int(6))}, f_min + extra)));
}

TEST_CASE("interpret: mutation shows up in the outcome") {
  Program p = parse("fn f(a: int[]) -> unit { a[1] = 3; return; }");
  ExecutionOutcome o = interpret(p, {Value(IntArray{1, 2})}, 1000);
  CHECK(o.kind == ExecutionOutcome::Kind::Return);
  CHECK(o.return_value.is_unit());
  REQUIRE(o.mutated_inputs.count("a"));
  CHECK(o.mutated_inputs.at("a") == Value(IntArray{1, 3}));
}

TEST_CASE("interpret rejects arity and type mismatches") {
  Program p = parse("fn f(x: int) -> int { return x; }");
  CHECK_THROWS_AS(interpret(p, {}, 100), TypeMismatchError);
  CHECK_THROWS_AS(interpret(p, {Value(true)}, 100), TypeMismatchError);
}

TEST_CASE("outcomes_equal semantics") {
  auto r3 = ExecutionOutcome::ret(Value(Int(3)));
  auto r3b = ExecutionOutcome::ret(Value(Int(3)));
  CHECK(outcomes_equal(r3, r3b));
  CHECK(!outcomes_equal(r3, ExecutionOutcome::exc(ExceptionKind::DivByZero)));
  // Mutations are part of the outcome.
  auto m1 = ExecutionOutcome::ret(Value::unit(), {{"a", Value(IntArray{1, 2})}});
  auto m2 = ExecutionOutcome::ret(Value::unit(), {{"a", Value(IntArray{1, 3})}});
  CHECK(!outcomes_equal(m1, m2));
  // ResourceExhausted equals only itself.
  CHECK(outcomes_equal(ExecutionOutcome::exhausted(), ExecutionOutcome::exhausted()));
  CHECK(!outcomes_equal(ExecutionOutcome::exhausted(), r3));
}

TEST_CASE("euclidean div/mod: remainder is non-negative and reconstructs") {
  for (int a = -20; a <= 20; ++a) {
    for (int b = -7; b <= 7; ++b) {
      if (b == 0) continue;
      Int q = euclid_div(Int(a), Int(b));
      Int r = euclid_mod(Int(a), Int(b));
      CHECK(r >= 0);
      CHECK(r < Int(std::abs(b)));
      CHECK(Int(a) == Int(b) * q + r);
    }
  }
  // Spot values fixed by the SMT-LIB Int theory.
  CHECK(euclid_div(Int(-7), Int(2)) == Int(-4));
  CHECK(euclid_mod(Int(-7), Int(2)) == Int(1));
  CHECK(euclid_div(Int(7), Int(-2)) == Int(-3));
  CHECK(euclid_mod(Int(7), Int(-2)) == Int(1));
}

TEST_CASE("determinism: repeated interpretation is identical") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    Program p = sep::test::random_program(rng);
    std::vector<Value> args = {Value(Int(3)), Value(Int(-2))};
    ExecutionOutcome a = interpret(p, args, 10000);
    ExecutionOutcome b = interpret(p, args, 10000);
    CHECK(outcomes_equal(a, b));
  }
}
