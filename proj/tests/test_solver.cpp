#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "sep/solver.hpp"

using namespace sep;

namespace {

SymValue sym_x() { return sv_sym("x", Type::Int); }
SymValue sym_y() { return sv_sym("y", Type::Int); }
SymValue lt(SymValue a, SymValue b) { return sv_app(SymOp::Lt, {a, b}); }
SymValue le(SymValue a, SymValue b) { return sv_app(SymOp::Le, {a, b}); }
SymValue gt(SymValue a, SymValue b) { return sv_app(SymOp::Gt, {a, b}); }
SymValue ge(SymValue a, SymValue b) { return sv_app(SymOp::Ge, {a, b}); }
SymValue eq(SymValue a, SymValue b) { return sv_app(SymOp::Eq, {a, b}); }

SolverConfig minismt_config() {
  SolverConfig cfg;
  cfg.external_cmd = MINISMT_PATH;
  cfg.timeout_ms = 5000;
  return cfg;
}

}  // namespace

TEST_CASE("emit_smtlib basic shape and byte stability") {
  SolverQuery q = make_query({eq(sym_x(), sv_int(Int(0)))}, 1500);
  std::string s = emit_smtlib(q);
  CHECK(s.find("(set-logic QF_LIA)") != std::string::npos);
  CHECK(s.find("(declare-const x Int)") != std::string::npos);
  CHECK(s.find("(assert (= x 0))") != std::string::npos);
  CHECK(s.find("(check-sat)") != std::string::npos);
  CHECK(s.find("(get-model)") != std::string::npos);
  CHECK(s == emit_smtlib(q));  // identical queries, identical bytes
}

TEST_CASE("emit_smtlib: array element symbols are plain consts") {
  auto a0 = sv_sym("a__0", Type::Int);
  auto a1 = sv_sym("a__1", Type::Int);
  std::string s = emit_smtlib(make_query({lt(a0, a1)}, 1000));
  CHECK(s.find("(declare-const a__0 Int)") != std::string::npos);
  CHECK(s.find("(declare-const a__1 Int)") != std::string::npos);
  CHECK(s.find("(assert (< a__0 a__1))") != std::string::npos);
}

TEST_CASE("emit_smtlib: div/mod use the Euclidean theory operators and flip the logic") {
  auto t = eq(sv_app(SymOp::Div, {sym_x(), sv_int(Int(2))}), sv_int(Int(3)));
  std::string s = emit_smtlib(make_query({t}, 1000));
  CHECK(s.find("(div x 2)") != std::string::npos);
  CHECK(s.find("(set-logic QF_NIA)") != std::string::npos);
  // Negative literals use the unary-minus form.
  std::string neg = emit_smtlib(make_query({eq(sym_x(), sv_int(Int(-5)))}, 1000));
  CHECK(neg.find("(- 5)") != std::string::npos);
}

TEST_CASE("enumerative: unique model and UNSAT") {
  SolverQuery q = make_query({gt(sym_x(), sv_int(Int(5))), lt(sym_x(), sv_int(Int(7)))}, 1000);
  SolverVerdict v = enumerative_check(q, {{"x", {Int(-100), Int(100)}}});
  REQUIRE(v.sat());
  CHECK(v.model.at("x") == Value(Int(6)));

  SolverQuery q2 = make_query({gt(sym_x(), sv_int(Int(5))), lt(sym_x(), sv_int(Int(5)))}, 1000);
  CHECK(enumerative_check(q2, {{"x", {Int(-100), Int(100)}}}).unsat());
}

TEST_CASE("enumerative: lexicographically smallest models") {
  // x in [-2,2], x*x = 4: enumeration visits -2 first.
  SolverQuery q = make_query({eq(sv_app(SymOp::Mul, {sym_x(), sym_x()}), sv_int(Int(4)))}, 1000);
  SolverVerdict v = enumerative_check(q, {{"x", {Int(-2), Int(2)}}});
  REQUIRE(v.sat());
  CHECK(v.model.at("x") == Value(Int(-2)));

  // x,y in [0,3], x+y=3, x<y: 16-point enumeration gives (0,3).
  SolverQuery q2 = make_query(
      {eq(sv_app(SymOp::Add, {sym_x(), sym_y()}), sv_int(Int(3))), lt(sym_x(), sym_y())}, 1000);
  SolverVerdict v2 = enumerative_check(q2, {{"x", {Int(0), Int(3)}}, {"y", {Int(0), Int(3)}}});
  REQUIRE(v2.sat());
  CHECK(v2.model.at("x") == Value(Int(0)));
  CHECK(v2.model.at("y") == Value(Int(3)));

  CHECK(enumerative_check(make_query({gt(sym_x(), sv_int(Int(9)))}, 1000),
                          {{"x", {Int(0), Int(3)}}})
            .unsat());
}

TEST_CASE("enumerative matches a straight scan on a congruence query") {
  auto n = sv_sym("n", Type::Int);
  std::vector<SymValue> asserts = {
      le(sv_int(Int(1)), n), le(n, sv_int(Int(100))),
      eq(sv_app(SymOp::Mod, {n, sv_int(Int(7))}), sv_int(Int(0))),
      eq(sv_app(SymOp::Mod, {n, sv_int(Int(5))}), sv_int(Int(0)))};
  SolverVerdict v = enumerative_check(make_query(asserts, 1000), {{"n", {Int(1), Int(100)}}});
  REQUIRE(v.sat());
  int expected = -1;
  for (int i = 1; i <= 100; ++i)
    if (i % 7 == 0 && i % 5 == 0) {
      expected = i;
      break;
    }
  CHECK(v.model.at("n") == Value(Int(expected)));
  // n = 70 is the other solution in range and must validate too.
  CHECK(model_satisfies(make_query(asserts, 1000), {{"n", Value(Int(70))}}));
}

TEST_CASE("enumerative: grid cap") {
  SolverQuery q = make_query({gt(sym_x(), sym_y())}, 1000);
  Bounds b = {{"x", {Int(0), Int(9999)}}, {"y", {Int(0), Int(9999)}}};
  CHECK_THROWS_AS(enumerative_check(q, b, 1000000), GridTooLarge);
}

TEST_CASE("derive_bounds needs both sides from the assertions") {
  SolverQuery full = make_query({ge(sym_x(), sv_int(Int(1))), le(sym_x(), sv_int(Int(8)))}, 1000);
  auto b = derive_bounds(full);
  REQUIRE(b.has_value());
  CHECK(b->at("x") == std::pair<Int, Int>{Int(1), Int(8)});

  SolverQuery half = make_query({ge(sym_x(), sv_int(Int(1)))}, 1000);
  CHECK(!derive_bounds(half).has_value());

  // Negated comparisons flip: not(x <= 0) bounds from below.
  SolverQuery negq =
      make_query({sv_not(le(sym_x(), sv_int(Int(0)))), le(sym_x(), sv_int(Int(5)))}, 1000);
  auto nb = derive_bounds(negq);
  REQUIRE(nb.has_value());
  CHECK(nb->at("x") == std::pair<Int, Int>{Int(1), Int(5)});
}

TEST_CASE("external backend: sat with validated model, unsat, bool symbols") {
  SolverConfig cfg = minismt_config();
  SolverQuery q = make_query({gt(sym_x(), sv_int(Int(5))), lt(sym_x(), sv_int(Int(7)))}, 3000);
  SolverVerdict v = external_check(cfg.external_cmd, q);
  REQUIRE(v.sat());
  CHECK(v.model.at("x") == Value(Int(6)));

  SolverQuery uq = make_query({gt(sym_x(), sv_int(Int(5))), lt(sym_x(), sv_int(Int(5)))}, 3000);
  CHECK(external_check(cfg.external_cmd, uq).unsat());

  auto b = sv_sym("b", Type::Bool);
  SolverQuery bq = make_query({sv_app(SymOp::And, {b, gt(sym_x(), sv_int(Int(2)))}),
                               le(sym_x(), sv_int(Int(3)))},
                              3000);
  SolverVerdict bv = external_check(cfg.external_cmd, bq);
  REQUIRE(bv.sat());
  CHECK(bv.model.at("b") == Value(true));
  CHECK(bv.model.at("x") == Value(Int(3)));
}

TEST_CASE("external backend: negative model values round-trip") {
  SolverConfig cfg = minismt_config();
  SolverQuery q = make_query({lt(sym_x(), sv_int(Int(-3))), gt(sym_x(), sv_int(Int(-5)))}, 3000);
  SolverVerdict v = external_check(cfg.external_cmd, q);
  REQUIRE(v.sat());
  CHECK(v.model.at("x") == Value(Int(-4)));
}

TEST_CASE("external backend: BackendUnavailable for a bogus command") {
  SolverQuery q = make_query({sv_bool(true)}, 1000);
  CHECK_THROWS_AS(external_check("/nonexistent/solver-binary-xyz", q), BackendUnavailable);
  CHECK(!probe_external_solver("/nonexistent/solver-binary-xyz"));
  CHECK(probe_external_solver(minismt_config().external_cmd));
}

TEST_CASE("session auto-routing is sound and counts queries") {
  SmtSession session(minismt_config());
  // Boxed: enumerative route.
  SolverVerdict v = session.check_auto(
      make_query({ge(sym_x(), sv_int(Int(0))), le(sym_x(), sv_int(Int(3))),
                  gt(sym_x(), sv_int(Int(99)))},
                 1000));
  CHECK(v.unsat());
  // Unboxed (x unbounded below): the external route must answer.
  SolverVerdict v2 =
      session.check_auto(make_query({lt(sym_x(), sv_int(Int(-1000)))}, 3000));
  CHECK(v2.sat());
  CHECK(session.queries() == 2);

  SmtSession no_external{SolverConfig{}};
  SolverVerdict v3 = no_external.check_auto(make_query({lt(sym_x(), sv_int(Int(0)))}, 1000));
  CHECK(v3.unknown());
}

TEST_CASE("backend agreement on randomized bounded queries") {
  // Both backends must agree on SAT/UNSAT whenever the query carries its
  // own bounds; models may differ but each must validate.
  std::mt19937_64 rng(424242);
  SolverConfig cfg = minismt_config();
  int sat_seen = 0, unsat_seen = 0;
  for (int iter = 0; iter < 120; ++iter) {
    auto x = sym_x(), y = sym_y();
    int lox = (int)(rng() % 17) - 8, hix = lox + (int)(rng() % 9);
    int loy = (int)(rng() % 17) - 8, hiy = loy + (int)(rng() % 9);
    std::vector<SymValue> asserts = {ge(x, sv_int(Int(lox))), le(x, sv_int(Int(hix))),
                                     ge(y, sv_int(Int(loy))), le(y, sv_int(Int(hiy)))};
    for (int k = 0; k < 2; ++k) {
      int c = (int)(rng() % 11) - 5;
      switch (rng() % 5) {
        case 0: asserts.push_back(lt(sv_app(SymOp::Add, {x, y}), sv_int(Int(c)))); break;
        case 1: asserts.push_back(ge(sv_app(SymOp::Sub, {x, y}), sv_int(Int(c)))); break;
        case 2:
          asserts.push_back(
              eq(sv_app(SymOp::Mod, {x, sv_int(Int(3))}), sv_int(Int(((c % 3) + 3) % 3))));
          break;
        case 3: asserts.push_back(sv_not(eq(x, sv_int(Int(c))))); break;
        default: asserts.push_back(gt(sv_app(SymOp::Mul, {x, sv_int(Int(2))}), sv_int(Int(c))));
      }
    }
    SolverQuery q = make_query(asserts, 3000);
    SolverVerdict ve = external_check(cfg.external_cmd, q);
    auto bounds = derive_bounds(q);
    REQUIRE(bounds.has_value());
    SolverVerdict vn = enumerative_check(q, *bounds);
    REQUIRE(!ve.unknown());
    REQUIRE(!vn.unknown());
    CHECK(ve.sat() == vn.sat());
    if (ve.sat()) {
      ++sat_seen;
      CHECK(model_satisfies(q, ve.model));
      CHECK(model_satisfies(q, vn.model));
    } else {
      ++unsat_seen;
    }
  }
  // The random mix must exercise both verdicts to mean anything.
  CHECK(sat_seen > 10);
  CHECK(unsat_seen > 10);
}
