#include "oracle.hpp"

#include <functional>

namespace sep::test {

Program parse_program(const std::string& source, const std::string& id, int gen) {
  return parse(source, id, gen);
}

ProblemInputs make_inputs(const std::string& signature,
                          const std::vector<std::string>& constraints,
                          std::vector<TestCase> public_examples) {
  ProblemInputs in;
  in.id = "test_problem";
  in.signature = parse_signature(signature);
  in.constraints = parse_constraints(constraints, in.signature.params);
  in.public_examples = std::move(public_examples);
  return in;
}

std::vector<std::vector<Value>> enumerate_args(const ProblemInputs& inputs) {
  const auto& params = inputs.signature.params;
  auto bounds = scalar_domain_bounds(inputs.constraints, params);
  if (!bounds) throw std::runtime_error("oracle needs fully bounded scalar params");

  std::vector<std::vector<Value>> out;
  std::vector<Value> cur(params.size());
  std::function<void(size_t)> walk = [&](size_t i) {
    if (i == params.size()) {
      if (constraints_hold(inputs.constraints, params, cur)) out.push_back(cur);
      return;
    }
    if (params[i].type == Type::Bool) {
      for (bool b : {false, true}) {
        cur[i] = Value(b);
        walk(i + 1);
      }
      return;
    }
    if (params[i].type != Type::Int) throw std::runtime_error("oracle is scalar-only");
    auto [lo, hi] = bounds->at(params[i].name);
    for (Int v = lo; v <= hi; ++v) {
      cur[i] = Value(v);
      walk(i + 1);
    }
  };
  walk(0);
  return out;
}

bool ground_truth_equivalent(const Program& a, const Program& b, const ProblemInputs& inputs,
                             int64_t fuel) {
  return !ground_truth_witness(a, b, inputs, fuel).has_value();
}

std::optional<std::vector<Value>> ground_truth_witness(const Program& a, const Program& b,
                                                       const ProblemInputs& inputs,
                                                       int64_t fuel) {
  for (const auto& args : enumerate_args(inputs)) {
    ExecutionOutcome oa = interpret(a, args, fuel);
    ExecutionOutcome ob = interpret(b, args, fuel);
    if (!outcomes_equal(oa, ob)) return args;
  }
  return std::nullopt;
}

namespace {

ExprPtr random_int_expr(std::mt19937_64& rng, int depth);

ExprPtr random_bool_expr(std::mt19937_64& rng, int depth) {
  auto pick = std::uniform_int_distribution<int>(0, depth <= 0 ? 0 : 5)(rng);
  switch (pick) {
    case 1:
    case 2:
    case 3: {
      static const BinOp cmps[] = {BinOp::Lt, BinOp::Le, BinOp::Gt,
                                   BinOp::Ge, BinOp::Eq, BinOp::Ne};
      BinOp op = cmps[std::uniform_int_distribution<int>(0, 5)(rng)];
      return make_binary(op, random_int_expr(rng, depth - 1), random_int_expr(rng, depth - 1));
    }
    case 4: {
      BinOp op = std::uniform_int_distribution<int>(0, 1)(rng) ? BinOp::And : BinOp::Or;
      return make_binary(op, random_bool_expr(rng, depth - 1), random_bool_expr(rng, depth - 1));
    }
    case 5:
      return make_unary(UnOp::Not, random_bool_expr(rng, depth - 1));
    default:
      return make_bool(std::uniform_int_distribution<int>(0, 1)(rng) == 1);
  }
}

ExprPtr random_int_expr(std::mt19937_64& rng, int depth) {
  auto pick = std::uniform_int_distribution<int>(0, depth <= 0 ? 2 : 5)(rng);
  switch (pick) {
    case 0:
      return make_int(Int(std::uniform_int_distribution<int>(-5, 5)(rng)));
    case 1:
    case 2:
      return make_var(std::uniform_int_distribution<int>(0, 1)(rng) ? "x" : "y");
    case 3:
    case 4: {
      static const BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Mod};
      BinOp op = ops[std::uniform_int_distribution<int>(0, 4)(rng)];
      return make_binary(op, random_int_expr(rng, depth - 1), random_int_expr(rng, depth - 1));
    }
    case 5:
      return make_unary(UnOp::Neg, random_int_expr(rng, depth - 1));
    default:
      return make_int(Int(std::uniform_int_distribution<int>(-5, 5)(rng)));
  }
}

Block random_block(std::mt19937_64& rng, int depth, int* assign_counter) {
  Block b;
  int n_stmts = std::uniform_int_distribution<int>(2, 4)(rng);
  for (int i = 0; i < n_stmts; ++i) {
    int pick = std::uniform_int_distribution<int>(0, depth <= 0 ? 4 : 9)(rng);
    if (pick >= 8) {
      // Nested if/else with full blocks on both arms.
      Block tb = random_block(rng, depth - 1, assign_counter);
      Block eb = random_block(rng, depth - 1, assign_counter);
      b.push_back(std::make_shared<Stmt>(
          Stmt{Stmt::If{random_bool_expr(rng, 2), std::move(tb), std::move(eb)}}));
    } else if (pick >= 5) {
      // Early return behind a guard: the common multi-leaf shape.
      Block tb;
      tb.push_back(std::make_shared<Stmt>(Stmt{Stmt::Return{random_int_expr(rng, 2)}}));
      b.push_back(
          std::make_shared<Stmt>(Stmt{Stmt::If{random_bool_expr(rng, 2), std::move(tb), {}}}));
    } else {
      std::string name = "t" + std::to_string((*assign_counter)++ % 3);
      b.push_back(std::make_shared<Stmt>(Stmt{Stmt::Assign{name, random_int_expr(rng, 2)}}));
    }
  }
  return b;
}

}  // namespace

Program random_program(std::mt19937_64& rng, int max_depth) {
  // Locals t0..t2 are pre-assigned so every generated reference is defined.
  FunctionDef f;
  f.name = "f";
  f.params = {{"x", Type::Int}, {"y", Type::Int}};
  f.return_type = Type::Int;
  Block body;
  for (int i = 0; i < 3; ++i)
    body.push_back(std::make_shared<Stmt>(Stmt{Stmt::Assign{"t" + std::to_string(i), make_int(0)}}));
  int counter = 0;
  Block inner = random_block(rng, max_depth, &counter);
  body.insert(body.end(), inner.begin(), inner.end());
  body.push_back(std::make_shared<Stmt>(Stmt{Stmt::Return{make_var("x")}}));
  f.body = std::move(body);

  // Round-trip through the printer so the source field is canonical.
  return parse(print_function(f), "rand", 0);
}

}  // namespace sep::test
