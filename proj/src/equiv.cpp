#include "sep/equiv.hpp"

#include <chrono>

namespace sep {

namespace {

constexpr int64_t kValidationFuel = 1000000;

// Disequality of two symbolic outcomes as solver terms. Empty result
// with could_differ=false means the outcomes are identical on every
// model; condition `true` is encoded as an empty disjunction with
// always_differ=true.
struct OutcomeDiff {
  bool always_differ = false;
  bool never_differ = false;
  std::vector<SymValue> disjuncts;
};

void add_mutation_diffs(const SymOutcome& a, const SymOutcome& b, OutcomeDiff& d) {
  for (const auto& [name, elems_a] : a.mutated_inputs) {
    auto it = b.mutated_inputs.find(name);
    if (it == b.mutated_inputs.end() || it->second.size() != elems_a.size()) continue;
    for (size_t k = 0; k < elems_a.size(); ++k) {
      if (term_equal(elems_a[k], it->second[k])) continue;  // syntactically same term
      d.disjuncts.push_back(sv_app(SymOp::Ne, {elems_a[k], it->second[k]}));
    }
  }
}

OutcomeDiff outcome_diff(const SymOutcome& a, const SymOutcome& b) {
  OutcomeDiff d;
  if (a.kind == SymOutcome::Kind::Return && b.kind == SymOutcome::Kind::Return) {
    const bool unit_a = !a.return_value.has_value();
    const bool unit_b = !b.return_value.has_value();
    if (unit_a != unit_b) {
      d.always_differ = true;
      return d;
    }
    if (!unit_a && !term_equal(*a.return_value, *b.return_value)) {
      if ((*a.return_value)->type != (*b.return_value)->type) {
        d.always_differ = true;  // int return vs bool return cannot coincide
        return d;
      }
      d.disjuncts.push_back(sv_app(SymOp::Ne, {*a.return_value, *b.return_value}));
    }
    add_mutation_diffs(a, b, d);
    // Constant-fold: Ne of equal constants vanished inside sv_app.
    std::vector<SymValue> live;
    for (auto& t : d.disjuncts) {
      if (t->is_const()) {
        if (t->const_value().as_bool()) {
          d.always_differ = true;
          return d;
        }
        continue;
      }
      live.push_back(std::move(t));
    }
    d.disjuncts = std::move(live);
    d.never_differ = d.disjuncts.empty();
    return d;
  }
  if (a.kind == SymOutcome::Kind::Exception && b.kind == SymOutcome::Kind::Exception) {
    if (a.exception != b.exception) {
      d.always_differ = true;
      return d;
    }
    add_mutation_diffs(a, b, d);
    std::vector<SymValue> live;
    for (auto& t : d.disjuncts) {
      if (t->is_const()) {
        if (t->const_value().as_bool()) {
          d.always_differ = true;
          return d;
        }
        continue;
      }
      live.push_back(std::move(t));
    }
    d.disjuncts = std::move(live);
    d.never_differ = d.disjuncts.empty();
    return d;
  }
  // Return vs Exception.
  d.always_differ = true;
  return d;
}

std::vector<Value> model_to_args(const FunctionDef& sig, const SymbolEnv& env,
                                 const std::map<std::string, Value>& model) {
  std::vector<Value> args;
  for (const auto& p : sig.params) {
    if (p.type == Type::IntArray) {
      IntArray arr;
      const auto& elems = env.arrays.at(p.name);
      for (size_t k = 0; k < elems.size(); ++k) {
        auto it = model.find(p.name + "__" + std::to_string(k));
        arr.push_back(it == model.end() ? Int(0) : it->second.as_int());
      }
      args.emplace_back(std::move(arr));
    } else if (p.type == Type::Bool) {
      auto it = model.find(p.name);
      args.emplace_back(it == model.end() ? Value(false) : it->second);
    } else {
      auto it = model.find(p.name);
      args.emplace_back(it == model.end() ? Value(Int(0)) : it->second);
    }
  }
  return args;
}

}  // namespace

PairCheckResult check_divergence(const Program& p_i, const Program& p_j,
                                 const ProblemInputs& spec, const Budget& budget,
                                 const SolverConfig& solver_cfg, int64_t max_array_len) {
  auto t0 = std::chrono::steady_clock::now();
  auto deadline = t0 + std::chrono::milliseconds(budget.total_deadline_ms);
  SolverConfig cfg = solver_cfg;
  cfg.timeout_ms = budget.solver_timeout_ms;
  SmtSession session(cfg);

  PairCheckResult result;
  auto finish = [&](EquivVerdict v) {
    result.verdict = std::move(v);
    result.smt_queries = session.queries();
    result.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                         .count();
    return result;
  };

  // Per-array length plans; the cartesian product enumerates one symbol
  // environment per configuration.
  std::vector<std::string> array_params;
  for (const auto& p : spec.signature.params)
    if (p.type == Type::IntArray) array_params.push_back(p.name);

  bool covers_all_lengths = true;
  std::vector<std::vector<int64_t>> plans;
  for (const auto& name : array_params) {
    LengthPlan plan = array_length_strategy(name, spec.constraints, max_array_len);
    covers_all_lengths &= plan.covers_domain;
    plans.push_back(std::move(plan.lengths));
  }
  std::vector<std::map<std::string, int64_t>> configs;
  std::map<std::string, int64_t> cur;
  std::function<void(size_t)> build = [&](size_t k) {
    if (k == array_params.size()) {
      configs.push_back(cur);
      return;
    }
    for (int64_t len : plans[k]) {
      cur[array_params[k]] = len;
      build(k + 1);
    }
  };
  build(0);

  bool exhaustive = covers_all_lengths;
  int abandoned = 0;
  int live_configs = 0;

  for (const auto& config : configs) {
    if (std::chrono::steady_clock::now() > deadline) {
      EquivVerdict v;
      v.kind = EquivVerdict::Kind::NotDistinguished;
      v.exhaustive = false;
      v.abandoned_paths = abandoned;
      return finish(std::move(v));
    }

    SymbolEnv env = make_symbol_env(spec.signature.params, config);
    PathCondition assumptions;
    try {
      assumptions = inject_assumptions(spec.constraints, env);
    } catch (const EmptyDomain&) {
      continue;  // this length configuration admits no input
    }
    if (!assumptions.conjuncts.empty()) {
      SolverVerdict sv =
          session.check_auto(make_query(assumptions.conjuncts, budget.solver_timeout_ms));
      if (sv.unsat()) continue;
      if (sv.unknown()) exhaustive = false;
    }
    ++live_configs;

    FeasibilityOracle oracle = [&](const PathCondition& pc) {
      std::vector<SymValue> asserts = assumptions.conjuncts;
      asserts.insert(asserts.end(), pc.conjuncts.begin(), pc.conjuncts.end());
      if (asserts.empty()) return Feasibility::Sat;
      SolverVerdict sv = session.check_auto(make_query(std::move(asserts), budget.solver_timeout_ms));
      if (sv.sat()) return Feasibility::Sat;
      if (sv.unsat()) return Feasibility::Unsat;
      return Feasibility::Unknown;
    };

    SymExecResult res_i = sym_execute(p_i, env, assumptions, budget, oracle);
    SymExecResult res_j = sym_execute(p_j, env, assumptions, budget, oracle);
    abandoned += res_i.abandoned_count + res_j.abandoned_count;
    exhaustive = exhaustive && res_i.complete() && res_j.complete();

    for (const auto& leaf_i : res_i.leaves) {
      if (leaf_i.abandoned()) continue;
      for (const auto& leaf_j : res_j.leaves) {
        if (leaf_j.abandoned()) continue;
        if (std::chrono::steady_clock::now() > deadline) {
          EquivVerdict v;
          v.kind = EquivVerdict::Kind::NotDistinguished;
          v.exhaustive = false;
          v.abandoned_paths = abandoned;
          return finish(std::move(v));
        }

        OutcomeDiff diff = outcome_diff(leaf_i, leaf_j);
        if (diff.never_differ) continue;

        // Joint reachability of the two paths under the assumptions.
        std::vector<SymValue> joint = assumptions.conjuncts;
        joint.insert(joint.end(), leaf_i.pc.conjuncts.begin(), leaf_i.pc.conjuncts.end());
        joint.insert(joint.end(), leaf_j.pc.conjuncts.begin(), leaf_j.pc.conjuncts.end());

        std::vector<SymValue> full = joint;
        if (!diff.always_differ) {
          SymValue cond = diff.disjuncts[0];
          for (size_t k = 1; k < diff.disjuncts.size(); ++k)
            cond = sv_app(SymOp::Or, {cond, diff.disjuncts[k]});
          full.push_back(cond);
        }

        SolverVerdict sv;
        if (full.empty()) {
          // No assumptions, no branch conditions: any input works.
          sv = SolverVerdict::make_sat({});
        } else {
          sv = session.check_auto(make_query(full, budget.solver_timeout_ms));
        }
        if (sv.unsat()) continue;
        if (sv.unknown()) {
          exhaustive = false;
          continue;
        }

        std::vector<Value> args = model_to_args(spec.signature, env, sv.model);
        if (!constraints_hold(spec.constraints, spec.signature.params, args)) {
          exhaustive = false;  // should not happen; never claim Distinct on it
          continue;
        }
        ExecutionOutcome out_i = interpret(p_i, args, kValidationFuel);
        ExecutionOutcome out_j = interpret(p_j, args, kValidationFuel);
        if (outcomes_equal(out_i, out_j)) {
          exhaustive = false;  // model did not reproduce the divergence
          continue;
        }
        EquivVerdict v;
        v.kind = EquivVerdict::Kind::Distinct;
        for (size_t k = 0; k < spec.signature.params.size(); ++k)
          v.counterexample[spec.signature.params[k].name] = args[k];
        v.outcome_i = std::move(out_i);
        v.outcome_j = std::move(out_j);
        v.abandoned_paths = abandoned;
        return finish(std::move(v));
      }
    }
  }

  if (live_configs == 0 && !configs.empty())
    throw EmptyDomain("domain constraints admit no input for problem " + spec.id);
  if (configs.empty() && array_params.empty()) {
    // Scalar-only problems always have exactly one configuration.
  }

  EquivVerdict v;
  v.kind = EquivVerdict::Kind::NotDistinguished;
  v.exhaustive = exhaustive;
  v.abandoned_paths = abandoned;
  return finish(std::move(v));
}

PublicRunResult run_public_examples(const Program& p, const ProblemInputs& spec, int64_t fuel) {
  PublicRunResult r;
  for (size_t i = 0; i < spec.public_examples.size(); ++i) {
    const TestCase& tc = spec.public_examples[i];
    ExecutionOutcome out;
    try {
      out = interpret(p, tc.args, fuel);
    } catch (const TypeMismatchError&) {
      r.pass = false;
      r.first_failure = (int)i;
      return r;
    }
    if (!outcomes_equal(out, tc.expected)) {
      r.pass = false;
      r.first_failure = (int)i;
      return r;
    }
  }
  return r;
}

}  // namespace sep
