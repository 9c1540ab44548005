#include "sep/domain.hpp"

#include <set>
#include <sstream>

namespace sep {

namespace {

void check_total(const Expr& e) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Unary>) {
          check_total(*x.operand);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          if (x.op == BinOp::Div || x.op == BinOp::Mod) {
            const auto* lit = std::get_if<Expr::IntLit>(&x.rhs->node);
            if (!lit || lit->value == 0)
              throw ConstraintParseError(
                  "div/mod in constraints needs a nonzero constant divisor");
          }
          check_total(*x.lhs);
          check_total(*x.rhs);
        }
      },
      e.node);
}

void collect_names(const Expr& e, std::set<std::string>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Var>) {
          out.insert(x.name);
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          collect_names(*x.operand, out);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          collect_names(*x.lhs, out);
          collect_names(*x.rhs, out);
        } else if constexpr (std::is_same_v<T, Expr::Index>) {
          collect_names(*x.array, out);
          collect_names(*x.index, out);
        } else if constexpr (std::is_same_v<T, Expr::Len>) {
          collect_names(*x.array, out);
        }
      },
      e.node);
}

// Lowers a constraint expression to a symbolic term; len(a) folds to the
// concrete length constant.
SymValue lower(const Expr& e, const SymbolEnv& env) {
  return std::visit(
      [&](const auto& x) -> SymValue {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::IntLit>) {
          return sv_int(x.value);
        } else if constexpr (std::is_same_v<T, Expr::BoolLit>) {
          return sv_bool(x.value);
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          auto it = env.scalars.find(x.name);
          if (it == env.scalars.end())
            throw UnknownParameter("no scalar symbol for '" + x.name + "'");
          return it->second;
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          return sv_app(sym_op_of(x.op), {lower(*x.operand, env)});
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          return sv_app(sym_op_of(x.op), {lower(*x.lhs, env), lower(*x.rhs, env)});
        } else if constexpr (std::is_same_v<T, Expr::Len>) {
          const auto* var = std::get_if<Expr::Var>(&x.array->node);
          if (!var) throw ConstraintParseError("len() in constraints takes a parameter name");
          auto it = env.arrays.find(var->name);
          if (it == env.arrays.end())
            throw UnknownParameter("no array symbol for '" + var->name + "'");
          return sv_int(Int(it->second.size()));
        } else {
          throw ConstraintParseError("array element references are not allowed");
        }
      },
      e.node);
}

// Unit-conjunct comparisons against a fixed key expression; used both
// for scalar params (key = Var) and lengths (key = len(a)).
struct Range {
  std::optional<Int> lo, hi;
};

bool expr_is_key(const Expr& e, const std::string& param, bool length) {
  if (length) {
    const auto* l = std::get_if<Expr::Len>(&e.node);
    if (!l) return false;
    const auto* v = std::get_if<Expr::Var>(&l->array->node);
    return v && v->name == param;
  }
  const auto* v = std::get_if<Expr::Var>(&e.node);
  return v && v->name == param;
}

void tighten(Range& r, BinOp op, const Int& c, bool key_on_left) {
  BinOp eff = op;
  if (!key_on_left) {
    switch (op) {
      case BinOp::Lt: eff = BinOp::Gt; break;
      case BinOp::Le: eff = BinOp::Ge; break;
      case BinOp::Gt: eff = BinOp::Lt; break;
      case BinOp::Ge: eff = BinOp::Le; break;
      default: break;
    }
  }
  auto set_lo = [&](Int v) {
    if (!r.lo || v > *r.lo) r.lo = v;
  };
  auto set_hi = [&](Int v) {
    if (!r.hi || v < *r.hi) r.hi = v;
  };
  switch (eff) {
    case BinOp::Lt: set_hi(c - 1); break;
    case BinOp::Le: set_hi(c); break;
    case BinOp::Gt: set_lo(c + 1); break;
    case BinOp::Ge: set_lo(c); break;
    case BinOp::Eq:
      set_lo(c);
      set_hi(c);
      break;
    default: break;
  }
}

Range range_of(const DomainConstraints& constraints, const std::string& param, bool length) {
  Range r;
  for (const auto& c : constraints.normalized) {
    const auto* b = std::get_if<Expr::Binary>(&c->node);
    if (!b || !binop_is_comparison(b->op) || b->op == BinOp::Ne) continue;
    const auto* rlit = std::get_if<Expr::IntLit>(&b->rhs->node);
    const auto* llit = std::get_if<Expr::IntLit>(&b->lhs->node);
    if (expr_is_key(*b->lhs, param, length) && rlit) {
      tighten(r, b->op, rlit->value, /*key_on_left=*/true);
    } else if (expr_is_key(*b->rhs, param, length) && llit) {
      tighten(r, b->op, llit->value, /*key_on_left=*/false);
    }
  }
  return r;
}

}  // namespace

DomainConstraints parse_constraints(const std::vector<std::string>& raw,
                                    const std::vector<Param>& params) {
  DomainConstraints out;
  out.raw = raw;
  std::set<std::string> param_names;
  for (const auto& p : params) param_names.insert(p.name);
  for (const auto& s : raw) {
    std::vector<ExprPtr> conjuncts;
    try {
      conjuncts = parse_bool_expr(s, params, /*allow_chained=*/true);
    } catch (const ParseError& e) {
      std::string what = e.what();
      if (what.find("unknown identifier") != std::string::npos)
        throw UnknownParameter(what + " (in constraint '" + s + "')");
      throw ConstraintParseError(what + " (in constraint '" + s + "')");
    }
    for (auto& c : conjuncts) {
      std::set<std::string> names;
      collect_names(*c, names);
      for (const auto& n : names)
        if (!param_names.count(n))
          throw UnknownParameter("constraint references unknown parameter '" + n + "'");
      check_total(*c);
      out.normalized.push_back(std::move(c));
    }
  }
  return out;
}

SymbolEnv make_symbol_env(const std::vector<Param>& params,
                          const std::map<std::string, int64_t>& array_lengths) {
  SymbolEnv env;
  for (const auto& p : params) {
    if (p.type == Type::IntArray) {
      auto it = array_lengths.find(p.name);
      if (it == array_lengths.end())
        throw std::invalid_argument("missing length for array parameter " + p.name);
      std::vector<SymValue> elems;
      for (int64_t i = 0; i < it->second; ++i)
        elems.push_back(sv_sym(p.name + "__" + std::to_string(i), Type::Int));
      env.arrays.emplace(p.name, std::move(elems));
    } else {
      env.scalars.emplace(p.name, sv_sym(p.name, p.type == Type::Bool ? Type::Bool : Type::Int));
    }
  }
  return env;
}

PathCondition inject_assumptions(const DomainConstraints& constraints, const SymbolEnv& env) {
  PathCondition pc;
  for (const auto& c : constraints.normalized) pc.append(lower(*c, env));
  if (pc.is_literally_false())
    throw EmptyDomain("constraints are unsatisfiable for this configuration");
  return pc;
}

void ensure_nonempty(const PathCondition& assumptions, SmtSession& session) {
  if (assumptions.conjuncts.empty()) return;
  SolverQuery q = make_query(assumptions.conjuncts, session.config().timeout_ms);
  SolverVerdict v = session.check_auto(q);
  if (v.unsat()) throw EmptyDomain("domain constraints admit no input");
}

PruneDecision prune_on_violation(const PathCondition& pc, const PathCondition& assumptions,
                                 SmtSession& session) {
  std::vector<SymValue> asserts = assumptions.conjuncts;
  asserts.insert(asserts.end(), pc.conjuncts.begin(), pc.conjuncts.end());
  if (asserts.empty()) return PruneDecision::Keep;
  for (const auto& a : asserts)
    if (a->is_const() && !a->const_value().as_bool()) return PruneDecision::Drop;
  SolverVerdict v = session.check_auto(make_query(std::move(asserts), session.config().timeout_ms));
  return v.unsat() ? PruneDecision::Drop : PruneDecision::Keep;
}

bool constraints_hold(const DomainConstraints& constraints, const std::vector<Param>& params,
                      const std::vector<Value>& args) {
  std::map<std::string, Value> env;
  for (size_t i = 0; i < params.size() && i < args.size(); ++i)
    env.emplace(params[i].name, args[i]);
  try {
    for (const auto& c : constraints.normalized)
      if (!eval_expr(*c, env).as_bool()) return false;
  } catch (const EvalException&) {
    return false;
  } catch (const std::out_of_range&) {
    return false;
  }
  return true;
}

std::optional<Bounds> scalar_domain_bounds(const DomainConstraints& constraints,
                                           const std::vector<Param>& params) {
  Bounds out;
  for (const auto& p : params) {
    if (p.type != Type::Int) continue;
    Range r = range_of(constraints, p.name, /*length=*/false);
    if (!r.lo || !r.hi) return std::nullopt;
    out[p.name] = {*r.lo, *r.hi};
  }
  return out;
}

LengthBounds length_bounds(const DomainConstraints& constraints, const std::string& param) {
  Range r = range_of(constraints, param, /*length=*/true);
  LengthBounds lb;
  if (r.lo && *r.lo > 0) lb.lo = (int64_t)*r.lo;
  if (r.hi) lb.hi = (int64_t)std::max<Int>(Int(-1), *r.hi);
  return lb;
}

}  // namespace sep
