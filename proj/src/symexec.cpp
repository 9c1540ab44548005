#include "sep/symexec.hpp"

#include <chrono>

namespace sep {

namespace {

struct State {
  PathCondition pc;
  std::map<std::string, SymValue> scalars;
  std::map<std::string, std::vector<SymValue>> arrays;
  std::map<const Stmt*, int> loop_counts;
};

class Executor {
 public:
  Executor(const FunctionDef& fn, const Budget& budget, const FeasibilityOracle& oracle)
      : fn_(fn),
        budget_(budget),
        oracle_(oracle),
        deadline_(std::chrono::steady_clock::now() +
                  std::chrono::milliseconds(budget.total_deadline_ms)) {}

  SymExecResult run(const SymbolEnv& env) {
    State st;
    for (const auto& [name, term] : env.scalars) st.scalars.emplace(name, term);
    for (const auto& [name, elems] : env.arrays) st.arrays.emplace(name, elems);
    exec_seq(std::move(st), &fn_.body, 0, [this](State s) { emit_return(std::move(s), std::nullopt); });
    for (const auto& l : result_.leaves) result_.abandoned_count += l.abandoned();
    return std::move(result_);
  }

 private:
  const FunctionDef& fn_;
  Budget budget_;
  const FeasibilityOracle& oracle_;
  std::chrono::steady_clock::time_point deadline_;
  SymExecResult result_;
  bool stop_ = false;

  using Cont = std::function<void(State)>;
  using ValueCont = std::function<void(State, SymValue)>;

  bool out_of_time() { return std::chrono::steady_clock::now() > deadline_; }

  // Returns false when exploration must not continue on this path.
  bool check_limits(const State& st) {
    if (stop_) return false;
    if (out_of_time()) {
      abandon(st, SymOutcome::AbandonReason::SolverTimeout);
      result_.hit_deadline = true;
      stop_ = true;
      return false;
    }
    return true;
  }

  void abandon(const State& st, SymOutcome::AbandonReason reason) {
    SymOutcome o;
    o.pc = st.pc;
    o.kind = SymOutcome::Kind::Abandoned;
    o.reason = reason;
    result_.leaves.push_back(std::move(o));
  }

  bool leaf_slot_available(const State& st) {
    if (stop_) return false;
    if ((int)result_.leaves.size() >= budget_.max_paths) {
      abandon(st, SymOutcome::AbandonReason::PathLimit);
      result_.hit_path_limit = true;
      stop_ = true;
      return false;
    }
    return true;
  }

  void emit_return(State st, std::optional<SymValue> value) {
    if (!leaf_slot_available(st)) return;
    SymOutcome o;
    o.pc = std::move(st.pc);
    o.kind = SymOutcome::Kind::Return;
    o.return_value = std::move(value);
    o.mutated_inputs = std::move(st.arrays);
    result_.leaves.push_back(std::move(o));
  }

  void emit_exception(State st, ExceptionKind kind) {
    if (!leaf_slot_available(st)) return;
    SymOutcome o;
    o.pc = std::move(st.pc);
    o.kind = SymOutcome::Kind::Exception;
    o.exception = kind;
    o.mutated_inputs = std::move(st.arrays);
    result_.leaves.push_back(std::move(o));
  }

  Feasibility feasible(const PathCondition& pc) {
    if (pc.is_literally_false()) return Feasibility::Unsat;
    Feasibility f = oracle_(pc);
    if (f == Feasibility::Unknown) ++result_.feasibility_unknowns;
    return f;
  }

  // Forks on a boolean term. Constant conditions do not fork; otherwise
  // each feasible side is explored, then-side first.
  void branch(State st, const SymValue& cond, const Cont& on_true, const Cont& on_false) {
    if (!check_limits(st)) return;
    if (cond->is_const()) {
      (cond->const_value().as_bool() ? on_true : on_false)(std::move(st));
      return;
    }
    PathCondition pc_true = st.pc.with(cond);
    if (feasible(pc_true) != Feasibility::Unsat) {
      State s = st;
      s.pc = pc_true;
      on_true(std::move(s));
    }
    if (stop_) return;
    PathCondition pc_false = st.pc.with(sv_not(cond));
    if (feasible(pc_false) != Feasibility::Unsat) {
      st.pc = std::move(pc_false);
      on_false(std::move(st));
    }
  }

  // Resolves an array index term to concrete slots: one branch per
  // in-bounds index value plus the out-of-bounds exception branch.
  void with_index(State st, const std::string& array, const SymValue& index,
                  const std::function<void(State, size_t)>& k) {
    if (!check_limits(st)) return;
    int64_t len = (int64_t)st.arrays.at(array).size();
    if (index->is_const()) {
      const Int& i = index->const_value().as_int();
      if (i < 0 || i >= len)
        emit_exception(std::move(st), ExceptionKind::IndexOutOfBounds);
      else
        k(std::move(st), (size_t)i.convert_to<int64_t>());
      return;
    }
    for (int64_t i = 0; i < len; ++i) {
      if (stop_) return;
      PathCondition pc_i = st.pc.with(sv_app(SymOp::Eq, {index, sv_int(Int(i))}));
      if (feasible(pc_i) == Feasibility::Unsat) continue;
      State s = st;
      s.pc = std::move(pc_i);
      k(std::move(s), (size_t)i);
    }
    if (stop_) return;
    SymValue oob = sv_app(SymOp::Or, {sv_app(SymOp::Lt, {index, sv_int(Int(0))}),
                                      sv_app(SymOp::Ge, {index, sv_int(Int(len))})});
    PathCondition pc_oob = st.pc.with(oob);
    if (feasible(pc_oob) != Feasibility::Unsat) {
      st.pc = std::move(pc_oob);
      emit_exception(std::move(st), ExceptionKind::IndexOutOfBounds);
    }
  }

  void eval(State st, const Expr& e, const ValueCont& k) {
    if (!check_limits(st)) return;
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Expr::IntLit>) {
            k(std::move(st), sv_int(x.value));
          } else if constexpr (std::is_same_v<T, Expr::BoolLit>) {
            k(std::move(st), sv_bool(x.value));
          } else if constexpr (std::is_same_v<T, Expr::Var>) {
            k(std::move(st), st.scalars.at(x.name));
          } else if constexpr (std::is_same_v<T, Expr::Unary>) {
            eval(std::move(st), *x.operand, [this, &x, &k](State s, SymValue v) {
              k(std::move(s), sv_app(sym_op_of(x.op), {std::move(v)}));
            });
          } else if constexpr (std::is_same_v<T, Expr::Binary>) {
            eval_binary(std::move(st), x, k);
          } else if constexpr (std::is_same_v<T, Expr::Index>) {
            const auto& arr_var = std::get<Expr::Var>(x.array->node);
            eval(std::move(st), *x.index, [this, name = arr_var.name, &k](State s, SymValue idx) {
              with_index(std::move(s), name, idx, [&k, name](State s2, size_t slot) {
                SymValue elem = s2.arrays.at(name)[slot];
                k(std::move(s2), std::move(elem));
              });
            });
          } else {
            const auto& arr_var = std::get<Expr::Var>(x.array->node);
            k(std::move(st), sv_int(Int(st.arrays.at(arr_var.name).size())));
          }
        },
        e.node);
  }

  void eval_binary(State st, const Expr::Binary& b, const ValueCont& k) {
    if (b.op == BinOp::And || b.op == BinOp::Or) {
      const bool is_and = b.op == BinOp::And;
      eval(std::move(st), *b.lhs, [this, &b, &k, is_and](State s, SymValue l) {
        auto eval_rhs = [this, &b, &k](State s2) {
          eval(std::move(s2), *b.rhs, [&k](State s3, SymValue r) { k(std::move(s3), std::move(r)); });
        };
        auto short_circuit = [&k, is_and](State s2) { k(std::move(s2), sv_bool(!is_and)); };
        if (is_and)
          branch(std::move(s), l, eval_rhs, short_circuit);
        else
          branch(std::move(s), l, short_circuit, eval_rhs);
      });
      return;
    }
    eval(std::move(st), *b.lhs, [this, &b, &k](State s, SymValue l) {
      eval(std::move(s), *b.rhs, [this, &b, &k, l](State s2, SymValue r) {
        if (b.op == BinOp::Div || b.op == BinOp::Mod) {
          ExceptionKind exc = b.op == BinOp::Div ? ExceptionKind::DivByZero
                                                 : ExceptionKind::ModByZero;
          if (r->is_const()) {
            if (r->const_value().as_int() == 0)
              emit_exception(std::move(s2), exc);
            else
              k(std::move(s2), sv_app(sym_op_of(b.op), {l, r}));
            return;
          }
          SymValue is_zero = sv_app(SymOp::Eq, {r, sv_int(Int(0))});
          branch(
              std::move(s2), is_zero,
              [this, exc](State s3) { emit_exception(std::move(s3), exc); },
              [&, this](State s3) { k(std::move(s3), sv_app(sym_op_of(b.op), {l, r})); });
          return;
        }
        k(std::move(s2), sv_app(sym_op_of(b.op), {std::move(l), std::move(r)}));
      });
    });
  }

  void exec_seq(State st, const Block* blk, size_t idx, const Cont& done) {
    if (!check_limits(st)) return;
    if (idx >= blk->size()) {
      done(std::move(st));
      return;
    }
    const Stmt& stmt = *(*blk)[idx];
    auto next = [this, blk, idx, &done](State s) { exec_seq(std::move(s), blk, idx + 1, done); };
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Stmt::Assign>) {
            eval(std::move(st), *x.value, [&x, &next](State s, SymValue v) {
              s.scalars[x.name] = std::move(v);
              next(std::move(s));
            });
          } else if constexpr (std::is_same_v<T, Stmt::ArrayStore>) {
            eval(std::move(st), *x.index, [this, &x, &next](State s, SymValue idx_term) {
              eval(std::move(s), *x.value, [this, &x, &next, idx_term](State s2, SymValue v) {
                with_index(std::move(s2), x.array, idx_term,
                           [&x, &next, v](State s3, size_t slot) {
                             s3.arrays.at(x.array)[slot] = v;
                             next(std::move(s3));
                           });
              });
            });
          } else if constexpr (std::is_same_v<T, Stmt::If>) {
            eval(std::move(st), *x.cond, [this, &x, &next](State s, SymValue c) {
              branch(
                  std::move(s), c,
                  [this, &x, &next](State s2) { exec_seq(std::move(s2), &x.then_body, 0, next); },
                  [this, &x, &next](State s2) { exec_seq(std::move(s2), &x.else_body, 0, next); });
            });
          } else if constexpr (std::is_same_v<T, Stmt::While>) {
            exec_while(std::move(st), &stmt, x, next);
          } else {
            if (x.value) {
              eval(std::move(st), *x.value, [this](State s, SymValue v) {
                emit_return(std::move(s), std::move(v));
              });
            } else {
              emit_return(std::move(st), std::nullopt);
            }
          }
        },
        stmt.node);
  }

  void exec_while(State st, const Stmt* key, const Stmt::While& w, const Cont& after) {
    if (!check_limits(st)) return;
    eval(std::move(st), *w.cond, [this, key, &w, &after](State s, SymValue c) {
      branch(
          std::move(s), c,
          [this, key, &w, &after](State s2) {
            int count = s2.loop_counts[key];
            if (count >= budget_.loop_unroll_limit) {
              abandon(s2, SymOutcome::AbandonReason::UnrollLimit);
              return;
            }
            s2.loop_counts[key] = count + 1;
            exec_seq(std::move(s2), &w.body, 0,
                     [this, key, &w, &after](State s3) { exec_while(std::move(s3), key, w, after); });
          },
          [key, &after](State s2) {
            // Counter covers one activation; reset for any later re-entry.
            s2.loop_counts[key] = 0;
            after(std::move(s2));
          });
    });
  }
};

}  // namespace

SymExecResult sym_execute(const Program& p, const SymbolEnv& env,
                          const PathCondition& assumptions, const Budget& budget,
                          const FeasibilityOracle& oracle) {
  (void)assumptions;  // reaches exploration only through the oracle
  Executor ex(p.ast, budget, oracle);
  return ex.run(env);
}

LengthPlan array_length_strategy(const std::string& param, const DomainConstraints& constraints,
                                 int64_t max_len) {
  LengthBounds lb = length_bounds(constraints, param);
  int64_t lo = lb.lo;
  int64_t hi = lb.hi ? std::min(*lb.hi, max_len) : max_len;
  if (lo > hi)
    throw EmptyDomain("no admissible length <= " + std::to_string(max_len) + " for array '" +
                      param + "'");
  LengthPlan plan;
  for (int64_t l = lo; l <= hi; ++l) plan.lengths.push_back(l);
  plan.covers_domain = lb.hi && *lb.hi <= max_len;
  return plan;
}

}  // namespace sep
