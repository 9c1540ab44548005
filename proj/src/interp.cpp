#include "sep/interp.hpp"

#include <sstream>

namespace sep {

namespace {

struct FuelExhausted {};

Value apply_binop(BinOp op, const Value& l, const Value& r) {
  switch (op) {
    case BinOp::Add: return Value(l.as_int() + r.as_int());
    case BinOp::Sub: return Value(l.as_int() - r.as_int());
    case BinOp::Mul: return Value(l.as_int() * r.as_int());
    case BinOp::Div:
      if (r.as_int() == 0) throw EvalException{ExceptionKind::DivByZero};
      return Value(euclid_div(l.as_int(), r.as_int()));
    case BinOp::Mod:
      if (r.as_int() == 0) throw EvalException{ExceptionKind::ModByZero};
      return Value(euclid_mod(l.as_int(), r.as_int()));
    case BinOp::Eq:
      return Value(l.is_bool() ? l.as_bool() == r.as_bool() : l.as_int() == r.as_int());
    case BinOp::Ne:
      return Value(l.is_bool() ? l.as_bool() != r.as_bool() : l.as_int() != r.as_int());
    case BinOp::Lt: return Value(l.as_int() < r.as_int());
    case BinOp::Le: return Value(l.as_int() <= r.as_int());
    case BinOp::Gt: return Value(l.as_int() > r.as_int());
    case BinOp::Ge: return Value(l.as_int() >= r.as_int());
    case BinOp::And:
    case BinOp::Or: break;  // handled by the caller (short circuit)
  }
  throw std::logic_error("apply_binop: unreachable");
}

class Interp {
 public:
  Interp(const FunctionDef& fn, std::map<std::string, Value> env, int64_t fuel)
      : fn_(fn), env_(std::move(env)), fuel_(fuel) {}

  ExecutionOutcome run() {
    try {
      for (const auto& s : fn_.body) {
        if (exec(*s)) return ExecutionOutcome::ret(std::move(returned_), mutations());
      }
      return ExecutionOutcome::ret(Value::unit(), mutations());
    } catch (const EvalException& e) {
      return ExecutionOutcome::exc(e.kind, mutations());
    } catch (const FuelExhausted&) {
      return ExecutionOutcome::exhausted();
    }
  }

 private:
  const FunctionDef& fn_;
  std::map<std::string, Value> env_;
  int64_t fuel_;
  Value returned_;

  void burn() {
    if (--fuel_ < 0) throw FuelExhausted{};
  }

  std::map<std::string, Value> mutations() const {
    std::map<std::string, Value> m;
    for (const auto& p : fn_.params)
      if (p.type == Type::IntArray) m.emplace(p.name, env_.at(p.name));
    return m;
  }

  Value eval(const Expr& e) {
    burn();
    return std::visit(
        [&](const auto& x) -> Value {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Expr::IntLit>) {
            return Value(x.value);
          } else if constexpr (std::is_same_v<T, Expr::BoolLit>) {
            return Value(x.value);
          } else if constexpr (std::is_same_v<T, Expr::Var>) {
            return env_.at(x.name);
          } else if constexpr (std::is_same_v<T, Expr::Unary>) {
            Value v = eval(*x.operand);
            return x.op == UnOp::Neg ? Value(-v.as_int()) : Value(!v.as_bool());
          } else if constexpr (std::is_same_v<T, Expr::Binary>) {
            if (x.op == BinOp::And) {
              Value l = eval(*x.lhs);
              return l.as_bool() ? eval(*x.rhs) : Value(false);
            }
            if (x.op == BinOp::Or) {
              Value l = eval(*x.lhs);
              return l.as_bool() ? Value(true) : eval(*x.rhs);
            }
            Value l = eval(*x.lhs);
            Value r = eval(*x.rhs);
            return apply_binop(x.op, l, r);
          } else if constexpr (std::is_same_v<T, Expr::Index>) {
            Value a = eval(*x.array);
            Value i = eval(*x.index);
            const auto& arr = a.as_array();
            const Int& idx = i.as_int();
            if (idx < 0 || idx >= Int(arr.size()))
              throw EvalException{ExceptionKind::IndexOutOfBounds};
            return Value(arr[(size_t)idx]);
          } else {
            Value a = eval(*x.array);
            return Value(Int(a.as_array().size()));
          }
        },
        e.node);
  }

  // Returns true when a `return` has executed.
  bool exec(const Stmt& s) {
    burn();
    return std::visit(
        [&](const auto& x) -> bool {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Stmt::Assign>) {
            env_[x.name] = eval(*x.value);
            return false;
          } else if constexpr (std::is_same_v<T, Stmt::ArrayStore>) {
            Value i = eval(*x.index);
            Value v = eval(*x.value);
            auto& arr = env_.at(x.array).as_array();
            const Int& idx = i.as_int();
            if (idx < 0 || idx >= Int(arr.size()))
              throw EvalException{ExceptionKind::IndexOutOfBounds};
            arr[(size_t)idx] = v.as_int();
            return false;
          } else if constexpr (std::is_same_v<T, Stmt::If>) {
            const Block& b = eval(*x.cond).as_bool() ? x.then_body : x.else_body;
            for (const auto& st : b)
              if (exec(*st)) return true;
            return false;
          } else if constexpr (std::is_same_v<T, Stmt::While>) {
            while (eval(*x.cond).as_bool()) {
              for (const auto& st : x.body)
                if (exec(*st)) return true;
            }
            return false;
          } else {
            returned_ = x.value ? eval(*x.value) : Value::unit();
            return true;
          }
        },
        s.node);
  }
};

}  // namespace

ExecutionOutcome interpret(const Program& p, const std::vector<Value>& args, int64_t fuel) {
  const FunctionDef& fn = p.ast;
  if (args.size() != fn.params.size())
    throw TypeMismatchError("expected " + std::to_string(fn.params.size()) + " args, got " +
                            std::to_string(args.size()));
  std::map<std::string, Value> env;
  for (size_t i = 0; i < args.size(); ++i) {
    const Param& prm = fn.params[i];
    const Value& v = args[i];
    bool ok = (prm.type == Type::Int && v.is_int()) || (prm.type == Type::Bool && v.is_bool()) ||
              (prm.type == Type::IntArray && v.is_array());
    if (!ok)
      throw TypeMismatchError("argument '" + prm.name + "' must be " + type_name(prm.type));
    env.emplace(prm.name, v);
  }
  if (fuel <= 0) throw TypeMismatchError("fuel must be positive");
  return Interp(fn, std::move(env), fuel).run();
}

Value eval_expr(const Expr& e, const std::map<std::string, Value>& env) {
  return std::visit(
      [&](const auto& x) -> Value {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::IntLit>) {
          return Value(x.value);
        } else if constexpr (std::is_same_v<T, Expr::BoolLit>) {
          return Value(x.value);
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          auto it = env.find(x.name);
          if (it == env.end()) throw std::out_of_range("unbound name " + x.name);
          return it->second;
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          Value v = eval_expr(*x.operand, env);
          return x.op == UnOp::Neg ? Value(-v.as_int()) : Value(!v.as_bool());
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          if (x.op == BinOp::And) {
            return eval_expr(*x.lhs, env).as_bool() ? eval_expr(*x.rhs, env) : Value(false);
          }
          if (x.op == BinOp::Or) {
            return eval_expr(*x.lhs, env).as_bool() ? Value(true) : eval_expr(*x.rhs, env);
          }
          Value l = eval_expr(*x.lhs, env);
          Value r = eval_expr(*x.rhs, env);
          return apply_binop(x.op, l, r);
        } else if constexpr (std::is_same_v<T, Expr::Index>) {
          Value a = eval_expr(*x.array, env);
          Value i = eval_expr(*x.index, env);
          const auto& arr = a.as_array();
          if (i.as_int() < 0 || i.as_int() >= Int(arr.size()))
            throw EvalException{ExceptionKind::IndexOutOfBounds};
          return Value(arr[(size_t)i.as_int()]);
        } else {
          return Value(Int(eval_expr(*x.array, env).as_array().size()));
        }
      },
      e.node);
}

}  // namespace sep
