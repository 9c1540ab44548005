#include "sep/symval.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>

namespace sep {

SymOp sym_op_of(BinOp op) {
  switch (op) {
    case BinOp::Add: return SymOp::Add;
    case BinOp::Sub: return SymOp::Sub;
    case BinOp::Mul: return SymOp::Mul;
    case BinOp::Div: return SymOp::Div;
    case BinOp::Mod: return SymOp::Mod;
    case BinOp::Eq: return SymOp::Eq;
    case BinOp::Ne: return SymOp::Ne;
    case BinOp::Lt: return SymOp::Lt;
    case BinOp::Le: return SymOp::Le;
    case BinOp::Gt: return SymOp::Gt;
    case BinOp::Ge: return SymOp::Ge;
    case BinOp::And: return SymOp::And;
    case BinOp::Or: return SymOp::Or;
  }
  throw std::logic_error("sym_op_of");
}

SymOp sym_op_of(UnOp op) { return op == UnOp::Neg ? SymOp::Neg : SymOp::Not; }

const char* sym_op_name(SymOp op) {
  switch (op) {
    case SymOp::Add: return "+";
    case SymOp::Sub: return "-";
    case SymOp::Mul: return "*";
    case SymOp::Div: return "div";
    case SymOp::Mod: return "mod";
    case SymOp::Eq: return "=";
    case SymOp::Ne: return "!=";
    case SymOp::Lt: return "<";
    case SymOp::Le: return "<=";
    case SymOp::Gt: return ">";
    case SymOp::Ge: return ">=";
    case SymOp::And: return "and";
    case SymOp::Or: return "or";
    case SymOp::Neg: return "neg";
    case SymOp::Not: return "not";
  }
  return "?";
}

namespace {

Type result_type(SymOp op) {
  switch (op) {
    case SymOp::Add: case SymOp::Sub: case SymOp::Mul:
    case SymOp::Div: case SymOp::Mod: case SymOp::Neg:
      return Type::Int;
    default:
      return Type::Bool;
  }
}

Value fold(SymOp op, const std::vector<Value>& vs) {
  switch (op) {
    case SymOp::Add: return Value(vs[0].as_int() + vs[1].as_int());
    case SymOp::Sub: return Value(vs[0].as_int() - vs[1].as_int());
    case SymOp::Mul: return Value(vs[0].as_int() * vs[1].as_int());
    case SymOp::Div:
      assert(vs[1].as_int() != 0);
      return Value(euclid_div(vs[0].as_int(), vs[1].as_int()));
    case SymOp::Mod:
      assert(vs[1].as_int() != 0);
      return Value(euclid_mod(vs[0].as_int(), vs[1].as_int()));
    case SymOp::Eq:
      return Value(vs[0].is_bool() ? vs[0].as_bool() == vs[1].as_bool()
                                   : vs[0].as_int() == vs[1].as_int());
    case SymOp::Ne:
      return Value(vs[0].is_bool() ? vs[0].as_bool() != vs[1].as_bool()
                                   : vs[0].as_int() != vs[1].as_int());
    case SymOp::Lt: return Value(vs[0].as_int() < vs[1].as_int());
    case SymOp::Le: return Value(vs[0].as_int() <= vs[1].as_int());
    case SymOp::Gt: return Value(vs[0].as_int() > vs[1].as_int());
    case SymOp::Ge: return Value(vs[0].as_int() >= vs[1].as_int());
    case SymOp::And: return Value(vs[0].as_bool() && vs[1].as_bool());
    case SymOp::Or: return Value(vs[0].as_bool() || vs[1].as_bool());
    case SymOp::Neg: return Value(-vs[0].as_int());
    case SymOp::Not: return Value(!vs[0].as_bool());
  }
  throw std::logic_error("fold");
}

}  // namespace

SymValue sv_const(Value v) {
  Type t = v.is_bool() ? Type::Bool : Type::Int;
  return std::make_shared<SymTerm>(SymTerm{SymTerm::Const{std::move(v)}, t});
}

SymValue sv_int(Int v) { return sv_const(Value(std::move(v))); }
SymValue sv_bool(bool v) { return sv_const(Value(v)); }

SymValue sv_sym(std::string name, Type type) {
  return std::make_shared<SymTerm>(SymTerm{SymTerm::Sym{std::move(name), type}, type});
}

SymValue sv_app(SymOp op, std::vector<SymValue> args) {
  bool all_const = true;
  for (const auto& a : args) all_const &= a->is_const();
  if (all_const) {
    std::vector<Value> vs;
    vs.reserve(args.size());
    for (const auto& a : args) vs.push_back(a->const_value());
    return sv_const(fold(op, vs));
  }
  // A few unit simplifications keep path conditions small.
  if (op == SymOp::And) {
    if (args[0]->is_const()) return args[0]->const_value().as_bool() ? args[1] : sv_bool(false);
    if (args[1]->is_const()) return args[1]->const_value().as_bool() ? args[0] : sv_bool(false);
  }
  if (op == SymOp::Or) {
    if (args[0]->is_const()) return args[0]->const_value().as_bool() ? sv_bool(true) : args[1];
    if (args[1]->is_const()) return args[1]->const_value().as_bool() ? sv_bool(true) : args[0];
  }
  if (op == SymOp::Not) {
    if (const auto* app = std::get_if<SymTerm::App>(&args[0]->node);
        app && app->op == SymOp::Not)
      return app->args[0];
  }
  if ((op == SymOp::Eq || op == SymOp::Le || op == SymOp::Ge) && args.size() == 2 &&
      term_equal(args[0], args[1]))
    return sv_bool(true);
  Type t = result_type(op);
  return std::make_shared<SymTerm>(SymTerm{SymTerm::App{op, std::move(args)}, t});
}

SymValue sv_not(SymValue a) { return sv_app(SymOp::Not, {std::move(a)}); }

std::string term_to_string(const SymTerm& t) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SymTerm::Const>) {
          return x.value.to_string();
        } else if constexpr (std::is_same_v<T, SymTerm::Sym>) {
          return x.name;
        } else {
          std::ostringstream os;
          os << "(" << sym_op_name(x.op);
          for (const auto& a : x.args) os << " " << term_to_string(*a);
          os << ")";
          return os.str();
        }
      },
      t.node);
}

bool term_equal(const SymValue& a, const SymValue& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, SymTerm::Const>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, SymTerm::Sym>) {
          return x.name == y.name && x.type == y.type;
        } else {
          if (x.op != y.op || x.args.size() != y.args.size()) return false;
          for (size_t i = 0; i < x.args.size(); ++i)
            if (!term_equal(x.args[i], y.args[i])) return false;
          return true;
        }
      },
      a->node);
}

Value eval_term(const SymTerm& t, const std::map<std::string, Value>& model) {
  return std::visit(
      [&](const auto& x) -> Value {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SymTerm::Const>) {
          return x.value;
        } else if constexpr (std::is_same_v<T, SymTerm::Sym>) {
          auto it = model.find(x.name);
          if (it == model.end()) throw std::out_of_range("model misses symbol " + x.name);
          return it->second;
        } else {
          if (x.op == SymOp::Div || x.op == SymOp::Mod) {
            Value d = eval_term(*x.args[1], model);
            if (d.as_int() == 0)
              throw std::domain_error("zero divisor outside its guarding path");
            Value n = eval_term(*x.args[0], model);
            return x.op == SymOp::Div ? Value(euclid_div(n.as_int(), d.as_int()))
                                      : Value(euclid_mod(n.as_int(), d.as_int()));
          }
          std::vector<Value> vs;
          vs.reserve(x.args.size());
          for (const auto& a : x.args) vs.push_back(eval_term(*a, model));
          return fold(x.op, vs);
        }
      },
      t.node);
}

void collect_symbols(const SymTerm& t, std::map<std::string, Type>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SymTerm::Sym>) {
          out.emplace(x.name, x.type);
        } else if constexpr (std::is_same_v<T, SymTerm::App>) {
          for (const auto& a : x.args) collect_symbols(*a, out);
        }
      },
      t.node);
}

void PathCondition::append(SymValue c) {
  if (c->is_const() && c->const_value().as_bool()) return;
  conjuncts.push_back(std::move(c));
}

bool PathCondition::is_literally_false() const {
  for (const auto& c : conjuncts)
    if (c->is_const() && !c->const_value().as_bool()) return true;
  return false;
}

PathCondition PathCondition::with(SymValue c) const {
  PathCondition pc = *this;
  pc.append(std::move(c));
  return pc;
}

std::map<std::string, Type> PathCondition::symbols() const {
  std::map<std::string, Type> out;
  for (const auto& c : conjuncts) collect_symbols(*c, out);
  return out;
}

std::string PathCondition::to_string() const {
  if (conjuncts.empty()) return "true";
  std::ostringstream os;
  for (size_t i = 0; i < conjuncts.size(); ++i) {
    if (i) os << " & ";
    os << term_to_string(*conjuncts[i]);
  }
  return os.str();
}

bool pc_holds(const PathCondition& pc, const std::map<std::string, Value>& model) {
  for (const auto& c : pc.conjuncts)
    if (!eval_term(*c, model).as_bool()) return false;
  return true;
}

}  // namespace sep
