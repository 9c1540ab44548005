// minismt: a small one-shot SMT-LIB2 solver for quantifier-free integer
// arithmetic with Euclidean div/mod, over stdin/stdout.
//
// Decision procedure: interval bounds are read off the asserted unit
// conjuncts; when every Int symbol is boxed, the box is searched
// exhaustively (magnitude-ordered, so models have small absolute
// values). A box exhausted without a hit is a sound `unsat` because the
// box was implied by the assertions themselves. Symbols the assertions
// do not box are searched under progressive widening and can only yield
// `sat` or `unknown`.
//
// Intended as the solver behind `sep run --solver-cmd`; any SMT-LIB2
// solver (e.g. `z3 -in`) is a drop-in replacement.
#include <chrono>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

// ---------------------------------------------------------------------------
// S-expression reader

struct SExpr {
  bool atom = false;
  std::string text;
  std::vector<SExpr> items;
};

struct Reader {
  const std::string& s;
  size_t i = 0;

  void skip_ws() {
    while (i < s.size()) {
      if (std::isspace((unsigned char)s[i])) {
        ++i;
      } else if (s[i] == ';') {
        while (i < s.size() && s[i] != '\n') ++i;
      } else {
        break;
      }
    }
  }

  bool done() {
    skip_ws();
    return i >= s.size();
  }

  SExpr next() {
    skip_ws();
    SExpr e;
    if (i >= s.size()) return e;
    if (s[i] == '(') {
      ++i;
      while (true) {
        skip_ws();
        if (i >= s.size()) break;
        if (s[i] == ')') {
          ++i;
          break;
        }
        e.items.push_back(next());
      }
      return e;
    }
    e.atom = true;
    size_t j = i;
    while (j < s.size() && !std::isspace((unsigned char)s[j]) && s[j] != '(' && s[j] != ')')
      ++j;
    e.text = s.substr(i, j - i);
    i = j;
    return e;
  }
};

// ---------------------------------------------------------------------------
// Terms

using I128 = __int128;

std::string i128_str(I128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? (unsigned __int128)(-v) : (unsigned __int128)v;
  std::string out;
  while (u) {
    out.insert(out.begin(), char('0' + (int)(u % 10)));
    u /= 10;
  }
  return neg ? "-" + out : out;
}

enum class Op {
  Const, Var, Add, Sub, Mul, Div, Mod, Neg,
  Eq, Distinct, Lt, Le, Gt, Ge, And, Or, Not, BoolConst,
};

struct Term {
  Op op = Op::Const;
  I128 value = 0;       // Const
  bool bvalue = false;  // BoolConst
  int var = -1;         // Var index
  std::vector<std::unique_ptr<Term>> args;
};

struct Problem {
  std::vector<std::string> names;
  std::vector<bool> is_bool;
  std::map<std::string, int> index;
  std::vector<std::unique_ptr<Term>> assertions;
  long timeout_ms = 0;
  bool unsupported = false;
  std::string why;
};

std::unique_ptr<Term> build(const SExpr& e, Problem& p) {
  auto bad = [&](const std::string& why) {
    p.unsupported = true;
    if (p.why.empty()) p.why = why;
    return std::make_unique<Term>();
  };
  if (e.atom) {
    auto t = std::make_unique<Term>();
    if (e.text == "true" || e.text == "false") {
      t->op = Op::BoolConst;
      t->bvalue = e.text == "true";
      return t;
    }
    if (!e.text.empty() && std::isdigit((unsigned char)e.text[0])) {
      if (e.text.size() > 30) return bad("numeral too large");
      t->op = Op::Const;
      I128 v = 0;
      for (char c : e.text) {
        if (!std::isdigit((unsigned char)c)) return bad("bad numeral " + e.text);
        v = v * 10 + (c - '0');
      }
      t->value = v;
      return t;
    }
    auto it = p.index.find(e.text);
    if (it == p.index.end()) return bad("unknown symbol " + e.text);
    t->op = Op::Var;
    t->var = it->second;
    return t;
  }
  if (e.items.empty() || !e.items[0].atom) return bad("bad application");
  const std::string& head = e.items[0].text;
  auto t = std::make_unique<Term>();
  size_t arity = e.items.size() - 1;
  auto take = [&](Op op, size_t lo, size_t hi) {
    t->op = op;
    if (arity < lo || arity > hi) {
      bad("bad arity for " + head);
      return;
    }
    for (size_t k = 1; k < e.items.size(); ++k) t->args.push_back(build(e.items[k], p));
  };
  if (head == "+") take(Op::Add, 2, 16);
  else if (head == "-" && arity == 1) {
    take(Op::Neg, 1, 1);
    // Fold (- 5) into a negative constant so bound scanning sees it.
    if (t->args.size() == 1 && t->args[0]->op == Op::Const) {
      t->value = -t->args[0]->value;
      t->op = Op::Const;
      t->args.clear();
    }
  }
  else if (head == "-") take(Op::Sub, 2, 2);
  else if (head == "*") take(Op::Mul, 2, 16);
  else if (head == "div") take(Op::Div, 2, 2);
  else if (head == "mod") take(Op::Mod, 2, 2);
  else if (head == "=") take(Op::Eq, 2, 2);
  else if (head == "distinct") take(Op::Distinct, 2, 2);
  else if (head == "<") take(Op::Lt, 2, 2);
  else if (head == "<=") take(Op::Le, 2, 2);
  else if (head == ">") take(Op::Gt, 2, 2);
  else if (head == ">=") take(Op::Ge, 2, 2);
  else if (head == "and") take(Op::And, 1, 256);
  else if (head == "or") take(Op::Or, 1, 256);
  else if (head == "not") take(Op::Not, 1, 1);
  else return bad("unsupported operator " + head);
  return t;
}

// ---------------------------------------------------------------------------
// Evaluation

struct EvalError {};

I128 ediv(I128 a, I128 b) {
  I128 q = a / b;
  I128 r = a - b * q;
  if (r < 0) q += (b > 0) ? -1 : 1;
  return q;
}
I128 emod(I128 a, I128 b) {
  I128 r = a % b;
  if (r < 0) r += (b > 0) ? b : -b;
  return r;
}

// Uniform evaluation; booleans are 0/1, so the typed script semantics
// coincide with numeric comparison.
I128 eval(const Term& t, const std::vector<I128>& vals) {
  switch (t.op) {
    case Op::Const: return t.value;
    case Op::BoolConst: return t.bvalue ? 1 : 0;
    case Op::Var: return vals[(size_t)t.var];
    case Op::Add: {
      I128 s = 0;
      for (const auto& a : t.args) s += eval(*a, vals);
      return s;
    }
    case Op::Sub: return eval(*t.args[0], vals) - eval(*t.args[1], vals);
    case Op::Mul: {
      I128 s = 1;
      for (const auto& a : t.args) s *= eval(*a, vals);
      return s;
    }
    case Op::Div: {
      I128 d = eval(*t.args[1], vals);
      if (d == 0) throw EvalError{};
      return ediv(eval(*t.args[0], vals), d);
    }
    case Op::Mod: {
      I128 d = eval(*t.args[1], vals);
      if (d == 0) throw EvalError{};
      return emod(eval(*t.args[0], vals), d);
    }
    case Op::Neg: return -eval(*t.args[0], vals);
    case Op::Eq: return eval(*t.args[0], vals) == eval(*t.args[1], vals) ? 1 : 0;
    case Op::Distinct: return eval(*t.args[0], vals) != eval(*t.args[1], vals) ? 1 : 0;
    case Op::Lt: return eval(*t.args[0], vals) < eval(*t.args[1], vals) ? 1 : 0;
    case Op::Le: return eval(*t.args[0], vals) <= eval(*t.args[1], vals) ? 1 : 0;
    case Op::Gt: return eval(*t.args[0], vals) > eval(*t.args[1], vals) ? 1 : 0;
    case Op::Ge: return eval(*t.args[0], vals) >= eval(*t.args[1], vals) ? 1 : 0;
    case Op::And:
      for (const auto& a : t.args)
        if (eval(*a, vals) == 0) return 0;
      return 1;
    case Op::Or:
      for (const auto& a : t.args)
        if (eval(*a, vals) != 0) return 1;
      return 0;
    case Op::Not: return eval(*t.args[0], vals) == 0 ? 1 : 0;
  }
  throw EvalError{};
}

bool point_satisfies(const Problem& p, const std::vector<I128>& vals) {
  try {
    for (const auto& a : p.assertions)
      if (eval(*a, vals) == 0) return false;
    return true;
  } catch (const EvalError&) {
    // A zero divisor: this solver conservatively rejects the point (the
    // client validates models independently).
    return false;
  }
}

// ---------------------------------------------------------------------------
// Bounds from unit conjuncts

struct Box {
  std::optional<I128> lo, hi;
};

void scan(const Term& t, bool neg, std::vector<Box>& boxes) {
  if (t.op == Op::Not) {
    scan(*t.args[0], !neg, boxes);
    return;
  }
  if ((t.op == Op::And && !neg) || (t.op == Op::Or && neg)) {
    for (const auto& a : t.args) scan(*a, neg, boxes);
    return;
  }
  if (t.args.size() != 2) return;
  Op op = t.op;
  if (neg) {
    switch (op) {
      case Op::Lt: op = Op::Ge; break;
      case Op::Le: op = Op::Gt; break;
      case Op::Gt: op = Op::Le; break;
      case Op::Ge: op = Op::Lt; break;
      case Op::Distinct: op = Op::Eq; break;
      default: return;
    }
  }
  const Term& a = *t.args[0];
  const Term& b = *t.args[1];
  int var = -1;
  I128 c = 0;
  bool var_left;
  if (a.op == Op::Var && b.op == Op::Const) {
    var = a.var;
    c = b.value;
    var_left = true;
  } else if (a.op == Op::Const && b.op == Op::Var) {
    var = b.var;
    c = a.value;
    var_left = false;
  } else {
    return;
  }
  auto set_lo = [&](I128 v) {
    auto& bx = boxes[(size_t)var];
    if (!bx.lo || v > *bx.lo) bx.lo = v;
  };
  auto set_hi = [&](I128 v) {
    auto& bx = boxes[(size_t)var];
    if (!bx.hi || v < *bx.hi) bx.hi = v;
  };
  if (!var_left) {
    switch (op) {
      case Op::Lt: op = Op::Gt; break;
      case Op::Le: op = Op::Ge; break;
      case Op::Gt: op = Op::Lt; break;
      case Op::Ge: op = Op::Le; break;
      default: break;
    }
  }
  switch (op) {
    case Op::Lt: set_hi(c - 1); break;
    case Op::Le: set_hi(c); break;
    case Op::Gt: set_lo(c + 1); break;
    case Op::Ge: set_lo(c); break;
    case Op::Eq: set_lo(c); set_hi(c); break;
    default: break;
  }
}

// ---------------------------------------------------------------------------
// Search

struct Result {
  enum class Kind { Sat, Unsat, Unknown } kind = Kind::Unknown;
  std::vector<I128> model;
};

// Values of [lo, hi] ordered by distance from zero.
std::vector<I128> axis_values(I128 lo, I128 hi, size_t cap) {
  std::vector<I128> vals;
  if (lo > hi) return vals;
  I128 start = 0;
  if (start < lo) start = lo;
  if (start > hi) start = hi;
  vals.push_back(start);
  for (I128 d = 1; (I128)vals.size() < (I128)cap; ++d) {
    bool any = false;
    if (start + d <= hi) {
      vals.push_back(start + d);
      any = true;
    }
    if (start - d >= lo) {
      vals.push_back(start - d);
      any = true;
    }
    if (!any) break;
  }
  return vals;
}

Result solve(const Problem& p, bool boxed_everywhere, const std::vector<Box>& boxes,
             I128 widen, std::chrono::steady_clock::time_point deadline, bool use_deadline) {
  constexpr size_t kCap = 1u << 22;
  std::vector<I128> empty_vals;
  if (p.names.empty())
    return point_satisfies(p, empty_vals) ? Result{Result::Kind::Sat, {}}
                                          : Result{Result::Kind::Unsat, {}};

  std::vector<std::vector<I128>> axes(p.names.size());
  unsigned __int128 grid = 1;
  for (size_t v = 0; v < p.names.size(); ++v) {
    if (p.is_bool[v]) {
      axes[v] = {0, 1};
    } else {
      I128 lo = boxes[v].lo ? *boxes[v].lo : -widen;
      I128 hi = boxes[v].hi ? *boxes[v].hi : widen;
      axes[v] = axis_values(lo, hi, kCap);
      if (axes[v].empty()) return {Result::Kind::Unsat, {}};
    }
    grid *= axes[v].size();
    if (grid > kCap) return {Result::Kind::Unknown, {}};
  }

  std::vector<size_t> cursor(p.names.size(), 0);
  std::vector<I128> vals(p.names.size(), 0);
  size_t checked = 0;
  while (true) {
    for (size_t v = 0; v < p.names.size(); ++v) vals[v] = axes[v][cursor[v]];
    if (point_satisfies(p, vals)) return {Result::Kind::Sat, vals};
    if (++checked % 8192 == 0 && use_deadline &&
        std::chrono::steady_clock::now() > deadline)
      return {Result::Kind::Unknown, {}};
    size_t v = p.names.size();
    bool wrapped = true;
    while (v > 0) {
      --v;
      if (++cursor[v] < axes[v].size()) {
        wrapped = false;
        break;
      }
      cursor[v] = 0;
    }
    if (wrapped)
      return {boxed_everywhere ? Result::Kind::Unsat : Result::Kind::Unknown, {}};
  }
}

}  // namespace

int main() {
  std::string input((std::istreambuf_iterator<char>(std::cin)),
                    std::istreambuf_iterator<char>());
  Reader reader{input};
  Problem p;
  bool answered_sat = false;
  std::vector<I128> model;

  auto t0 = std::chrono::steady_clock::now();

  while (!reader.done()) {
    SExpr cmd = reader.next();
    if (cmd.atom || cmd.items.empty() || !cmd.items[0].atom) continue;
    const std::string& head = cmd.items[0].text;
    if (head == "set-logic" || head == "set-info") continue;
    if (head == "set-option") {
      if (cmd.items.size() == 3 && cmd.items[1].text == ":timeout")
        p.timeout_ms = std::strtol(cmd.items[2].text.c_str(), nullptr, 10);
      continue;
    }
    if (head == "declare-const" && cmd.items.size() == 3 && cmd.items[2].atom) {
      const std::string& sort = cmd.items[2].text;
      if (sort != "Int" && sort != "Bool") {
        p.unsupported = true;
        p.why = "unsupported sort " + sort;
        continue;
      }
      p.index[cmd.items[1].text] = (int)p.names.size();
      p.names.push_back(cmd.items[1].text);
      p.is_bool.push_back(sort == "Bool");
      continue;
    }
    if (head == "declare-fun" && cmd.items.size() == 4 && cmd.items[2].items.empty() &&
        cmd.items[3].atom) {
      p.index[cmd.items[1].text] = (int)p.names.size();
      p.names.push_back(cmd.items[1].text);
      p.is_bool.push_back(cmd.items[3].text == "Bool");
      continue;
    }
    if (head == "assert" && cmd.items.size() == 2) {
      p.assertions.push_back(build(cmd.items[1], p));
      continue;
    }
    if (head == "check-sat") {
      if (p.unsupported) {
        std::cout << "unknown\n" << std::flush;
        continue;
      }
      std::vector<Box> boxes(p.names.size());
      for (const auto& a : p.assertions) scan(*a, false, boxes);
      bool boxed = true;
      for (size_t v = 0; v < p.names.size(); ++v)
        if (!p.is_bool[v] && (!boxes[v].lo || !boxes[v].hi)) boxed = false;

      auto deadline =
          t0 + std::chrono::milliseconds(p.timeout_ms > 0 ? p.timeout_ms : 3600000);
      Result r{Result::Kind::Unknown, {}};
      if (boxed) {
        r = solve(p, true, boxes, 0, deadline, p.timeout_ms > 0);
      } else {
        for (I128 widen : {16, 256, 4096}) {
          r = solve(p, false, boxes, widen, deadline, p.timeout_ms > 0);
          if (r.kind == Result::Kind::Sat) break;
          if (p.timeout_ms > 0 && std::chrono::steady_clock::now() > deadline) break;
        }
      }
      if (r.kind == Result::Kind::Sat) {
        answered_sat = true;
        model = r.model;
        std::cout << "sat\n" << std::flush;
      } else if (r.kind == Result::Kind::Unsat) {
        std::cout << "unsat\n" << std::flush;
      } else {
        std::cout << "unknown\n" << std::flush;
      }
      continue;
    }
    if (head == "get-model") {
      if (!answered_sat) {
        std::cout << "(error \"model is not available\")\n" << std::flush;
        continue;
      }
      std::cout << "(\n";
      for (size_t v = 0; v < p.names.size(); ++v) {
        std::cout << "  (define-fun " << p.names[v] << " () "
                  << (p.is_bool[v] ? "Bool" : "Int") << " ";
        if (p.is_bool[v]) {
          std::cout << (model[v] != 0 ? "true" : "false");
        } else if (model[v] < 0) {
          std::cout << "(- " << i128_str(-model[v]) << ")";
        } else {
          std::cout << i128_str(model[v]);
        }
        std::cout << ")\n";
      }
      std::cout << ")\n" << std::flush;
      continue;
    }
    if (head == "exit") break;
  }
  return 0;
}
