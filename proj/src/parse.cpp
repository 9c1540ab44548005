#include "sep/parse.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace sep {

ParseError::ParseError(std::string message, int line, int column,
                       std::vector<std::string> expected_tokens)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line(line),
      column(column),
      expected(std::move(expected_tokens)) {}

namespace {

enum class Tok {
  Ident, IntLit,
  KwFn, KwInt, KwBool, KwUnit, KwIf, KwElse, KwWhile, KwReturn, KwTrue, KwFalse, KwLen, KwDiv, KwMod,
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Colon, Semi, Comma, Arrow,
  Assign, Eq, Ne, Lt, Le, Gt, Ge, Plus, Minus, Star, AndAnd, OrOr, Bang,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

const std::map<std::string, Tok> kKeywords = {
    {"fn", Tok::KwFn},   {"int", Tok::KwInt},     {"bool", Tok::KwBool},
    {"unit", Tok::KwUnit}, {"if", Tok::KwIf},     {"else", Tok::KwElse},
    {"while", Tok::KwWhile}, {"return", Tok::KwReturn}, {"true", Tok::KwTrue},
    {"false", Tok::KwFalse}, {"len", Tok::KwLen}, {"div", Tok::KwDiv},
    {"mod", Tok::KwMod},
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t j = i;
      while (j < src.size() && (std::isalnum((unsigned char)src[j]) || src[j] == '_')) ++j;
      t.text = src.substr(i, j - i);
      auto it = kKeywords.find(t.text);
      t.kind = it == kKeywords.end() ? Tok::Ident : it->second;
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit((unsigned char)c)) {
      size_t j = i;
      while (j < src.size() && std::isdigit((unsigned char)src[j])) ++j;
      t.kind = Tok::IntLit;
      t.text = src.substr(i, j - i);
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < src.size() && src[i + 1] == b;
    };
    if (two('-', '>')) { t.kind = Tok::Arrow; t.text = "->"; advance(2); }
    else if (two('=', '=')) { t.kind = Tok::Eq; t.text = "=="; advance(2); }
    else if (two('!', '=')) { t.kind = Tok::Ne; t.text = "!="; advance(2); }
    else if (two('<', '=')) { t.kind = Tok::Le; t.text = "<="; advance(2); }
    else if (two('>', '=')) { t.kind = Tok::Ge; t.text = ">="; advance(2); }
    else if (two('&', '&')) { t.kind = Tok::AndAnd; t.text = "&&"; advance(2); }
    else if (two('|', '|')) { t.kind = Tok::OrOr; t.text = "||"; advance(2); }
    else {
      switch (c) {
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case '{': t.kind = Tok::LBrace; break;
        case '}': t.kind = Tok::RBrace; break;
        case '[': t.kind = Tok::LBracket; break;
        case ']': t.kind = Tok::RBracket; break;
        case ':': t.kind = Tok::Colon; break;
        case ';': t.kind = Tok::Semi; break;
        case ',': t.kind = Tok::Comma; break;
        case '=': t.kind = Tok::Assign; break;
        case '<': t.kind = Tok::Lt; break;
        case '>': t.kind = Tok::Gt; break;
        case '+': t.kind = Tok::Plus; break;
        case '-': t.kind = Tok::Minus; break;
        case '*': t.kind = Tok::Star; break;
        case '!': t.kind = Tok::Bang; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", line, col);
      }
      t.text = c;
      advance(1);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.text = "<end>";
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

const char* tok_desc(Tok k) {
  switch (k) {
    case Tok::Ident: return "identifier";
    case Tok::IntLit: return "integer literal";
    case Tok::End: return "end of input";
    default: return nullptr;
  }
}

class Parser {
 public:
  Parser(std::vector<Token> toks, bool allow_chained)
      : toks_(std::move(toks)), allow_chained_(allow_chained) {}

  FunctionDef parse_function() {
    expect(Tok::KwFn, "fn");
    FunctionDef f = parse_header_rest();
    f.body = parse_block();
    if (cur().kind == Tok::KwFn)
      throw ParseError("duplicate function definition", cur().line, cur().col);
    expect(Tok::End, "end of input");
    return f;
  }

  FunctionDef parse_signature_only() {
    expect(Tok::KwFn, "fn");
    FunctionDef f = parse_header_rest();
    if (cur().kind == Tok::Semi) next();
    expect(Tok::End, "end of input");
    return f;
  }

  // Expression entry point for constraints; returns conjuncts (chains split).
  std::vector<ExprPtr> parse_expr_toplevel() {
    std::vector<ExprPtr> conjuncts;
    parse_or_into(conjuncts, /*split_and=*/true);
    expect(Tok::End, "end of input");
    return conjuncts;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  bool allow_chained_ = false;

  const Token& cur() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool accept(Tok k) {
    if (at(k)) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expected " + what + ", got '" + cur().text + "'", cur().line, cur().col,
                     {what});
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) fail(what);
  }

  FunctionDef parse_header_rest() {
    FunctionDef f;
    if (!at(Tok::Ident)) fail("function name");
    f.name = next().text;
    expect(Tok::LParen, "(");
    if (!at(Tok::RParen)) {
      do {
        Param p;
        if (!at(Tok::Ident)) fail("parameter name");
        p.name = next().text;
        expect(Tok::Colon, ":");
        p.type = parse_param_type();
        f.params.push_back(std::move(p));
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, ")");
    expect(Tok::Arrow, "->");
    if (accept(Tok::KwInt)) {
      f.return_type = Type::Int;
    } else if (accept(Tok::KwBool)) {
      f.return_type = Type::Bool;
    } else if (accept(Tok::KwUnit)) {
      f.return_type = Type::Unit;
    } else {
      fail("return type (int, bool or unit)");
    }
    return f;
  }

  Type parse_param_type() {
    if (accept(Tok::KwInt)) {
      if (accept(Tok::LBracket)) {
        expect(Tok::RBracket, "]");
        return Type::IntArray;
      }
      return Type::Int;
    }
    if (accept(Tok::KwBool)) return Type::Bool;
    fail("parameter type (int, bool or int[])");
  }

  Block parse_block() {
    expect(Tok::LBrace, "{");
    Block b;
    while (!accept(Tok::RBrace)) b.push_back(parse_stmt());
    return b;
  }

  StmtPtr parse_stmt() {
    if (at(Tok::KwIf)) return parse_if();
    if (accept(Tok::KwWhile)) {
      expect(Tok::LParen, "(");
      ExprPtr cond = parse_single_expr();
      expect(Tok::RParen, ")");
      Block body = parse_block();
      return std::make_shared<Stmt>(Stmt{Stmt::While{std::move(cond), std::move(body)}});
    }
    if (accept(Tok::KwReturn)) {
      ExprPtr value;
      if (!at(Tok::Semi)) value = parse_single_expr();
      expect(Tok::Semi, ";");
      return std::make_shared<Stmt>(Stmt{Stmt::Return{std::move(value)}});
    }
    if (at(Tok::Ident)) {
      std::string name = next().text;
      if (accept(Tok::LBracket)) {
        ExprPtr index = parse_single_expr();
        expect(Tok::RBracket, "]");
        expect(Tok::Assign, "=");
        ExprPtr value = parse_single_expr();
        expect(Tok::Semi, ";");
        return std::make_shared<Stmt>(
            Stmt{Stmt::ArrayStore{std::move(name), std::move(index), std::move(value)}});
      }
      expect(Tok::Assign, "=");
      ExprPtr value = parse_single_expr();
      expect(Tok::Semi, ";");
      return std::make_shared<Stmt>(Stmt{Stmt::Assign{std::move(name), std::move(value)}});
    }
    fail("statement");
  }

  StmtPtr parse_if() {
    expect(Tok::KwIf, "if");
    expect(Tok::LParen, "(");
    ExprPtr cond = parse_single_expr();
    expect(Tok::RParen, ")");
    Block then_body = parse_block();
    Block else_body;
    if (accept(Tok::KwElse)) {
      if (at(Tok::KwIf)) {
        else_body.push_back(parse_if());
      } else {
        else_body = parse_block();
      }
    }
    return std::make_shared<Stmt>(
        Stmt{Stmt::If{std::move(cond), std::move(then_body), std::move(else_body)}});
  }

  ExprPtr parse_single_expr() {
    std::vector<ExprPtr> cs;
    ExprPtr e = parse_or(cs);
    // cs is non-empty only for a parenthesized chain in constraint mode.
    return fold_chain(std::move(cs), std::move(e));
  }

  void parse_or_into(std::vector<ExprPtr>& conjuncts, bool split_and) {
    std::vector<ExprPtr> side;
    ExprPtr e = parse_or(side);
    if (split_and && !side.empty()) {
      // Chain links become separate conjuncts only at the top level.
      for (auto& c : side) conjuncts.push_back(std::move(c));
      conjuncts.push_back(std::move(e));
      return;
    }
    for (auto& c : side) e = make_binary(BinOp::And, std::move(c), std::move(e));
    if (split_and) {
      split_top_and(std::move(e), conjuncts);
    } else {
      conjuncts.push_back(std::move(e));
    }
  }

  static void split_top_and(ExprPtr e, std::vector<ExprPtr>& out) {
    if (const auto* b = std::get_if<Expr::Binary>(&e->node); b && b->op == BinOp::And) {
      split_top_and(b->lhs, out);
      split_top_and(b->rhs, out);
      return;
    }
    out.push_back(std::move(e));
  }

  // `extra` collects the leading links of a chained comparison; the
  // returned expression is the final link.
  ExprPtr parse_or(std::vector<ExprPtr>& extra) {
    ExprPtr e = parse_and(extra);
    while (accept(Tok::OrOr)) {
      std::vector<ExprPtr> rhs_extra;
      ExprPtr r = parse_and(rhs_extra);
      r = fold_chain(std::move(rhs_extra), std::move(r));
      e = fold_chain(std::move(extra), std::move(e));
      extra.clear();
      e = make_binary(BinOp::Or, std::move(e), std::move(r));
    }
    return e;
  }

  ExprPtr parse_and(std::vector<ExprPtr>& extra) {
    ExprPtr e = parse_cmp(extra);
    while (accept(Tok::AndAnd)) {
      std::vector<ExprPtr> rhs_extra;
      ExprPtr r = parse_cmp(rhs_extra);
      r = fold_chain(std::move(rhs_extra), std::move(r));
      e = fold_chain(std::move(extra), std::move(e));
      extra.clear();
      e = make_binary(BinOp::And, std::move(e), std::move(r));
    }
    return e;
  }

  static ExprPtr fold_chain(std::vector<ExprPtr> links, ExprPtr last) {
    for (auto it = links.rbegin(); it != links.rend(); ++it)
      last = make_binary(BinOp::And, std::move(*it), std::move(last));
    return last;
  }

  static std::optional<BinOp> cmp_op(Tok k) {
    switch (k) {
      case Tok::Eq: return BinOp::Eq;
      case Tok::Ne: return BinOp::Ne;
      case Tok::Lt: return BinOp::Lt;
      case Tok::Le: return BinOp::Le;
      case Tok::Gt: return BinOp::Gt;
      case Tok::Ge: return BinOp::Ge;
      default: return std::nullopt;
    }
  }

  ExprPtr parse_cmp(std::vector<ExprPtr>& extra) {
    ExprPtr e = parse_add();
    auto op = cmp_op(cur().kind);
    if (!op) return e;
    next();
    ExprPtr rhs = parse_add();
    ExprPtr link = make_binary(*op, e, rhs);
    auto op2 = cmp_op(cur().kind);
    if (!op2) return link;
    if (!allow_chained_)
      throw ParseError("chained comparisons are not allowed here", cur().line, cur().col);
    while (op2) {
      next();
      extra.push_back(std::move(link));
      ExprPtr rhs2 = parse_add();
      link = make_binary(*op2, rhs, rhs2);
      rhs = rhs2;
      op2 = cmp_op(cur().kind);
    }
    return link;
  }

  ExprPtr parse_add() {
    ExprPtr e = parse_mul();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      BinOp op = at(Tok::Plus) ? BinOp::Add : BinOp::Sub;
      next();
      e = make_binary(op, std::move(e), parse_mul());
    }
    return e;
  }

  ExprPtr parse_mul() {
    ExprPtr e = parse_unary();
    while (at(Tok::Star) || at(Tok::KwDiv) || at(Tok::KwMod)) {
      BinOp op = at(Tok::Star) ? BinOp::Mul : (at(Tok::KwDiv) ? BinOp::Div : BinOp::Mod);
      next();
      e = make_binary(op, std::move(e), parse_unary());
    }
    return e;
  }

  ExprPtr parse_unary() {
    if (accept(Tok::Minus)) return make_unary(UnOp::Neg, parse_unary());
    if (accept(Tok::Bang)) return make_unary(UnOp::Not, parse_unary());
    return parse_postfix();
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_primary();
    while (accept(Tok::LBracket)) {
      ExprPtr idx = parse_single_expr();
      expect(Tok::RBracket, "]");
      e = make_index(std::move(e), std::move(idx));
    }
    return e;
  }

  ExprPtr parse_primary() {
    if (at(Tok::IntLit)) return make_int(Int(next().text));
    if (accept(Tok::KwTrue)) return make_bool(true);
    if (accept(Tok::KwFalse)) return make_bool(false);
    if (accept(Tok::KwLen)) {
      expect(Tok::LParen, "(");
      ExprPtr a = parse_single_expr();
      expect(Tok::RParen, ")");
      return make_len(std::move(a));
    }
    if (at(Tok::Ident)) return make_var(next().text);
    if (accept(Tok::LParen)) {
      ExprPtr e = parse_single_expr();
      expect(Tok::RParen, ")");
      return e;
    }
    fail("expression");
  }
};

// ---------------------------------------------------------------------------
// Static checks: definite assignment and typing.

struct CheckError {
  std::string message;
};

class Checker {
 public:
  explicit Checker(const FunctionDef& f) : fn_(f) {
    for (const auto& p : f.params) {
      if (types_.count(p.name)) throw CheckError{"duplicate parameter '" + p.name + "'"};
      if (p.type == Type::Unit) throw CheckError{"unit is not a parameter type"};
      types_[p.name] = p.type;
      defined_.insert(p.name);
    }
  }

  void run() {
    std::set<std::string> defined = defined_;
    check_block(fn_.body, defined);
  }

 private:
  const FunctionDef& fn_;
  std::map<std::string, Type> types_;
  std::set<std::string> defined_;

  Type type_of(const Expr& e, const std::set<std::string>& defined) {
    return std::visit(
        [&](const auto& x) -> Type {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Expr::IntLit>) {
            return Type::Int;
          } else if constexpr (std::is_same_v<T, Expr::BoolLit>) {
            return Type::Bool;
          } else if constexpr (std::is_same_v<T, Expr::Var>) {
            auto it = types_.find(x.name);
            if (it == types_.end() || !defined.count(x.name))
              throw CheckError{"unknown identifier '" + x.name + "'"};
            return it->second;
          } else if constexpr (std::is_same_v<T, Expr::Unary>) {
            Type t = type_of(*x.operand, defined);
            if (x.op == UnOp::Neg && t != Type::Int)
              throw CheckError{"operator '-' needs an int operand"};
            if (x.op == UnOp::Not && t != Type::Bool)
              throw CheckError{"operator '!' needs a bool operand"};
            return t;
          } else if constexpr (std::is_same_v<T, Expr::Binary>) {
            Type l = type_of(*x.lhs, defined);
            Type r = type_of(*x.rhs, defined);
            switch (x.op) {
              case BinOp::Add: case BinOp::Sub: case BinOp::Mul:
              case BinOp::Div: case BinOp::Mod:
                if (l != Type::Int || r != Type::Int)
                  throw CheckError{std::string("operator '") + binop_symbol(x.op) +
                                   "' needs int operands"};
                return Type::Int;
              case BinOp::Lt: case BinOp::Le: case BinOp::Gt: case BinOp::Ge:
                if (l != Type::Int || r != Type::Int)
                  throw CheckError{std::string("operator '") + binop_symbol(x.op) +
                                   "' needs int operands"};
                return Type::Bool;
              case BinOp::Eq: case BinOp::Ne:
                if (l != r || l == Type::IntArray)
                  throw CheckError{"'==' and '!=' compare two ints or two bools"};
                return Type::Bool;
              case BinOp::And: case BinOp::Or:
                if (l != Type::Bool || r != Type::Bool)
                  throw CheckError{std::string("operator '") + binop_symbol(x.op) +
                                   "' needs bool operands"};
                return Type::Bool;
            }
            throw CheckError{"bad operator"};
          } else if constexpr (std::is_same_v<T, Expr::Index>) {
            if (type_of(*x.array, defined) != Type::IntArray)
              throw CheckError{"indexing a non-array value"};
            if (type_of(*x.index, defined) != Type::Int)
              throw CheckError{"array index must be an int"};
            return Type::Int;
          } else {
            if (type_of(*x.array, defined) != Type::IntArray)
              throw CheckError{"len() needs an array argument"};
            return Type::Int;
          }
        },
        e.node);
  }

  void check_block(const Block& b, std::set<std::string>& defined) {
    for (const auto& s : b) check_stmt(*s, defined);
  }

  void check_stmt(const Stmt& s, std::set<std::string>& defined) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Stmt::Assign>) {
            Type t = type_of(*x.value, defined);
            if (t == Type::IntArray) throw CheckError{"arrays cannot be reassigned"};
            auto it = types_.find(x.name);
            if (it == types_.end()) {
              types_[x.name] = t;
            } else if (it->second != t) {
              throw CheckError{"'" + x.name + "' changes type from " +
                               type_name(it->second) + " to " + type_name(t)};
            }
            defined.insert(x.name);
          } else if constexpr (std::is_same_v<T, Stmt::ArrayStore>) {
            auto it = types_.find(x.array);
            if (it == types_.end() || !defined.count(x.array))
              throw CheckError{"unknown identifier '" + x.array + "'"};
            if (it->second != Type::IntArray)
              throw CheckError{"'" + x.array + "' is not an array"};
            if (type_of(*x.index, defined) != Type::Int)
              throw CheckError{"array index must be an int"};
            if (type_of(*x.value, defined) != Type::Int)
              throw CheckError{"array elements are ints"};
          } else if constexpr (std::is_same_v<T, Stmt::If>) {
            if (type_of(*x.cond, defined) != Type::Bool)
              throw CheckError{"if condition must be a bool"};
            std::set<std::string> then_defined = defined;
            check_block(x.then_body, then_defined);
            std::set<std::string> else_defined = defined;
            check_block(x.else_body, else_defined);
            // Only names assigned on both arms are definitely assigned after.
            for (const auto& n : then_defined)
              if (else_defined.count(n)) defined.insert(n);
          } else if constexpr (std::is_same_v<T, Stmt::While>) {
            if (type_of(*x.cond, defined) != Type::Bool)
              throw CheckError{"while condition must be a bool"};
            std::set<std::string> body_defined = defined;
            check_block(x.body, body_defined);  // zero iterations possible
          } else {
            if (x.value) {
              Type t = type_of(*x.value, defined);
              if (t != fn_.return_type)
                throw CheckError{std::string("returning ") + type_name(t) + " from a " +
                                 type_name(fn_.return_type) + " function"};
            } else if (fn_.return_type != Type::Unit) {
              throw CheckError{"bare return in a non-unit function"};
            }
          }
        },
        s.node);
  }
};

void reject_arrays_in_constraint(const Expr& e) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Index>) {
          throw ParseError("array element references are not allowed in constraints", 0, 0);
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          reject_arrays_in_constraint(*x.operand);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          reject_arrays_in_constraint(*x.lhs);
          reject_arrays_in_constraint(*x.rhs);
        } else if constexpr (std::is_same_v<T, Expr::Len>) {
          if (!std::holds_alternative<Expr::Var>(x.array->node))
            throw ParseError("len() in constraints takes a parameter name", 0, 0);
        }
      },
      e.node);
}

}  // namespace

Program parse(const std::string& source, const std::string& id, int generation_index) {
  Parser p(lex(source), /*allow_chained=*/false);
  FunctionDef f = p.parse_function();
  try {
    Checker(f).run();
  } catch (const CheckError& e) {
    throw ParseError(e.message, 1, 1);
  }
  Program prog;
  prog.id = id;
  prog.source = source;
  prog.ast = std::move(f);
  prog.generation_index = generation_index;
  return prog;
}

std::vector<ExprPtr> parse_bool_expr(const std::string& source,
                                     const std::vector<Param>& params, bool allow_chained) {
  Parser p(lex(source), allow_chained);
  std::vector<ExprPtr> conjuncts = p.parse_expr_toplevel();

  // Type-check each conjunct against a synthetic parameter-only function.
  FunctionDef probe;
  probe.params = params;
  probe.return_type = Type::Unit;
  for (const auto& c : conjuncts) {
    reject_arrays_in_constraint(*c);
    probe.body.clear();
    probe.body.push_back(std::make_shared<Stmt>(Stmt{Stmt::If{c, {}, {}}}));
    try {
      Checker(probe).run();
    } catch (const CheckError& e) {
      throw ParseError(e.message + " (in constraint '" + source + "')", 1, 1);
    }
  }
  return conjuncts;
}

FunctionDef parse_signature(const std::string& source) {
  Parser p(lex(source), /*allow_chained=*/false);
  return p.parse_signature_only();
}

std::vector<std::string> tokenize(const std::string& source) {
  std::vector<std::string> out;
  for (const Token& t : lex(source))
    if (t.kind != Tok::End) out.push_back(t.text);
  return out;
}

}  // namespace sep
