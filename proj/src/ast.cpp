#include "sep/ast.hpp"

#include <sstream>

namespace sep {

const char* type_name(Type t) {
  switch (t) {
    case Type::Int: return "int";
    case Type::Bool: return "bool";
    case Type::IntArray: return "int[]";
    case Type::Unit: return "unit";
  }
  return "?";
}

const char* binop_symbol(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "div";
    case BinOp::Mod: return "mod";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
  }
  return "?";
}

const char* unop_symbol(UnOp op) { return op == UnOp::Neg ? "-" : "!"; }

bool binop_is_comparison(BinOp op) {
  switch (op) {
    case BinOp::Eq:
    case BinOp::Ne:
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: return true;
    default: return false;
  }
}

ExprPtr make_int(Int v) { return std::make_shared<Expr>(Expr{Expr::IntLit{std::move(v)}}); }
ExprPtr make_bool(bool v) { return std::make_shared<Expr>(Expr{Expr::BoolLit{v}}); }
ExprPtr make_var(std::string name) { return std::make_shared<Expr>(Expr{Expr::Var{std::move(name)}}); }
ExprPtr make_unary(UnOp op, ExprPtr e) { return std::make_shared<Expr>(Expr{Expr::Unary{op, std::move(e)}}); }
ExprPtr make_binary(BinOp op, ExprPtr l, ExprPtr r) {
  return std::make_shared<Expr>(Expr{Expr::Binary{op, std::move(l), std::move(r)}});
}
ExprPtr make_index(ExprPtr a, ExprPtr i) { return std::make_shared<Expr>(Expr{Expr::Index{std::move(a), std::move(i)}}); }
ExprPtr make_len(ExprPtr a) { return std::make_shared<Expr>(Expr{Expr::Len{std::move(a)}}); }

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Expr::IntLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Expr::BoolLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          return x.op == y.op && expr_equal(*x.operand, *y.operand);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          return x.op == y.op && expr_equal(*x.lhs, *y.lhs) && expr_equal(*x.rhs, *y.rhs);
        } else if constexpr (std::is_same_v<T, Expr::Index>) {
          return expr_equal(*x.array, *y.array) && expr_equal(*x.index, *y.index);
        } else {
          return expr_equal(*x.array, *y.array);
        }
      },
      a.node);
}

bool block_equal(const Block& a, const Block& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!stmt_equal(*a[i], *b[i])) return false;
  return true;
}

bool stmt_equal(const Stmt& a, const Stmt& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Stmt::Assign>) {
          return x.name == y.name && expr_equal(*x.value, *y.value);
        } else if constexpr (std::is_same_v<T, Stmt::ArrayStore>) {
          return x.array == y.array && expr_equal(*x.index, *y.index) &&
                 expr_equal(*x.value, *y.value);
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          return expr_equal(*x.cond, *y.cond) && block_equal(x.then_body, y.then_body) &&
                 block_equal(x.else_body, y.else_body);
        } else if constexpr (std::is_same_v<T, Stmt::While>) {
          return expr_equal(*x.cond, *y.cond) && block_equal(x.body, y.body);
        } else {
          if (!x.value != !y.value) return false;
          return !x.value || expr_equal(*x.value, *y.value);
        }
      },
      a.node);
}

bool function_equal(const FunctionDef& a, const FunctionDef& b) {
  return a.name == b.name && a.params == b.params && a.return_type == b.return_type &&
         block_equal(a.body, b.body);
}

namespace {

// Larger binds tighter. Matches the grammar in docs/grammar.md.
int precedence(BinOp op) {
  switch (op) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Eq:
    case BinOp::Ne:
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: return 3;
    case BinOp::Add:
    case BinOp::Sub: return 4;
    case BinOp::Mul:
    case BinOp::Div:
    case BinOp::Mod: return 5;
  }
  return 0;
}

void print_expr_prec(std::ostream& os, const Expr& e, int parent_prec) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::IntLit>) {
          os << x.value.str();
        } else if constexpr (std::is_same_v<T, Expr::BoolLit>) {
          os << (x.value ? "true" : "false");
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          os << x.name;
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          os << unop_symbol(x.op);
          // Parenthesize any non-atomic operand so -- never appears; a
          // negative literal under Neg counts as non-atomic for the
          // same reason.
          const auto* lit = std::get_if<Expr::IntLit>(&x.operand->node);
          const bool atomic = (lit && lit->value >= 0) ||
                              std::holds_alternative<Expr::BoolLit>(x.operand->node) ||
                              std::holds_alternative<Expr::Var>(x.operand->node) ||
                              std::holds_alternative<Expr::Index>(x.operand->node) ||
                              std::holds_alternative<Expr::Len>(x.operand->node);
          if (atomic) {
            print_expr_prec(os, *x.operand, 6);
          } else {
            os << "(";
            print_expr_prec(os, *x.operand, 0);
            os << ")";
          }
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          int p = precedence(x.op);
          bool need = p < parent_prec;
          if (need) os << "(";
          print_expr_prec(os, *x.lhs, p);
          os << " " << binop_symbol(x.op) << " ";
          // Left-associative chains: right child needs strictly higher prec.
          print_expr_prec(os, *x.rhs, p + 1);
          if (need) os << ")";
        } else if constexpr (std::is_same_v<T, Expr::Index>) {
          print_expr_prec(os, *x.array, 6);
          os << "[";
          print_expr_prec(os, *x.index, 0);
          os << "]";
        } else {
          os << "len(";
          print_expr_prec(os, *x.array, 0);
          os << ")";
        }
      },
      e.node);
}

void print_block(std::ostream& os, const Block& b, int indent);

void print_stmt(std::ostream& os, const Stmt& s, int indent) {
  std::string pad(indent, ' ');
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Stmt::Assign>) {
          os << pad << x.name << " = ";
          print_expr_prec(os, *x.value, 0);
          os << ";\n";
        } else if constexpr (std::is_same_v<T, Stmt::ArrayStore>) {
          os << pad << x.array << "[";
          print_expr_prec(os, *x.index, 0);
          os << "] = ";
          print_expr_prec(os, *x.value, 0);
          os << ";\n";
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          os << pad << "if (";
          print_expr_prec(os, *x.cond, 0);
          os << ") {\n";
          print_block(os, x.then_body, indent + 4);
          os << pad << "}";
          if (!x.else_body.empty()) {
            // Collapse a single nested if into `else if`.
            if (x.else_body.size() == 1 &&
                std::holds_alternative<Stmt::If>(x.else_body[0]->node)) {
              os << " else ";
              std::ostringstream nested;
              print_stmt(nested, *x.else_body[0], indent);
              std::string text = nested.str();
              os << text.substr(indent);  // drop the duplicated pad
              return;
            }
            os << " else {\n";
            print_block(os, x.else_body, indent + 4);
            os << pad << "}";
          }
          os << "\n";
        } else if constexpr (std::is_same_v<T, Stmt::While>) {
          os << pad << "while (";
          print_expr_prec(os, *x.cond, 0);
          os << ") {\n";
          print_block(os, x.body, indent + 4);
          os << pad << "}\n";
        } else {
          os << pad << "return";
          if (x.value) {
            os << " ";
            print_expr_prec(os, *x.value, 0);
          }
          os << ";\n";
        }
      },
      s.node);
}

void print_block(std::ostream& os, const Block& b, int indent) {
  for (const auto& s : b) print_stmt(os, *s, indent);
}

}  // namespace

std::string print_expr(const Expr& e) {
  std::ostringstream os;
  print_expr_prec(os, e, 0);
  return os.str();
}

std::string print_function(const FunctionDef& f) {
  std::ostringstream os;
  os << "fn " << f.name << "(";
  for (size_t i = 0; i < f.params.size(); ++i) {
    if (i) os << ", ";
    os << f.params[i].name << ": " << type_name(f.params[i].type);
  }
  os << ") -> " << type_name(f.return_type) << " {\n";
  print_block(os, f.body, 4);
  os << "}\n";
  return os.str();
}

}  // namespace sep
