#include "sep/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "sep/interp.hpp"
#include "sep/parse.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace sep {

// ---------------------------------------------------------------------------
// JSON helpers

json value_to_json(const Value& v) {
  if (v.is_unit()) return nullptr;
  if (v.is_bool()) return v.as_bool();
  if (v.is_int()) {
    const Int& i = v.as_int();
    if (i >= std::numeric_limits<int64_t>::min() && i <= std::numeric_limits<int64_t>::max())
      return i.convert_to<int64_t>();
    return i.str();
  }
  json arr = json::array();
  for (const Int& e : v.as_array()) arr.push_back(value_to_json(Value(e)));
  return arr;
}

Value value_from_json(const json& j) {
  if (j.is_null()) return Value::unit();
  if (j.is_boolean()) return Value(j.get<bool>());
  if (j.is_number_integer()) return Value(Int(j.get<int64_t>()));
  if (j.is_string()) return Value(Int(j.get<std::string>()));
  if (j.is_array()) {
    IntArray arr;
    for (const auto& e : j) {
      Value v = value_from_json(e);
      if (!v.is_int()) throw std::invalid_argument("array elements must be integers");
      arr.push_back(v.as_int());
    }
    return Value(std::move(arr));
  }
  throw std::invalid_argument("unsupported JSON value: " + j.dump());
}

json test_case_to_json(const TestCase& t) {
  json j;
  j["args"] = json::array();
  for (const auto& a : t.args) j["args"].push_back(value_to_json(a));
  json e;
  switch (t.expected.kind) {
    case ExecutionOutcome::Kind::Return:
      e["kind"] = "return";
      e["value"] = value_to_json(t.expected.return_value);
      break;
    case ExecutionOutcome::Kind::Exception:
      e["kind"] = "exception";
      e["exception_kind"] = exception_kind_name(t.expected.exception);
      break;
    case ExecutionOutcome::Kind::ResourceExhausted:
      e["kind"] = "resource_exhausted";
      break;
  }
  if (!t.expected.mutated_inputs.empty()) {
    json m;
    for (const auto& [name, v] : t.expected.mutated_inputs) m[name] = value_to_json(v);
    e["mutated"] = m;
  }
  j["expected"] = e;
  return j;
}

TestCase test_case_from_json(const json& j, const std::vector<Param>& params) {
  TestCase t;
  for (const auto& a : j.at("args")) t.args.push_back(value_from_json(a));
  const json& e = j.at("expected");
  std::string kind = e.at("kind").get<std::string>();
  if (kind == "return") {
    t.expected.kind = ExecutionOutcome::Kind::Return;
    t.expected.return_value = value_from_json(e.value("value", json(nullptr)));
  } else if (kind == "exception") {
    t.expected.kind = ExecutionOutcome::Kind::Exception;
    t.expected.exception = exception_kind_from_name(e.at("exception_kind").get<std::string>());
  } else if (kind == "resource_exhausted") {
    t.expected.kind = ExecutionOutcome::Kind::ResourceExhausted;
  } else {
    throw std::invalid_argument("unknown expected.kind: " + kind);
  }
  // Arrays not listed under `mutated` are expected back unchanged.
  if (t.expected.kind != ExecutionOutcome::Kind::ResourceExhausted) {
    for (size_t i = 0; i < params.size() && i < t.args.size(); ++i)
      if (params[i].type == Type::IntArray)
        t.expected.mutated_inputs[params[i].name] = t.args[i];
    if (e.contains("mutated"))
      for (auto it = e["mutated"].begin(); it != e["mutated"].end(); ++it)
        t.expected.mutated_inputs[it.key()] = value_from_json(it.value());
  }
  return t;
}

// ---------------------------------------------------------------------------
// Loading

namespace {

json read_json_file(const fs::path& p) {
  std::ifstream f(p);
  if (!f) throw CorpusFormatError(p.string(), "cannot open file");
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw CorpusFormatError(p.string(), std::string("invalid JSON: ") + e.what());
  }
}

LoadedProblem load_problem(const fs::path& dir) {
  LoadedProblem p;
  fs::path spec_path = dir / "spec.json";
  if (!fs::exists(spec_path)) throw CorpusFormatError(spec_path.string(), "missing spec.json");
  json spec = read_json_file(spec_path);

  p.inputs.id = spec.value("id", dir.filename().string());
  try {
    p.inputs.signature = parse_signature(spec.at("signature").get<std::string>());
  } catch (const ParseError& e) {
    throw CorpusFormatError(spec_path.string(), std::string("bad signature: ") + e.what());
  }
  std::vector<std::string> raw;
  for (const auto& c : spec.value("constraints", json::array()))
    raw.push_back(c.get<std::string>());
  try {
    p.inputs.constraints = parse_constraints(raw, p.inputs.signature.params);
  } catch (const std::exception& e) {
    throw CorpusFormatError(spec_path.string(), std::string("bad constraints: ") + e.what());
  }

  auto load_tests = [&](const char* key) {
    std::vector<TestCase> out;
    for (const auto& t : spec.value(key, json::array())) {
      try {
        out.push_back(test_case_from_json(t, p.inputs.signature.params));
      } catch (const std::exception& e) {
        throw CorpusFormatError(spec_path.string(),
                                std::string("bad test record under ") + key + ": " + e.what());
      }
    }
    return out;
  };
  p.inputs.public_examples = load_tests("public_examples");
  p.hidden_tests = load_tests("hidden_tests");
  p.generated_tests = load_tests("generated_tests");

  for (const auto& tc : p.inputs.public_examples)
    if (!constraints_hold(p.inputs.constraints, p.inputs.signature.params, tc.args))
      throw CorpusFormatError(spec_path.string(),
                              "public example violates the domain constraints");

  if (spec.contains("similarity")) {
    SimilarityMatrix m;
    m.n = spec["similarity"].at("n").get<int>();
    m.values = spec["similarity"].at("values").get<std::vector<std::vector<double>>>();
    try {
      m.validate();
    } catch (const std::exception& e) {
      throw CorpusFormatError(spec_path.string(), std::string("bad similarity matrix: ") + e.what());
    }
    p.similarity = std::move(m);
  }

  fs::path cand_dir = dir / "candidates";
  std::vector<std::pair<int, fs::path>> files;
  if (fs::exists(cand_dir)) {
    for (const auto& entry : fs::directory_iterator(cand_dir)) {
      if (entry.path().extension() != ".ml") continue;
      std::string stem = entry.path().stem().string();
      try {
        files.emplace_back(std::stoi(stem), entry.path());
      } catch (const std::exception&) {
        throw CorpusFormatError(entry.path().string(), "candidate filenames must be <k>.ml");
      }
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& [k, path] : files) {
    std::ifstream f(path);
    std::string source((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    try {
      Program prog = parse(source, path.stem().string(), k);
      const FunctionDef& sig = p.inputs.signature;
      if (prog.ast.name != sig.name || prog.ast.params.size() != sig.params.size())
        throw ParseError("candidate does not match the problem signature", 1, 1);
      for (size_t i = 0; i < sig.params.size(); ++i)
        if (prog.ast.params[i].type != sig.params[i].type)
          throw ParseError("candidate parameter types do not match the signature", 1, 1);
      p.pool.push_back(std::move(prog));
    } catch (const ParseError& e) {
      p.unparsable.emplace_back(path.filename().string(), e.what());
    }
  }
  return p;
}

}  // namespace

LoadReport load_corpus(const std::string& path) {
  if (!fs::exists(path) || !fs::is_directory(path))
    throw CorpusFormatError(path, "corpus directory does not exist");
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(path))
    if (entry.is_directory()) dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());

  LoadReport report;
  for (const auto& dir : dirs) {
    LoadedProblem p = load_problem(dir);
    if (p.pool.empty()) {
      report.skipped.emplace_back(p.inputs.id, "no parsable candidates");
      continue;
    }
    report.problems.push_back(std::move(p));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Domain enumeration (scalar parameters)

std::vector<std::vector<Value>> enumerate_domain(const ProblemInputs& inputs, uint64_t cap) {
  const auto& params = inputs.signature.params;
  for (const auto& p : params)
    if (p.type == Type::IntArray)
      throw GridTooLarge("enumerate_domain covers scalar signatures only");
  auto bounds = scalar_domain_bounds(inputs.constraints, params);
  if (!bounds) throw GridTooLarge("constraints do not bound every int parameter");

  Int total = 1;
  for (const auto& p : params) {
    if (p.type == Type::Bool) {
      total *= 2;
    } else {
      auto [lo, hi] = bounds->at(p.name);
      if (lo > hi) return {};
      total *= hi - lo + 1;
    }
    if (total > Int(cap)) throw GridTooLarge("domain grid exceeds cap");
  }

  std::vector<std::vector<Value>> out;
  std::vector<Value> cur(params.size());
  std::function<void(size_t)> walk = [&](size_t i) {
    if (i == params.size()) {
      std::vector<Value> args = cur;
      if (constraints_hold(inputs.constraints, params, args)) out.push_back(std::move(args));
      return;
    }
    if (params[i].type == Type::Bool) {
      for (bool b : {false, true}) {
        cur[i] = Value(b);
        walk(i + 1);
      }
    } else {
      auto [lo, hi] = bounds->at(params[i].name);
      for (Int v = lo; v <= hi; ++v) {
        cur[i] = Value(v);
        walk(i + 1);
      }
    }
  };
  walk(0);
  return out;
}

// ---------------------------------------------------------------------------
// Generator: templates, variants, mutants

namespace {

constexpr int64_t kGenFuel = 200000;

struct TemplateInstance {
  std::string name;
  std::string signature;
  std::vector<std::string> constraints;
  std::string reference;
};

using Rng = std::mt19937_64;

int randint(Rng& rng, int lo, int hi) {
  return (int)std::uniform_int_distribution<int64_t>(lo, hi)(rng);
}

TemplateInstance make_template(Rng& rng, int which) {
  TemplateInstance t;
  switch (which) {
    case 0: {
      int b = randint(rng, 5, 9);
      t.name = "loop_sum";
      t.signature = "fn f(n: int) -> int";
      t.constraints = {"1 <= n <= " + std::to_string(b)};
      t.reference =
          "fn f(n: int) -> int {\n"
          "    s = 0;\n"
          "    i = 1;\n"
          "    while (i <= n) {\n"
          "        s = s + i;\n"
          "        i = i + 1;\n"
          "    }\n"
          "    return s;\n"
          "}\n";
      break;
    }
    case 1: {
      int b = randint(rng, 8, 15);
      t.name = "abs_value";
      t.signature = "fn f(x: int) -> int";
      t.constraints = {"0 - " + std::to_string(b) + " <= x && x <= " + std::to_string(b)};
      t.reference =
          "fn f(x: int) -> int {\n"
          "    if (x < 0) {\n"
          "        return 0 - x;\n"
          "    }\n"
          "    return x;\n"
          "}\n";
      break;
    }
    case 2: {
      int b = randint(rng, 5, 9);
      t.name = "max_of_two";
      t.signature = "fn f(x: int, y: int) -> int";
      t.constraints = {"0 - " + std::to_string(b) + " <= x <= " + std::to_string(b),
                       "0 - " + std::to_string(b) + " <= y <= " + std::to_string(b)};
      t.reference =
          "fn f(x: int, y: int) -> int {\n"
          "    if (x >= y) {\n"
          "        return x;\n"
          "    }\n"
          "    return y;\n"
          "}\n";
      break;
    }
    case 3: {
      int lo = randint(rng, -3, 0), hi = randint(rng, 3, 6);
      t.name = "clamp";
      t.signature = "fn f(x: int) -> int";
      t.constraints = {std::to_string(lo - 6) + " <= x <= " + std::to_string(hi + 6)};
      t.reference =
          "fn f(x: int) -> int {\n"
          "    if (x < " + std::to_string(lo) + ") {\n"
          "        return " + std::to_string(lo) + ";\n"
          "    }\n"
          "    if (x > " + std::to_string(hi) + ") {\n"
          "        return " + std::to_string(hi) + ";\n"
          "    }\n"
          "    return x;\n"
          "}\n";
      break;
    }
    case 4: {
      int b = randint(rng, 8, 14);
      t.name = "sign";
      t.signature = "fn f(x: int) -> int";
      t.constraints = {"0 - " + std::to_string(b) + " <= x <= " + std::to_string(b)};
      t.reference =
          "fn f(x: int) -> int {\n"
          "    if (x > 0) {\n"
          "        return 1;\n"
          "    } else if (x < 0) {\n"
          "        return 0 - 1;\n"
          "    }\n"
          "    return 0;\n"
          "}\n";
      break;
    }
    case 5: {
      int b = randint(rng, 6, 10);
      t.name = "sum_even";
      t.signature = "fn f(n: int) -> int";
      t.constraints = {"0 <= n <= " + std::to_string(b)};
      t.reference =
          "fn f(n: int) -> int {\n"
          "    s = 0;\n"
          "    i = 0;\n"
          "    while (i <= n) {\n"
          "        if (i mod 2 == 0) {\n"
          "            s = s + i;\n"
          "        }\n"
          "        i = i + 1;\n"
          "    }\n"
          "    return s;\n"
          "}\n";
      break;
    }
    case 6: {
      int a = randint(rng, 8, 12), b = randint(rng, 3, 5);
      t.name = "euclidean_div";
      t.signature = "fn f(a: int, b: int) -> int";
      t.constraints = {"0 - " + std::to_string(a) + " <= a <= " + std::to_string(a),
                       "1 <= b <= " + std::to_string(b)};
      t.reference =
          "fn f(a: int, b: int) -> int {\n"
          "    return a div b;\n"
          "}\n";
      break;
    }
    case 7: {
      int b = randint(rng, 12, 24);
      t.name = "floor_sqrt";
      t.signature = "fn f(n: int) -> int";
      t.constraints = {"0 <= n <= " + std::to_string(b)};
      t.reference =
          "fn f(n: int) -> int {\n"
          "    r = 0;\n"
          "    while ((r + 1) * (r + 1) <= n) {\n"
          "        r = r + 1;\n"
          "    }\n"
          "    return r;\n"
          "}\n";
      break;
    }
    case 8: {
      int b = randint(rng, 10, 16);
      t.name = "is_pow2";
      t.signature = "fn f(n: int) -> bool";
      t.constraints = {"1 <= n <= " + std::to_string(b)};
      t.reference =
          "fn f(n: int) -> bool {\n"
          "    v = n;\n"
          "    while (v > 1) {\n"
          "        if (v mod 2 == 1) {\n"
          "            return false;\n"
          "        }\n"
          "        v = v div 2;\n"
          "    }\n"
          "    return true;\n"
          "}\n";
      break;
    }
    default: {
      int b = randint(rng, 4, 8);
      t.name = "triangle_formula";
      t.signature = "fn f(n: int) -> int";
      t.constraints = {"1 <= n <= " + std::to_string(b)};
      t.reference =
          "fn f(n: int) -> int {\n"
          "    return n * (n + 1) div 2;\n"
          "}\n";
      break;
    }
  }
  return t;
}
constexpr int kTemplateCount = 10;

// --- AST rewriting ----------------------------------------------------------

bool contains_divmod(const Expr& e) {
  bool found = false;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Unary>) {
          found = contains_divmod(*x.operand);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          found = x.op == BinOp::Div || x.op == BinOp::Mod || contains_divmod(*x.lhs) ||
                  contains_divmod(*x.rhs);
        } else if constexpr (std::is_same_v<T, Expr::Index>) {
          found = contains_divmod(*x.array) || contains_divmod(*x.index);
        } else if constexpr (std::is_same_v<T, Expr::Len>) {
          found = contains_divmod(*x.array);
        }
      },
      e.node);
  return found;
}

// Rebuilds an expression, applying `edit` at the node whose preorder
// index equals `target` (counter decremented in place). `edit` returns
// nullptr when the node does not fit its pattern.
using ExprEdit = std::function<ExprPtr(const Expr&)>;

ExprPtr rewrite_expr(const ExprPtr& e, int& counter, const ExprEdit& edit) {
  if (counter == 0) {
    --counter;
    ExprPtr replacement = edit(*e);
    if (replacement) return replacement;
    return e;  // pattern mismatch leaves the tree unchanged
  }
  --counter;
  return std::visit(
      [&](const auto& x) -> ExprPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Unary>) {
          return make_unary(x.op, rewrite_expr(x.operand, counter, edit));
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          ExprPtr l = rewrite_expr(x.lhs, counter, edit);
          ExprPtr r = rewrite_expr(x.rhs, counter, edit);
          return make_binary(x.op, std::move(l), std::move(r));
        } else if constexpr (std::is_same_v<T, Expr::Index>) {
          ExprPtr a = rewrite_expr(x.array, counter, edit);
          ExprPtr i = rewrite_expr(x.index, counter, edit);
          return make_index(std::move(a), std::move(i));
        } else if constexpr (std::is_same_v<T, Expr::Len>) {
          return make_len(rewrite_expr(x.array, counter, edit));
        } else {
          return e;
        }
      },
      e->node);
}

int count_expr_nodes(const Expr& e) {
  return std::visit(
      [&](const auto& x) -> int {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Unary>) {
          return 1 + count_expr_nodes(*x.operand);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          return 1 + count_expr_nodes(*x.lhs) + count_expr_nodes(*x.rhs);
        } else if constexpr (std::is_same_v<T, Expr::Index>) {
          return 1 + count_expr_nodes(*x.array) + count_expr_nodes(*x.index);
        } else if constexpr (std::is_same_v<T, Expr::Len>) {
          return 1 + count_expr_nodes(*x.array);
        } else {
          return 1;
        }
      },
      e.node);
}

Block rewrite_block(const Block& b, int& counter, const ExprEdit& edit);

StmtPtr rewrite_stmt(const StmtPtr& s, int& counter, const ExprEdit& edit) {
  return std::visit(
      [&](const auto& x) -> StmtPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Stmt::Assign>) {
          return std::make_shared<Stmt>(
              Stmt{Stmt::Assign{x.name, rewrite_expr(x.value, counter, edit)}});
        } else if constexpr (std::is_same_v<T, Stmt::ArrayStore>) {
          ExprPtr i = rewrite_expr(x.index, counter, edit);
          ExprPtr v = rewrite_expr(x.value, counter, edit);
          return std::make_shared<Stmt>(Stmt{Stmt::ArrayStore{x.array, std::move(i), std::move(v)}});
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          ExprPtr c = rewrite_expr(x.cond, counter, edit);
          Block tb = rewrite_block(x.then_body, counter, edit);
          Block eb = rewrite_block(x.else_body, counter, edit);
          return std::make_shared<Stmt>(Stmt{Stmt::If{std::move(c), std::move(tb), std::move(eb)}});
        } else if constexpr (std::is_same_v<T, Stmt::While>) {
          ExprPtr c = rewrite_expr(x.cond, counter, edit);
          Block body = rewrite_block(x.body, counter, edit);
          return std::make_shared<Stmt>(Stmt{Stmt::While{std::move(c), std::move(body)}});
        } else {
          if (!x.value) return s;
          return std::make_shared<Stmt>(Stmt{Stmt::Return{rewrite_expr(x.value, counter, edit)}});
        }
      },
      s->node);
}

Block rewrite_block(const Block& b, int& counter, const ExprEdit& edit) {
  Block out;
  for (const auto& s : b) out.push_back(rewrite_stmt(s, counter, edit));
  return out;
}

int count_block_exprs(const Block& b) {
  int n = 0;
  for (const auto& s : b) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Stmt::Assign>) {
            n += count_expr_nodes(*x.value);
          } else if constexpr (std::is_same_v<T, Stmt::ArrayStore>) {
            n += count_expr_nodes(*x.index) + count_expr_nodes(*x.value);
          } else if constexpr (std::is_same_v<T, Stmt::If>) {
            n += count_expr_nodes(*x.cond) + count_block_exprs(x.then_body) +
                 count_block_exprs(x.else_body);
          } else if constexpr (std::is_same_v<T, Stmt::While>) {
            n += count_expr_nodes(*x.cond) + count_block_exprs(x.body);
          } else {
            if (x.value) n += count_expr_nodes(*x.value);
          }
        },
        s->node);
  }
  return n;
}

FunctionDef apply_expr_edit(const FunctionDef& f, int target, const ExprEdit& edit) {
  FunctionDef out = f;
  int counter = target;
  out.body = rewrite_block(f.body, counter, edit);
  return out;
}

// Renames local variables (anything assigned that is not a parameter).
FunctionDef rename_locals(const FunctionDef& f, Rng& rng) {
  std::set<std::string> params;
  for (const auto& p : f.params) params.insert(p.name);
  std::set<std::string> locals;
  std::function<void(const Block&)> scan = [&](const Block& b) {
    for (const auto& s : b)
      std::visit(
          [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Stmt::Assign>) {
              if (!params.count(x.name)) locals.insert(x.name);
            } else if constexpr (std::is_same_v<T, Stmt::If>) {
              scan(x.then_body);
              scan(x.else_body);
            } else if constexpr (std::is_same_v<T, Stmt::While>) {
              scan(x.body);
            }
          },
          s->node);
  };
  scan(f.body);

  static const char* kNames[] = {"acc", "cur", "val", "res", "tmp", "tot", "idx", "aux",
                                 "cnt", "lim", "pos", "buf"};
  std::map<std::string, std::string> renames;
  std::set<std::string> used = params;
  for (const auto& l : locals) {
    std::string fresh;
    for (int tries = 0; tries < 64; ++tries) {
      fresh = kNames[randint(rng, 0, 11)] + std::to_string(randint(rng, 0, 9));
      if (!used.count(fresh)) break;
    }
    used.insert(fresh);
    renames[l] = fresh;
  }

  std::function<ExprPtr(const ExprPtr&)> rx = [&](const ExprPtr& e) -> ExprPtr {
    return std::visit(
        [&](const auto& x) -> ExprPtr {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Expr::Var>) {
            auto it = renames.find(x.name);
            return it == renames.end() ? e : make_var(it->second);
          } else if constexpr (std::is_same_v<T, Expr::Unary>) {
            return make_unary(x.op, rx(x.operand));
          } else if constexpr (std::is_same_v<T, Expr::Binary>) {
            return make_binary(x.op, rx(x.lhs), rx(x.rhs));
          } else if constexpr (std::is_same_v<T, Expr::Index>) {
            return make_index(rx(x.array), rx(x.index));
          } else if constexpr (std::is_same_v<T, Expr::Len>) {
            return make_len(rx(x.array));
          } else {
            return e;
          }
        },
        e->node);
  };
  std::function<Block(const Block&)> rb = [&](const Block& b) -> Block {
    Block out;
    for (const auto& s : b) {
      out.push_back(std::visit(
          [&](const auto& x) -> StmtPtr {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Stmt::Assign>) {
              std::string n = renames.count(x.name) ? renames[x.name] : x.name;
              return std::make_shared<Stmt>(Stmt{Stmt::Assign{n, rx(x.value)}});
            } else if constexpr (std::is_same_v<T, Stmt::ArrayStore>) {
              return std::make_shared<Stmt>(Stmt{Stmt::ArrayStore{x.array, rx(x.index), rx(x.value)}});
            } else if constexpr (std::is_same_v<T, Stmt::If>) {
              return std::make_shared<Stmt>(
                  Stmt{Stmt::If{rx(x.cond), rb(x.then_body), rb(x.else_body)}});
            } else if constexpr (std::is_same_v<T, Stmt::While>) {
              return std::make_shared<Stmt>(Stmt{Stmt::While{rx(x.cond), rb(x.body)}});
            } else {
              return std::make_shared<Stmt>(Stmt{Stmt::Return{x.value ? rx(x.value) : nullptr}});
            }
          },
          s->node));
    }
    return out;
  };
  FunctionDef out = f;
  out.body = rb(f.body);
  return out;
}

// One semantics-preserving rewrite chosen by the rng.
FunctionDef apply_variant_transform(const FunctionDef& f, Rng& rng) {
  int kind = randint(rng, 0, 5);
  int total = count_block_exprs(f.body);
  if (total == 0) kind = 0;
  switch (kind) {
    case 0:
      return rename_locals(f, rng);
    case 1: {  // x + x <-> 2 * x
      ExprEdit edit = [](const Expr& e) -> ExprPtr {
        const auto* b = std::get_if<Expr::Binary>(&e.node);
        if (!b) return nullptr;
        if (b->op == BinOp::Add && expr_equal(*b->lhs, *b->rhs) && !contains_divmod(*b->lhs))
          return make_binary(BinOp::Mul, make_int(2), b->lhs);
        if (b->op == BinOp::Mul) {
          const auto* lit = std::get_if<Expr::IntLit>(&b->lhs->node);
          if (lit && lit->value == 2 && !contains_divmod(*b->rhs))
            return make_binary(BinOp::Add, b->rhs, b->rhs);
        }
        return nullptr;
      };
      return apply_expr_edit(f, randint(rng, 0, total - 1), edit);
    }
    case 2: {  // commute + or * (no div/mod in either operand)
      ExprEdit edit = [](const Expr& e) -> ExprPtr {
        const auto* b = std::get_if<Expr::Binary>(&e.node);
        if (!b || (b->op != BinOp::Add && b->op != BinOp::Mul)) return nullptr;
        if (contains_divmod(*b->lhs) || contains_divmod(*b->rhs)) return nullptr;
        return make_binary(b->op, b->rhs, b->lhs);
      };
      return apply_expr_edit(f, randint(rng, 0, total - 1), edit);
    }
    case 3: {  // mirror comparison: a < b -> b > a, etc.
      ExprEdit edit = [](const Expr& e) -> ExprPtr {
        const auto* b = std::get_if<Expr::Binary>(&e.node);
        if (!b) return nullptr;
        BinOp m;
        switch (b->op) {
          case BinOp::Lt: m = BinOp::Gt; break;
          case BinOp::Le: m = BinOp::Ge; break;
          case BinOp::Gt: m = BinOp::Lt; break;
          case BinOp::Ge: m = BinOp::Le; break;
          default: return nullptr;
        }
        if (contains_divmod(*b->lhs) || contains_divmod(*b->rhs)) return nullptr;
        return make_binary(m, b->rhs, b->lhs);
      };
      return apply_expr_edit(f, randint(rng, 0, total - 1), edit);
    }
    case 4: {  // negate an if-else guard and swap the branches
      FunctionDef out = f;
      bool done = false;
      std::function<Block(const Block&)> rb = [&](const Block& b) -> Block {
        Block res;
        for (const auto& s : b) {
          const auto* iff = std::get_if<Stmt::If>(&s->node);
          if (iff && !done && !iff->else_body.empty()) {
            done = true;
            res.push_back(std::make_shared<Stmt>(Stmt{Stmt::If{
                make_unary(UnOp::Not, iff->cond), iff->else_body, iff->then_body}}));
          } else {
            res.push_back(s);
          }
        }
        return res;
      };
      out.body = rb(f.body);
      return done ? out : rename_locals(f, rng);
    }
    default: {  // prepend a no-op assignment
      FunctionDef out = f;
      std::string name = "unused" + std::to_string(randint(rng, 0, 9));
      bool taken = false;
      for (const auto& p : f.params) taken |= p.name == name;
      if (taken) name += "x";
      Block body;
      body.push_back(std::make_shared<Stmt>(Stmt{Stmt::Assign{name, make_int(0)}}));
      body.insert(body.end(), f.body.begin(), f.body.end());
      out.body = std::move(body);
      return out;
    }
  }
}

// One semantics-breaking candidate edit; verification happens later.
FunctionDef apply_mutation(const FunctionDef& f, Rng& rng) {
  int total = count_block_exprs(f.body);
  int kind = randint(rng, 0, 3);
  if (total == 0) kind = 3;
  switch (kind) {
    case 0: {  // arithmetic operator swap
      ExprEdit edit = [](const Expr& e) -> ExprPtr {
        const auto* b = std::get_if<Expr::Binary>(&e.node);
        if (!b) return nullptr;
        switch (b->op) {
          case BinOp::Add: return make_binary(BinOp::Sub, b->lhs, b->rhs);
          case BinOp::Sub: return make_binary(BinOp::Add, b->lhs, b->rhs);
          case BinOp::Mul: return make_binary(BinOp::Add, b->lhs, b->rhs);
          default: return nullptr;
        }
      };
      return apply_expr_edit(f, randint(rng, 0, total - 1), edit);
    }
    case 1: {  // comparison boundary shift
      ExprEdit edit = [](const Expr& e) -> ExprPtr {
        const auto* b = std::get_if<Expr::Binary>(&e.node);
        if (!b) return nullptr;
        switch (b->op) {
          case BinOp::Lt: return make_binary(BinOp::Le, b->lhs, b->rhs);
          case BinOp::Le: return make_binary(BinOp::Lt, b->lhs, b->rhs);
          case BinOp::Gt: return make_binary(BinOp::Ge, b->lhs, b->rhs);
          case BinOp::Ge: return make_binary(BinOp::Gt, b->lhs, b->rhs);
          case BinOp::Eq: return make_binary(BinOp::Ne, b->lhs, b->rhs);
          case BinOp::Ne: return make_binary(BinOp::Eq, b->lhs, b->rhs);
          default: return nullptr;
        }
      };
      return apply_expr_edit(f, randint(rng, 0, total - 1), edit);
    }
    case 2: {  // integer literal off by one
      const int delta = randint(rng, 0, 1) ? 1 : -1;
      ExprEdit edit = [delta](const Expr& e) -> ExprPtr {
        const auto* lit = std::get_if<Expr::IntLit>(&e.node);
        if (!lit) return nullptr;
        return make_int(lit->value + delta);
      };
      return apply_expr_edit(f, randint(rng, 0, total - 1), edit);
    }
    default: {  // drop one if/else branch
      FunctionDef out = f;
      bool done = false;
      const bool keep_then = randint(rng, 0, 1) == 0;
      std::function<Block(const Block&)> rb = [&](const Block& b) -> Block {
        Block res;
        for (const auto& s : b) {
          const auto* iff = std::get_if<Stmt::If>(&s->node);
          if (iff && !done) {
            done = true;
            const Block& keep = keep_then ? iff->then_body : iff->else_body;
            res.insert(res.end(), keep.begin(), keep.end());
          } else {
            res.push_back(s);
          }
        }
        return res;
      };
      out.body = rb(f.body);
      return out;
    }
  }
}

Program reparse(const FunctionDef& f, const std::string& id, int gen_index) {
  return parse(print_function(f), id, gen_index);
}

// Concrete-equivalence over an enumerated domain.
bool same_on_domain(const Program& a, const Program& b,
                    const std::vector<std::vector<Value>>& domain) {
  for (const auto& args : domain) {
    ExecutionOutcome oa = interpret(a, args, kGenFuel);
    ExecutionOutcome ob = interpret(b, args, kGenFuel);
    if (!outcomes_equal(oa, ob)) return false;
  }
  return true;
}

std::optional<size_t> first_divergence(const Program& a, const Program& b,
                                       const std::vector<std::vector<Value>>& domain) {
  for (size_t i = 0; i < domain.size(); ++i) {
    ExecutionOutcome oa = interpret(a, domain[i], kGenFuel);
    ExecutionOutcome ob = interpret(b, domain[i], kGenFuel);
    if (!outcomes_equal(oa, ob)) return i;
  }
  return std::nullopt;
}

}  // namespace

void generate_corpus(const GenConfig& cfg) {
  if (cfg.n_problems <= 0 || cfg.pool_size <= 0 || cfg.correct_fraction < 0.0 ||
      cfg.correct_fraction > 1.0 || cfg.out_dir.empty())
    throw std::invalid_argument("bad generator configuration");
  fs::create_directories(cfg.out_dir);

  for (int pi = 0; pi < cfg.n_problems; ++pi) {
    Rng rng(cfg.seed * 1000003ull + (uint64_t)pi);
    TemplateInstance tmpl = make_template(rng, pi % kTemplateCount);
    std::string problem_id =
        "p" + std::string(pi < 10 ? "0" : "") + std::to_string(pi) + "_" + tmpl.name;

    ProblemInputs inputs;
    inputs.id = problem_id;
    inputs.signature = parse_signature(tmpl.signature);
    inputs.constraints = parse_constraints(tmpl.constraints, inputs.signature.params);
    Program reference = parse(tmpl.reference, problem_id + "_ref", -1);

    std::vector<std::vector<Value>> domain = enumerate_domain(inputs, 200000);
    if (domain.empty()) throw GenerationFailed("template domain is empty: " + problem_id);

    const int n_correct = (int)std::ceil(cfg.pool_size * cfg.correct_fraction);
    std::vector<std::pair<std::string, bool>> candidates;  // source, is_correct

    for (int v = 0; v < n_correct; ++v) {
      FunctionDef fd = reference.ast;
      int hops = randint(rng, 1, 3);
      for (int h = 0; h < hops; ++h) fd = apply_variant_transform(fd, rng);
      Program varp = reparse(fd, "tmp", 0);
      if (!same_on_domain(reference, varp, domain)) {
        // A transform slipped; fall back to the always-sound rename.
        fd = rename_locals(reference.ast, rng);
        varp = reparse(fd, "tmp", 0);
      }
      candidates.emplace_back(print_function(fd), true);
    }

    std::vector<Program> mutant_programs;
    for (int m = n_correct; m < cfg.pool_size; ++m) {
      bool ok = false;
      for (int tries = 0; tries < 40 && !ok; ++tries) {
        // Mutate a correct pool member (or the reference) so wrong
        // candidates stay syntactically close to right ones.
        FunctionDef base = reference.ast;
        if (!candidates.empty() && randint(rng, 0, 1) == 1) {
          int pick = randint(rng, 0, (int)candidates.size() - 1);
          if (candidates[(size_t)pick].second)
            base = parse(candidates[(size_t)pick].first, "tmp", 0).ast;
        }
        FunctionDef fd = apply_mutation(base, rng);
        Program mut;
        try {
          mut = reparse(fd, "tmp", 0);
        } catch (const ParseError&) {
          continue;  // edit produced an ill-typed program; try again
        }
        if (same_on_domain(reference, mut, domain)) continue;  // not breaking
        candidates.emplace_back(print_function(fd), false);
        mutant_programs.push_back(std::move(mut));
        ok = true;
      }
      if (!ok)
        throw GenerationFailed("cannot derive a verified non-equivalent mutant for " +
                               problem_id);
    }

    // Deterministic shuffle so labels are not positional.
    std::shuffle(candidates.begin(), candidates.end(), rng);

    // Hidden tests: sampled domain points, every mutant's first witness,
    // and the domain boundary points.
    std::set<size_t> hidden_idx;
    hidden_idx.insert(0);
    hidden_idx.insert(domain.size() - 1);
    for (const auto& mut : mutant_programs) {
      auto w = first_divergence(reference, mut, domain);
      if (w) hidden_idx.insert(*w);
    }
    while ((int)hidden_idx.size() < std::min<int>(cfg.hidden_tests, (int)domain.size()))
      hidden_idx.insert((size_t)std::uniform_int_distribution<size_t>(0, domain.size() - 1)(rng));

    auto make_case = [&](size_t idx) {
      TestCase tc;
      tc.args = domain[idx];
      tc.expected = interpret(reference, tc.args, kGenFuel);
      return tc;
    };
    std::vector<TestCase> hidden;
    for (size_t idx : hidden_idx) hidden.push_back(make_case(idx));

    std::vector<TestCase> publics;
    std::set<size_t> public_idx;
    while ((int)public_idx.size() < std::min<int>(3, (int)domain.size()))
      public_idx.insert((size_t)std::uniform_int_distribution<size_t>(0, domain.size() - 1)(rng));
    for (size_t idx : public_idx) publics.push_back(make_case(idx));

    std::vector<TestCase> generated;
    for (int g = 0; g < cfg.generated_tests; ++g) {
      size_t idx = (size_t)std::uniform_int_distribution<size_t>(0, domain.size() - 1)(rng);
      TestCase tc = make_case(idx);
      if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < cfg.generated_test_noise &&
          tc.expected.kind == ExecutionOutcome::Kind::Return) {
        // Corrupt the expected value the way unreliable generated tests do.
        if (tc.expected.return_value.is_int())
          tc.expected.return_value = Value(tc.expected.return_value.as_int() + 1);
        else if (tc.expected.return_value.is_bool())
          tc.expected.return_value = Value(!tc.expected.return_value.as_bool());
      }
      generated.push_back(std::move(tc));
    }

    // Write the problem directory.
    fs::path dir = fs::path(cfg.out_dir) / problem_id;
    fs::create_directories(dir / "candidates");
    {
      std::ofstream rf(dir / "reference.ml");
      rf << print_function(reference.ast);
    }
    for (size_t k = 0; k < candidates.size(); ++k) {
      std::ofstream cf(dir / "candidates" / (std::to_string(k) + ".ml"));
      cf << candidates[k].first;
    }
    json spec;
    spec["id"] = problem_id;
    spec["signature"] = tmpl.signature;
    spec["constraints"] = tmpl.constraints;
    json pub = json::array(), hid = json::array(), gen = json::array();
    for (const auto& t : publics) pub.push_back(test_case_to_json(t));
    for (const auto& t : hidden) hid.push_back(test_case_to_json(t));
    for (const auto& t : generated) gen.push_back(test_case_to_json(t));
    spec["public_examples"] = pub;
    spec["hidden_tests"] = hid;
    spec["generated_tests"] = gen;
    json labels = json::array();
    for (const auto& [src, correct] : candidates) labels.push_back(correct);
    spec["labels"] = labels;  // generator ground truth, for audits only
    std::ofstream sf(dir / "spec.json");
    sf << spec.dump(2) << "\n";
  }
}

}  // namespace sep
