#include "sep/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cassert>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sep {

SolverVerdict SolverVerdict::make_sat(std::map<std::string, Value> m) {
  SolverVerdict v;
  v.kind = Kind::Sat;
  v.model = std::move(m);
  return v;
}
SolverVerdict SolverVerdict::make_unsat() {
  SolverVerdict v;
  v.kind = Kind::Unsat;
  return v;
}
SolverVerdict SolverVerdict::make_unknown(std::string reason) {
  SolverVerdict v;
  v.kind = Kind::Unknown;
  v.reason = std::move(reason);
  return v;
}

SolverQuery make_query(std::vector<SymValue> assertions, int timeout_ms) {
  SolverQuery q;
  q.timeout_ms = timeout_ms;
  std::map<std::string, Type> syms;
  for (const auto& a : assertions) collect_symbols(*a, syms);
  for (const auto& [name, type] : syms) q.declarations.emplace_back(name, type);
  q.assertions = std::move(assertions);
  return q;
}

bool model_satisfies(const SolverQuery& query, const std::map<std::string, Value>& model) {
  try {
    for (const auto& a : query.assertions)
      if (!eval_term(*a, model).as_bool()) return false;
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// SMT-LIB2 emission

namespace {

bool term_is_nonlinear(const SymTerm& t) {
  if (const auto* app = std::get_if<SymTerm::App>(&t.node)) {
    if (app->op == SymOp::Div || app->op == SymOp::Mod) return true;
    if (app->op == SymOp::Mul && !app->args[0]->is_const() && !app->args[1]->is_const())
      return true;
    for (const auto& a : app->args)
      if (term_is_nonlinear(*a)) return true;
  }
  return false;
}

void emit_term(std::ostream& os, const SymTerm& t) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SymTerm::Const>) {
          if (x.value.is_int()) {
            const Int& v = x.value.as_int();
            if (v < 0)
              os << "(- " << Int(-v).str() << ")";
            else
              os << v.str();
          } else if (x.value.is_bool()) {
            os << (x.value.as_bool() ? "true" : "false");
          } else {
            throw UnsupportedTerm("only int and bool constants are supported");
          }
        } else if constexpr (std::is_same_v<T, SymTerm::Sym>) {
          os << x.name;
        } else {
          const char* head = nullptr;
          switch (x.op) {
            case SymOp::Add: head = "+"; break;
            case SymOp::Sub: head = "-"; break;
            case SymOp::Mul: head = "*"; break;
            case SymOp::Div: head = "div"; break;
            case SymOp::Mod: head = "mod"; break;
            case SymOp::Eq: head = "="; break;
            case SymOp::Ne: head = "distinct"; break;
            case SymOp::Lt: head = "<"; break;
            case SymOp::Le: head = "<="; break;
            case SymOp::Gt: head = ">"; break;
            case SymOp::Ge: head = ">="; break;
            case SymOp::And: head = "and"; break;
            case SymOp::Or: head = "or"; break;
            case SymOp::Neg: head = "-"; break;
            case SymOp::Not: head = "not"; break;
          }
          os << "(" << head;
          for (const auto& a : x.args) {
            os << " ";
            emit_term(os, *a);
          }
          os << ")";
        }
      },
      t.node);
}

}  // namespace

std::string emit_smtlib(const SolverQuery& query) {
  std::ostringstream os;
  if (query.timeout_ms > 0) os << "(set-option :timeout " << query.timeout_ms << ")\n";
  bool nonlinear = false;
  for (const auto& a : query.assertions) nonlinear |= term_is_nonlinear(*a);
  os << "(set-logic " << (nonlinear ? "QF_NIA" : "QF_LIA") << ")\n";
  for (const auto& [name, type] : query.declarations) {
    if (type != Type::Int && type != Type::Bool)
      throw UnsupportedTerm("only Int and Bool symbols are supported");
    os << "(declare-const " << name << " " << (type == Type::Int ? "Int" : "Bool") << ")\n";
  }
  for (const auto& a : query.assertions) {
    if (a->type != Type::Bool) throw UnsupportedTerm("assertions must be boolean terms");
    os << "(assert ";
    emit_term(os, *a);
    os << ")\n";
  }
  os << "(check-sat)\n(get-model)\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Enumerative backend

SolverVerdict enumerative_check(const SolverQuery& query, const Bounds& bounds,
                                uint64_t grid_cap) {
  struct Axis {
    std::string name;
    bool is_bool;
    Int lo, hi;  // bools use 0..1
  };
  std::vector<Axis> axes;
  Int grid = 1;
  for (const auto& [name, type] : query.declarations) {
    Axis ax;
    ax.name = name;
    ax.is_bool = type == Type::Bool;
    if (ax.is_bool) {
      ax.lo = 0;
      ax.hi = 1;
    } else {
      auto it = bounds.find(name);
      if (it == bounds.end())
        throw GridTooLarge("no finite range for symbol " + name);
      ax.lo = it->second.first;
      ax.hi = it->second.second;
    }
    if (ax.lo > ax.hi) return SolverVerdict::make_unsat();  // empty axis, empty grid
    grid *= ax.hi - ax.lo + 1;
    if (grid > Int(grid_cap))
      throw GridTooLarge("grid exceeds cap of " + std::to_string(grid_cap) + " points");
    axes.push_back(std::move(ax));
  }

  std::map<std::string, Value> model;
  std::vector<Int> cursor;
  for (const auto& ax : axes) cursor.push_back(ax.lo);

  auto assign = [&]() {
    for (size_t i = 0; i < axes.size(); ++i)
      model[axes[i].name] = axes[i].is_bool ? Value(cursor[i] != 0) : Value(cursor[i]);
  };

  if (axes.empty()) {
    // Ground query: evaluate the assertions once.
    return model_satisfies(query, model) ? SolverVerdict::make_sat({})
                                         : SolverVerdict::make_unsat();
  }

  while (true) {
    assign();
    if (model_satisfies(query, model)) return SolverVerdict::make_sat(model);
    // Odometer increment, last axis fastest: yields lexicographically
    // increasing tuples in declaration order.
    size_t i = axes.size();
    while (i > 0) {
      --i;
      if (cursor[i] < axes[i].hi) {
        ++cursor[i];
        for (size_t j = i + 1; j < axes.size(); ++j) cursor[j] = axes[j].lo;
        break;
      }
      if (i == 0) return SolverVerdict::make_unsat();
    }
  }
}

// ---------------------------------------------------------------------------
// Bound derivation from unit conjuncts

namespace {

struct BoundAcc {
  std::optional<Int> lo, hi;
  void tighten_lo(const Int& v) {
    if (!lo || v > *lo) lo = v;
  }
  void tighten_hi(const Int& v) {
    if (!hi || v < *hi) hi = v;
  }
};

// Recognizes cmp(sym, const) / cmp(const, sym) atoms, descending through
// top-level conjunctions and negations.
void scan_term(const SymTerm& t, bool negated, std::map<std::string, BoundAcc>& acc) {
  const auto* app = std::get_if<SymTerm::App>(&t.node);
  if (!app) return;
  if (app->op == SymOp::Not) {
    scan_term(*app->args[0], !negated, acc);
    return;
  }
  if (app->op == SymOp::And && !negated) {
    scan_term(*app->args[0], false, acc);
    scan_term(*app->args[1], false, acc);
    return;
  }
  if (app->op == SymOp::Or && negated) {  // !(a || b) == !a && !b
    scan_term(*app->args[0], true, acc);
    scan_term(*app->args[1], true, acc);
    return;
  }
  if (app->args.size() != 2) return;
  SymOp op = app->op;
  if (negated) {
    switch (op) {
      case SymOp::Lt: op = SymOp::Ge; break;
      case SymOp::Le: op = SymOp::Gt; break;
      case SymOp::Gt: op = SymOp::Le; break;
      case SymOp::Ge: op = SymOp::Lt; break;
      case SymOp::Ne: op = SymOp::Eq; break;
      default: return;  // negated == gives no box
    }
  }
  const auto* ls = std::get_if<SymTerm::Sym>(&app->args[0]->node);
  const auto* rs = std::get_if<SymTerm::Sym>(&app->args[1]->node);
  const SymValue& lc = app->args[0];
  const SymValue& rc = app->args[1];
  if (ls && ls->type == Type::Int && rc->is_const() && rc->const_value().is_int()) {
    const Int& c = rc->const_value().as_int();
    auto& b = acc[ls->name];
    switch (op) {
      case SymOp::Lt: b.tighten_hi(c - 1); break;
      case SymOp::Le: b.tighten_hi(c); break;
      case SymOp::Gt: b.tighten_lo(c + 1); break;
      case SymOp::Ge: b.tighten_lo(c); break;
      case SymOp::Eq:
        b.tighten_lo(c);
        b.tighten_hi(c);
        break;
      default: break;
    }
  } else if (rs && rs->type == Type::Int && lc->is_const() && lc->const_value().is_int()) {
    const Int& c = lc->const_value().as_int();
    auto& b = acc[rs->name];
    switch (op) {
      case SymOp::Lt: b.tighten_lo(c + 1); break;  // c < x
      case SymOp::Le: b.tighten_lo(c); break;
      case SymOp::Gt: b.tighten_hi(c - 1); break;
      case SymOp::Ge: b.tighten_hi(c); break;
      case SymOp::Eq:
        b.tighten_lo(c);
        b.tighten_hi(c);
        break;
      default: break;
    }
  }
}

}  // namespace

std::optional<Bounds> derive_bounds(const SolverQuery& query) {
  std::map<std::string, BoundAcc> acc;
  for (const auto& a : query.assertions) scan_term(*a, false, acc);
  Bounds out;
  for (const auto& [name, type] : query.declarations) {
    if (type != Type::Int) continue;
    auto it = acc.find(name);
    if (it == acc.end() || !it->second.lo || !it->second.hi) return std::nullopt;
    out[name] = {*it->second.lo, *it->second.hi};
  }
  return out;
}

namespace {

// Default window, tightened by whatever one-sided bounds the assertions give.
Bounds padded_bounds(const SolverQuery& query, const Int& default_lo, const Int& default_hi) {
  std::map<std::string, BoundAcc> acc;
  for (const auto& a : query.assertions) scan_term(*a, false, acc);
  Bounds out;
  for (const auto& [name, type] : query.declarations) {
    if (type != Type::Int) continue;
    Int lo = default_lo, hi = default_hi;
    auto it = acc.find(name);
    if (it != acc.end()) {
      if (it->second.lo) lo = std::max(lo, *it->second.lo);
      if (it->second.hi) hi = std::min(hi, *it->second.hi);
      // Fully derived bounds override the window even when wider.
      if (it->second.lo && it->second.hi) {
        lo = *it->second.lo;
        hi = *it->second.hi;
      }
    }
    out[name] = {lo, hi};
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// External backend: one process per query, script over stdin.

namespace {

struct SExpr {
  std::string atom;
  std::vector<SExpr> items;
  bool is_atom = false;
};

size_t parse_sexpr(const std::string& s, size_t i, SExpr& out) {
  while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  if (i >= s.size()) throw MalformedResponse("truncated s-expression", s);
  if (s[i] == '(') {
    out.is_atom = false;
    ++i;
    while (true) {
      while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
      if (i >= s.size()) throw MalformedResponse("unterminated s-expression", s);
      if (s[i] == ')') return i + 1;
      SExpr child;
      i = parse_sexpr(s, i, child);
      out.items.push_back(std::move(child));
    }
  }
  out.is_atom = true;
  size_t j = i;
  while (j < s.size() && !std::isspace((unsigned char)s[j]) && s[j] != '(' && s[j] != ')') ++j;
  out.atom = s.substr(i, j - i);
  return j;
}

std::optional<Value> sexpr_to_value(const SExpr& e, Type type) {
  if (e.is_atom) {
    if (type == Type::Bool) {
      if (e.atom == "true") return Value(true);
      if (e.atom == "false") return Value(false);
      return std::nullopt;
    }
    if (e.atom.empty()) return std::nullopt;
    if (e.atom.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
    return Value(Int(e.atom));
  }
  // (- 5)
  if (e.items.size() == 2 && e.items[0].is_atom && e.items[0].atom == "-" &&
      e.items[1].is_atom)
    return Value(-Int(e.items[1].atom));
  return std::nullopt;
}

struct ProcessResult {
  std::string out;
  std::string err;
  int exit_code = -1;
  bool timed_out = false;
  bool spawn_failed = false;
};

ProcessResult run_process(const std::string& command, const std::string& input, int timeout_ms) {
  ProcessResult res;

  // The script goes through a temp file redirected to stdin: no pipe
  // capacity coupling with the child, and EOF is immediate.
  char script_path[] = "/tmp/sep-query-XXXXXX";
  int script_fd = mkstemp(script_path);
  if (script_fd < 0) {
    res.spawn_failed = true;
    return res;
  }
  size_t written = 0;
  while (written < input.size()) {
    ssize_t n = write(script_fd, input.data() + written, input.size() - written);
    if (n <= 0) break;
    written += (size_t)n;
  }
  lseek(script_fd, 0, SEEK_SET);

  int out_pipe[2], err_pipe[2];
  if (pipe(out_pipe) || pipe(err_pipe)) {
    close(script_fd);
    unlink(script_path);
    res.spawn_failed = true;
    return res;
  }
  pid_t pid = fork();
  if (pid < 0) {
    close(script_fd);
    unlink(script_path);
    res.spawn_failed = true;
    return res;
  }
  if (pid == 0) {
    dup2(script_fd, STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    close(script_fd);
    close(out_pipe[0]); close(out_pipe[1]);
    close(err_pipe[0]); close(err_pipe[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), (char*)nullptr);
    _exit(127);
  }
  close(script_fd);
  close(out_pipe[1]);
  close(err_pipe[1]);

  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::milliseconds(timeout_ms > 0 ? timeout_ms + 500 : 60000);
  fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
  fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);
  bool out_open = true, err_open = true;
  char buf[4096];
  while (out_open || err_open) {
    struct pollfd fds[2];
    nfds_t n = 0;
    if (out_open) fds[n++] = {out_pipe[0], POLLIN, 0};
    if (err_open) fds[n++] = {err_pipe[0], POLLIN, 0};
    auto now = std::chrono::steady_clock::now();
    int wait_ms = (int)std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    if (wait_ms <= 0) {
      res.timed_out = true;
      kill(pid, SIGKILL);
      break;
    }
    int rv = poll(fds, n, std::min(wait_ms, 200));
    if (rv < 0) break;
    for (nfds_t i = 0; i < n; ++i) {
      if (!(fds[i].revents & (POLLIN | POLLHUP))) continue;
      ssize_t got;
      while ((got = read(fds[i].fd, buf, sizeof buf)) > 0) {
        if (fds[i].fd == out_pipe[0])
          res.out.append(buf, (size_t)got);
        else
          res.err.append(buf, (size_t)got);
      }
      if (got == 0) {
        if (fds[i].fd == out_pipe[0]) out_open = false;
        else err_open = false;
      }
    }
  }
  close(out_pipe[0]);
  close(err_pipe[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  unlink(script_path);
  if (WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
  return res;
}

}  // namespace

SolverVerdict external_check(const std::string& command, const SolverQuery& query,
                             std::string* transcript_out) {
  std::string script = emit_smtlib(query);
  ProcessResult pr = run_process(command, script, query.timeout_ms);
  std::string transcript = "== script ==\n" + script + "== stdout ==\n" + pr.out +
                           "== stderr ==\n" + pr.err + "\n";
  if (transcript_out) *transcript_out = transcript;
  if (pr.spawn_failed || pr.exit_code == 127)
    throw BackendUnavailable("solver command failed to start: " + command);
  if (pr.timed_out) return SolverVerdict::make_unknown("external solver timeout");

  std::istringstream is(pr.out);
  std::string verdict_line;
  while (std::getline(is, verdict_line)) {
    // Skip success markers and blank lines some solvers print.
    if (verdict_line.empty() || verdict_line == "success") continue;
    break;
  }
  if (verdict_line == "unsat") return SolverVerdict::make_unsat();
  if (verdict_line == "unknown" || verdict_line == "timeout")
    return SolverVerdict::make_unknown("external solver reported " + verdict_line);
  if (verdict_line != "sat") {
    if (pr.out.empty() && pr.exit_code != 0)
      throw BackendUnavailable("solver produced no output (exit " +
                               std::to_string(pr.exit_code) + "): " + command);
    throw MalformedResponse("unrecognized solver verdict: '" + verdict_line + "'", transcript);
  }

  // Model: the remainder of stdout holds one s-expression of define-funs,
  // either ((define-fun ...) ...) or (model (define-fun ...) ...).
  std::string rest((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  std::map<std::string, Value> model;
  size_t pos = rest.find('(');
  if (pos != std::string::npos) {
    SExpr root;
    parse_sexpr(rest, pos, root);
    std::map<std::string, Type> decl_types(query.declarations.begin(),
                                           query.declarations.end());
    for (const auto& item : root.items) {
      if (item.is_atom) continue;  // the `model` keyword variant
      if (item.items.size() < 5 || !item.items[0].is_atom ||
          item.items[0].atom != "define-fun")
        continue;
      const std::string& name = item.items[1].atom;
      auto dt = decl_types.find(name);
      if (dt == decl_types.end()) continue;
      auto v = sexpr_to_value(item.items.back(), dt->second);
      if (!v) throw MalformedResponse("unparsable model value for " + name, transcript);
      model[name] = *v;
    }
  }
  // Symbols the solver left out are don't-cares: complete them.
  for (const auto& [name, type] : query.declarations)
    if (!model.count(name)) model[name] = type == Type::Bool ? Value(false) : Value(Int(0));

  if (!model_satisfies(query, model))
    return SolverVerdict::make_unknown("external model failed validation");
  return SolverVerdict::make_sat(std::move(model));
}

bool probe_external_solver(const std::string& command) {
  if (command.empty()) return false;
  try {
    SolverQuery q;
    q.timeout_ms = 5000;
    q.assertions.push_back(sv_bool(true));
    // A throwaway declaration so get-model output is representative.
    q.declarations.emplace_back("probe_x", Type::Int);
    SolverVerdict v = external_check(command, q);
    return v.sat();
  } catch (const std::exception&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Session

namespace {
std::atomic<int> g_session_counter{0};
}

SolverVerdict SmtSession::finish(const SolverQuery& query, SolverVerdict v) {
  ++queries_;
  if (v.unknown()) ++unknowns_;
  if (!cfg_.log_dir.empty()) {
    if (session_id_ < 0) session_id_ = g_session_counter.fetch_add(1);
    std::error_code ec;
    std::filesystem::create_directories(cfg_.log_dir, ec);
    std::ofstream f(cfg_.log_dir + "/s" + std::to_string(session_id_) + "-q" +
                    std::to_string(log_index_++) + ".smt2");
    f << emit_smtlib(query) << "; verdict: "
      << (v.sat() ? "sat" : v.unsat() ? "unsat" : "unknown " + v.reason) << "\n";
  }
  return v;
}

SolverVerdict SmtSession::check(const SolverQuery& query, Backend backend) {
  if (backend == Backend::External) {
    if (cfg_.external_cmd.empty())
      throw BackendUnavailable("no external solver command configured");
    return finish(query, external_check(cfg_.external_cmd, query));
  }
  return finish(query, enumerative_check(
                           query, padded_bounds(query, cfg_.default_lo, cfg_.default_hi),
                           cfg_.grid_cap));
}

SolverVerdict SmtSession::check_auto(const SolverQuery& query) {
  auto derived = derive_bounds(query);
  if (derived) {
    Int grid = 1;
    bool fits = true;
    for (const auto& [name, range] : *derived) {
      if (range.second < range.first) continue;
      grid *= range.second - range.first + 1;
      if (grid > Int(cfg_.grid_cap)) {
        fits = false;
        break;
      }
    }
    if (fits) return finish(query, enumerative_check(query, *derived, cfg_.grid_cap));
  }
  if (!cfg_.external_cmd.empty()) {
    try {
      return finish(query, external_check(cfg_.external_cmd, query));
    } catch (const MalformedResponse& e) {
      return finish(query, SolverVerdict::make_unknown(std::string("malformed response: ") +
                                                       e.what()));
    }
  }
  return finish(query, SolverVerdict::make_unknown("no backend can decide this query"));
}

}  // namespace sep
