// Satisfiability backends for path-condition queries.
//
// Two routes: an external SMT process speaking SMT-LIB2 over
// stdin/stdout (one-shot script per query), and a built-in enumerative
// solver that exhausts a finite grid. Every SAT model is re-validated by
// concrete evaluation before it is returned, so correctness does not
// depend on backend behavior.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sep/symval.hpp"

namespace sep {

struct SolverQuery {
  std::vector<std::pair<std::string, Type>> declarations;  // order fixes model tie-breaks
  std::vector<SymValue> assertions;
  int timeout_ms = 2000;
};

// Builds declarations from the assertion symbols, in name order.
SolverQuery make_query(std::vector<SymValue> assertions, int timeout_ms);

struct SolverVerdict {
  enum class Kind { Sat, Unsat, Unknown };
  Kind kind = Kind::Unknown;
  std::map<std::string, Value> model;  // complete over declarations when Sat
  std::string reason;                  // when Unknown

  bool sat() const { return kind == Kind::Sat; }
  bool unsat() const { return kind == Kind::Unsat; }
  bool unknown() const { return kind == Kind::Unknown; }

  static SolverVerdict make_sat(std::map<std::string, Value> m);
  static SolverVerdict make_unsat();
  static SolverVerdict make_unknown(std::string reason);
};

struct BackendUnavailable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MalformedResponse : std::runtime_error {
  std::string transcript;
  MalformedResponse(const std::string& what, std::string transcript_text)
      : std::runtime_error(what), transcript(std::move(transcript_text)) {}
};
struct GridTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedTerm : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Complete SMT-LIB2 script (set-logic, declare-const, assert, check-sat,
// get-model). Byte-stable for identical queries. The logic line is
// QF_LIA unless the assertions use div/mod or variable-by-variable
// multiplication, which switch it to QF_NIA.
std::string emit_smtlib(const SolverQuery& query);

using Bounds = std::map<std::string, std::pair<Int, Int>>;  // inclusive

// Exhaustive search over the grid described by `bounds` (bool symbols
// iterate false then true). SAT returns the lexicographically smallest
// assignment in declaration order. Throws GridTooLarge above `grid_cap`.
SolverVerdict enumerative_check(const SolverQuery& query, const Bounds& bounds,
                                uint64_t grid_cap = 1000000);

// Derives an inclusive box for every declared symbol from unit
// comparison conjuncts in the assertions. Returns nullopt unless every
// int symbol gets both a lower and an upper bound from the assertions
// themselves (in which case refuting the box refutes the query).
std::optional<Bounds> derive_bounds(const SolverQuery& query);

enum class Backend { External, Enumerative };

struct SolverConfig {
  std::string external_cmd;    // empty: no external backend configured
  int timeout_ms = 2000;
  Int default_lo = -64;        // enumerative fallback window
  Int default_hi = 63;
  uint64_t grid_cap = 1000000;
  std::string log_dir;         // when set, SMT transcripts are written here
};

// One logical solver session: configuration plus query accounting.
// Sessions share nothing; use one per concurrent task.
class SmtSession {
 public:
  explicit SmtSession(SolverConfig cfg) : cfg_(std::move(cfg)) {}

  // Backend-directed check. Enumerative uses assertion-derived bounds
  // where available and the configured default window otherwise.
  SolverVerdict check(const SolverQuery& query, Backend backend);

  // Sound automatic routing: enumerative when the assertions box every
  // symbol within the grid cap, otherwise the external process, else
  // Unknown. Never reports Unsat from an unproven finite window.
  SolverVerdict check_auto(const SolverQuery& query);

  uint64_t queries() const { return queries_; }
  uint64_t unknowns() const { return unknowns_; }
  const SolverConfig& config() const { return cfg_; }

 private:
  SolverConfig cfg_;
  uint64_t queries_ = 0;
  uint64_t unknowns_ = 0;
  int log_index_ = 0;
  int session_id_ = -1;

  SolverVerdict finish(const SolverQuery& query, SolverVerdict v);
};

// Runs one query through an external SMT-LIB2 process. Throws
// BackendUnavailable when the process cannot run, MalformedResponse on
// protocol violations. Timeouts surface as Unknown.
SolverVerdict external_check(const std::string& command, const SolverQuery& query,
                             std::string* transcript_out = nullptr);

// True when `command` starts and answers `sat` for an empty query.
bool probe_external_solver(const std::string& command);

// Validates a model by concrete re-evaluation of every assertion.
bool model_satisfies(const SolverQuery& query, const std::map<std::string, Value>& model);

}  // namespace sep
