// Evaluation harness: runs the configured selectors over a corpus,
// scores them against hidden tests, computes pass@k aggregates and the
// pairwise equivalence-accuracy metric, and emits JSONL reports.
//
// Problems are independent, so the evaluation loop runs them in parallel
// with OpenMP when threads != 1; threads == 1 is the serial reference
// path and both produce identical reports (timing fields aside).
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sep/corpus.hpp"
#include "sep/partition.hpp"
#include "sep/symexec.hpp"

namespace sep {

extern const std::vector<std::string> kAllSelectors;

struct RunConfig {
  std::string corpus_path;
  std::vector<std::string> selectors = {"sep", "similarity", "dual_agreement",
                                        "random_pass1", "oracle_passN"};
  int n_candidates = 10;
  Budget budget;
  uint64_t seed = 0;
  SolverConfig solver;
  std::string output_path;
  int threads = 1;  // 1 serial reference, 0 OpenMP default, k explicit
  int64_t test_fuel = 1000000;
  int64_t max_array_len = 4;
};

struct SelectorOutcome {
  bool ran = false;
  std::string selected_id;
  int selected_index = -1;
  bool correct = false;
  double wall_ms = 0.0;
  // SEP-only accounting.
  bool fallback_used = false;
  int pair_checks = 0;
  int partitions = 0;
  bool all_exhaustive = true;
  uint64_t smt_queries = 0;
};

struct ProblemResult {
  std::string id;
  int n = 0;     // configured pool size for pass@k
  int c = 0;     // candidates passing all hidden tests
  int live = 0;  // parsed candidates actually in the pool
  double pass1 = 0.0;
  double passN = 0.0;
  std::map<std::string, SelectorOutcome> selectors;
  double label_ms = 0.0;
  double wall_ms = 0.0;
};

struct RunReport {
  std::vector<ProblemResult> problems;
  std::vector<std::pair<std::string, std::string>> skipped;
  nlohmann::json aggregate;
};

RunReport evaluate(const RunConfig& cfg, const LoadReport& corpus);

// One JSON line per problem, then skip lines, then the aggregate line.
std::vector<std::string> report_to_jsonl(const RunReport& report);

// Drops every key ending in "_ms" (recursively) so reports from two runs
// compare byte-for-byte.
std::string normalize_report_line(const std::string& line);

struct UndefinedMetric : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PairAccProblem {
  std::string id;
  int scored = 0;    // pairs with at least one correct candidate
  int matched = 0;   // verdict agrees with the correctness-derived label
  int excluded = 0;  // wrong-wrong pairs
};

struct PairAccReport {
  std::vector<PairAccProblem> problems;
  int total_scored = 0;
  int total_matched = 0;
  double micro = 0.0;  // pooled over all scored pairs
  double macro = 0.0;  // mean of per-problem accuracies
  nlohmann::json to_json() const;
};

// Full pairwise check_divergence sweep against hidden-test labels;
// wrong-wrong pairs are excluded. Throws UndefinedMetric when nothing
// can be scored.
PairAccReport pairwise_equivalence_accuracy(const RunConfig& cfg, const LoadReport& corpus);

}  // namespace sep
