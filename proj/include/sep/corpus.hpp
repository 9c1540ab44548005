// Benchmark corpus I/O and the seeded synthetic-corpus generator.
//
// Layout on disk:
//   corpus/<problem_id>/spec.json
//   corpus/<problem_id>/candidates/<k>.ml
//   corpus/<problem_id>/reference.ml      (generated corpora only)
//
// spec.json carries the signature string, constraint strings, public
// examples, hidden tests, optional generated tests and an optional
// similarity matrix. Test records are
//   { "args": [...], "expected": { "kind": "return"|"exception",
//     "value"|"exception_kind": ..., "mutated": {param: [...]} } }.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sep/baselines.hpp"
#include "sep/equiv.hpp"

namespace sep {

struct CorpusFormatError : std::runtime_error {
  std::string file;
  CorpusFormatError(std::string file_path, const std::string& reason)
      : std::runtime_error(file_path + ": " + reason), file(std::move(file_path)) {}
};

struct GenerationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One problem as the harness sees it; `inputs` is the only part selector
// code can reach.
struct LoadedProblem {
  ProblemInputs inputs;
  std::vector<TestCase> hidden_tests;
  std::vector<TestCase> generated_tests;
  std::optional<SimilarityMatrix> similarity;
  std::vector<Program> pool;                          // generation order
  std::vector<std::pair<std::string, std::string>> unparsable;  // file, reason
};

struct LoadReport {
  std::vector<LoadedProblem> problems;
  // Problems with zero parsable candidates: (problem id, reason).
  std::vector<std::pair<std::string, std::string>> skipped;
};

LoadReport load_corpus(const std::string& path);

// JSON <-> value helpers (ints as numbers when they fit in 64 bits,
// decimal strings otherwise; unit as null).
nlohmann::json value_to_json(const Value& v);
Value value_from_json(const nlohmann::json& j);
nlohmann::json test_case_to_json(const TestCase& t);
// `params` supplies array-parameter defaults for the `mutated` field:
// when absent, arrays are expected unchanged.
TestCase test_case_from_json(const nlohmann::json& j, const std::vector<Param>& params);

struct GenConfig {
  uint64_t seed = 1;
  int n_problems = 10;
  int pool_size = 10;
  double correct_fraction = 0.6;
  std::string out_dir;
  int hidden_tests = 24;
  int generated_tests = 8;
  double generated_test_noise = 0.25;  // fraction of corrupted expected values
};

// Emits a corpus of scalar-parameter problems with finite domains. Each
// problem gets a reference program, ceil(pool * fraction) semantics-
// preserving variants and the rest semantics-breaking mutants, verified
// non-equivalent by exhaustive enumeration over the domain (a witness
// input joins the hidden tests, so labels and hidden-test results
// coincide). Same seed, same bytes.
void generate_corpus(const GenConfig& cfg);

// All argument tuples in Dom(constraints), lexicographic in parameter
// order. Requires every int parameter bounded on both sides; throws
// GridTooLarge past `cap` tuples. Scalar signatures only.
std::vector<std::vector<Value>> enumerate_domain(const ProblemInputs& inputs, uint64_t cap);

}  // namespace sep
