// Test-side ground truth: exhaustive enumeration of a problem's input
// domain plus concrete interpretation. Deliberately separate from the
// symbolic path it is used to check.
#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sep/domain.hpp"
#include "sep/equiv.hpp"
#include "sep/interp.hpp"
#include "sep/parse.hpp"

namespace sep::test {

Program parse_program(const std::string& source, const std::string& id = "t", int gen = 0);

ProblemInputs make_inputs(const std::string& signature,
                          const std::vector<std::string>& constraints,
                          std::vector<TestCase> public_examples = {});

// Every argument tuple in Dom: scalar int params must be bounded by the
// constraints on both sides; bool params enumerate {false, true}.
std::vector<std::vector<Value>> enumerate_args(const ProblemInputs& inputs);

// Ground-truth equivalence over the enumerated domain.
bool ground_truth_equivalent(const Program& a, const Program& b, const ProblemInputs& inputs,
                             int64_t fuel = 1000000);

// First input where the two programs disagree, if any.
std::optional<std::vector<Value>> ground_truth_witness(const Program& a, const Program& b,
                                                       const ProblemInputs& inputs,
                                                       int64_t fuel = 1000000);

// Seeded random loop-free programs over int params x and y, for
// round-trip and leaf-soundness properties.
Program random_program(std::mt19937_64& rng, int max_depth = 3);

}  // namespace sep::test
