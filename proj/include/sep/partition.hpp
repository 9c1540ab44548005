// Greedy representative partitioning: each candidate is compared against
// the representatives of existing partitions, largest partition first
// (ties by creation order), joining on the first bounded-equivalence
// verdict and opening a new partition otherwise. The selected program is
// the representative of the largest partition, earliest-created on ties.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sep/equiv.hpp"

namespace sep {

struct Partition {
  int representative = 0;          // index into the survivor pool
  std::vector<int> members;        // survivor-pool indices, insertion order
  int created_at = 0;
};

struct PartitionSet {
  std::vector<Partition> partitions;  // creation order
};

struct PairCheckRecord {
  int candidate = 0;        // generation_index of the probed candidate
  int representative = 0;   // generation_index of the representative
  bool distinct = false;
  bool exhaustive = false;
  bool errored = false;
  std::string error;
  double wall_ms = 0.0;
  uint64_t smt_queries = 0;
};

struct PrefilterResult {
  std::vector<int> survivors;  // indices into the pool, generation order
  bool fallback_used = false;  // empty survivor set fell back to the full pool
};

// Keeps candidates that pass every public example; if none do, the full
// pool survives and fallback_used is set.
PrefilterResult prefilter(const std::vector<Program>& pool, const ProblemInputs& spec,
                          int64_t fuel);

struct PartitionOutcome {
  PartitionSet partitions;
  std::vector<PairCheckRecord> pair_checks;
};

// Runs the greedy loop over `survivors` (indices into pool). A pair
// check that throws is treated as Distinct and recorded.
PartitionOutcome partition_pool(const std::vector<Program>& pool,
                                const std::vector<int>& survivors, const ProblemInputs& spec,
                                const Budget& budget, const SolverConfig& solver_cfg);

// Representative of the largest partition; ties break toward the
// earliest created_at.
int select_representative(const PartitionSet& ps);

struct SelectionReport {
  std::string selected;                  // program id of p*
  int selected_index = -1;               // generation_index of p*
  PartitionSet partitions;
  std::vector<int> prefilter_survivors;  // generation indices
  std::vector<PairCheckRecord> pair_checks;
  bool fallback_used = false;
  double prefilter_ms = 0.0;
  double partition_ms = 0.0;
};

// Full SEP pipeline: prefilter, partition, select.
SelectionReport sep_select(const std::vector<Program>& pool, const ProblemInputs& spec,
                           const Budget& budget, const SolverConfig& solver_cfg,
                           int64_t public_fuel = 100000);

}  // namespace sep
