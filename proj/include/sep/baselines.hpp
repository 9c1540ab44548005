// Comparison selectors and estimators: the pass@k estimator, a token +
// subtree similarity score with HAC-medoid consensus, and
// execution-fingerprint dual-agreement reranking over supplied tests.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sep/equiv.hpp"

namespace sep {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unbiased probability that k uniform draws from n samples (c of them
// correct) contain at least one correct sample: 1 - C(n-c,k)/C(n,k).
// Exact binomial arithmetic; pass_at_k(n, c, 1) == c/n bit for bit.
double pass_at_k(int n, int c, int k);

struct SimilarityMatrix {
  int n = 0;
  std::vector<std::vector<double>> values;

  // Symmetric, unit diagonal, finite entries.
  void validate() const;
};

// Surface similarity in [0, 1]: mean of token 4-gram multiset overlap
// and depth-3 AST subtree-bag overlap. Symmetric; identical sources
// score exactly 1.
double token_similarity(const Program& p_i, const Program& p_j);

SimilarityMatrix similarity_matrix(const std::vector<Program>& pool);

// Average-linkage agglomerative clustering on distance 1 - sim, cutting
// when the next merge distance exceeds tau; returns the medoid (highest
// average similarity to the other members) of the largest cluster.
// Cluster-size ties pick the cluster containing the lowest index, medoid
// ties the lowest index.
int hac_medoid_select(const SimilarityMatrix& sim, double tau = 0.3);

struct Fingerprint {
  std::vector<bool> pass;   // per test
  std::vector<bool> crash;  // unexpected abnormal termination per test

  int passed() const;
  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

// Runs every candidate on the shared test list; pass iff the outcome
// matches the expected one, crash marks unexpected exceptions or
// exhaustion.
std::vector<Fingerprint> fingerprint(const std::vector<Program>& pool,
                                     const std::vector<TestCase>& tests, int64_t fuel);

// CodeT-style selection: group by identical fingerprint, score groups by
// (tests passed) x (group size), pick the lowest-index member of the
// best group. Score ties prefer more passed tests, then the lowest
// index.
int dual_agreement_select(const std::vector<Fingerprint>& fingerprints, size_t pool_size);

}  // namespace sep
