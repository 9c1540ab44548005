#include "sep/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "sep/parse.hpp"

namespace sep {

double pass_at_k(int n, int c, int k) {
  if (c < 0 || c > n || k < 1 || k > n)
    throw DomainError("pass_at_k needs 0 <= c <= n and 1 <= k <= n");
  auto binom = [](int nn, int kk) -> Int {
    if (kk < 0 || kk > nn) return 0;
    Int r = 1;
    for (int i = 0; i < kk; ++i) {
      r *= nn - i;
      r /= i + 1;
    }
    return r;
  };
  Int denom = binom(n, k);
  Int num = denom - binom(n - c, k);
  return num.convert_to<double>() / denom.convert_to<double>();
}

void SimilarityMatrix::validate() const {
  if ((int)values.size() != n) throw DomainError("similarity matrix row count != n");
  for (int i = 0; i < n; ++i) {
    if ((int)values[i].size() != n) throw DomainError("similarity matrix is not square");
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(values[i][j])) throw DomainError("similarity entry is not finite");
      if (std::abs(values[i][j] - values[j][i]) > 1e-9)
        throw DomainError("similarity matrix is not symmetric");
    }
    if (std::abs(values[i][i] - 1.0) > 1e-9)
      throw DomainError("similarity diagonal must be 1");
  }
}

namespace {

// Multiset overlap: |intersection| / max(|A|, |B|).
double bag_overlap(const std::map<std::string, int>& a, const std::map<std::string, int>& b,
                   size_t total_a, size_t total_b) {
  if (total_a == 0 && total_b == 0) return 1.0;
  if (total_a == 0 || total_b == 0) return 0.0;
  size_t common = 0;
  for (const auto& [key, cnt] : a) {
    auto it = b.find(key);
    if (it != b.end()) common += (size_t)std::min(cnt, it->second);
  }
  return (double)common / (double)std::max(total_a, total_b);
}

std::map<std::string, int> token_4grams(const std::vector<std::string>& toks, size_t* total) {
  std::map<std::string, int> bag;
  *total = 0;
  if (toks.size() >= 4) {
    for (size_t i = 0; i + 4 <= toks.size(); ++i) {
      std::string key = toks[i] + "\x1f" + toks[i + 1] + "\x1f" + toks[i + 2] + "\x1f" + toks[i + 3];
      ++bag[key];
      ++*total;
    }
  }
  return bag;
}

// Canonical subtree strings truncated at `depth`; identifiers normalize
// to `v` so renamed clones still overlap structurally.
void subtree_key(const Expr& e, int depth, std::string& out) {
  if (depth == 0) {
    out += "_";
    return;
  }
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::IntLit>) {
          out += x.value.str();
        } else if constexpr (std::is_same_v<T, Expr::BoolLit>) {
          out += x.value ? "true" : "false";
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          out += "v";
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          out += "(";
          out += unop_symbol(x.op);
          out += " ";
          subtree_key(*x.operand, depth - 1, out);
          out += ")";
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          out += "(";
          out += binop_symbol(x.op);
          out += " ";
          subtree_key(*x.lhs, depth - 1, out);
          out += " ";
          subtree_key(*x.rhs, depth - 1, out);
          out += ")";
        } else if constexpr (std::is_same_v<T, Expr::Index>) {
          out += "(ix ";
          subtree_key(*x.array, depth - 1, out);
          out += " ";
          subtree_key(*x.index, depth - 1, out);
          out += ")";
        } else {
          out += "(len ";
          subtree_key(*x.array, depth - 1, out);
          out += ")";
        }
      },
      e.node);
}

void collect_expr_subtrees(const Expr& e, std::map<std::string, int>& bag, size_t* total) {
  std::string key;
  subtree_key(e, 3, key);
  ++bag[key];
  ++*total;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Unary>) {
          collect_expr_subtrees(*x.operand, bag, total);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          collect_expr_subtrees(*x.lhs, bag, total);
          collect_expr_subtrees(*x.rhs, bag, total);
        } else if constexpr (std::is_same_v<T, Expr::Index>) {
          collect_expr_subtrees(*x.array, bag, total);
          collect_expr_subtrees(*x.index, bag, total);
        } else if constexpr (std::is_same_v<T, Expr::Len>) {
          collect_expr_subtrees(*x.array, bag, total);
        }
      },
      e.node);
}

void collect_stmt_subtrees(const Block& b, std::map<std::string, int>& bag, size_t* total) {
  for (const auto& sp : b) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Stmt::Assign>) {
            collect_expr_subtrees(*x.value, bag, total);
          } else if constexpr (std::is_same_v<T, Stmt::ArrayStore>) {
            collect_expr_subtrees(*x.index, bag, total);
            collect_expr_subtrees(*x.value, bag, total);
          } else if constexpr (std::is_same_v<T, Stmt::If>) {
            collect_expr_subtrees(*x.cond, bag, total);
            collect_stmt_subtrees(x.then_body, bag, total);
            collect_stmt_subtrees(x.else_body, bag, total);
          } else if constexpr (std::is_same_v<T, Stmt::While>) {
            collect_expr_subtrees(*x.cond, bag, total);
            collect_stmt_subtrees(x.body, bag, total);
          } else {
            if (x.value) collect_expr_subtrees(*x.value, bag, total);
          }
        },
        sp->node);
  }
}

}  // namespace

double token_similarity(const Program& p_i, const Program& p_j) {
  size_t ta = 0, tb = 0;
  auto ga = token_4grams(tokenize(p_i.source), &ta);
  auto gb = token_4grams(tokenize(p_j.source), &tb);
  double gram_score = bag_overlap(ga, gb, ta, tb);

  std::map<std::string, int> sa, sb;
  size_t na = 0, nb = 0;
  collect_stmt_subtrees(p_i.ast.body, sa, &na);
  collect_stmt_subtrees(p_j.ast.body, sb, &nb);
  double tree_score = bag_overlap(sa, sb, na, nb);

  return 0.5 * gram_score + 0.5 * tree_score;
}

SimilarityMatrix similarity_matrix(const std::vector<Program>& pool) {
  SimilarityMatrix m;
  m.n = (int)pool.size();
  m.values.assign(pool.size(), std::vector<double>(pool.size(), 1.0));
  for (size_t i = 0; i < pool.size(); ++i)
    for (size_t j = i + 1; j < pool.size(); ++j)
      m.values[i][j] = m.values[j][i] = token_similarity(pool[i], pool[j]);
  return m;
}

int hac_medoid_select(const SimilarityMatrix& sim, double tau) {
  const int n = sim.n;
  if (n <= 0) throw DomainError("hac_medoid_select needs n >= 1");
  if (n == 1) return 0;

  std::vector<std::vector<int>> clusters;
  for (int i = 0; i < n; ++i) clusters.push_back({i});

  auto avg_link = [&](const std::vector<int>& a, const std::vector<int>& b) {
    double d = 0.0;
    for (int i : a)
      for (int j : b) d += 1.0 - sim.values[i][j];
    return d / ((double)a.size() * (double)b.size());
  };

  while (clusters.size() > 1) {
    double best = 0.0;
    int bi = -1, bj = -1;
    for (size_t i = 0; i < clusters.size(); ++i) {
      for (size_t j = i + 1; j < clusters.size(); ++j) {
        double d = avg_link(clusters[i], clusters[j]);
        // Strictly better distance wins; clusters are kept sorted by
        // their minimum member, so (i, j) order breaks exact ties.
        if (bi < 0 || d < best - 1e-12) {
          best = d;
          bi = (int)i;
          bj = (int)j;
        }
      }
    }
    if (best > tau) break;
    auto merged = clusters[(size_t)bi];
    merged.insert(merged.end(), clusters[(size_t)bj].begin(), clusters[(size_t)bj].end());
    std::sort(merged.begin(), merged.end());
    clusters.erase(clusters.begin() + bj);
    clusters.erase(clusters.begin() + bi);
    // Insert keeping clusters ordered by minimum member index.
    auto pos = std::find_if(clusters.begin(), clusters.end(),
                            [&](const std::vector<int>& c) { return c[0] > merged[0]; });
    clusters.insert(pos, std::move(merged));
  }

  // Largest cluster; ties toward the one holding the lowest index.
  const std::vector<int>* winner = nullptr;
  for (const auto& c : clusters)
    if (!winner || c.size() > winner->size()) winner = &c;

  int medoid = (*winner)[0];
  double best_avg = -1.0;
  for (int i : *winner) {
    double s = 0.0;
    for (int j : *winner)
      if (j != i) s += sim.values[i][j];
    double avg = winner->size() > 1 ? s / (double)(winner->size() - 1) : 0.0;
    if (avg > best_avg + 1e-12) {
      best_avg = avg;
      medoid = i;
    }
  }
  return medoid;
}

int Fingerprint::passed() const {
  int c = 0;
  for (bool b : pass) c += b;
  return c;
}

std::vector<Fingerprint> fingerprint(const std::vector<Program>& pool,
                                     const std::vector<TestCase>& tests, int64_t fuel) {
  std::vector<Fingerprint> fps(pool.size());
  for (size_t i = 0; i < pool.size(); ++i) {
    Fingerprint& fp = fps[i];
    fp.pass.resize(tests.size());
    fp.crash.resize(tests.size());
    for (size_t t = 0; t < tests.size(); ++t) {
      ExecutionOutcome out;
      bool ran = true;
      try {
        out = interpret(pool[i], tests[t].args, fuel);
      } catch (const TypeMismatchError&) {
        ran = false;
      }
      bool ok = ran && outcomes_equal(out, tests[t].expected);
      fp.pass[t] = ok;
      fp.crash[t] = !ok && (!ran || out.kind != ExecutionOutcome::Kind::Return);
    }
  }
  return fps;
}

int dual_agreement_select(const std::vector<Fingerprint>& fingerprints, size_t pool_size) {
  if (fingerprints.size() != pool_size || pool_size == 0)
    throw DomainError("fingerprints must align with the pool");
  struct Group {
    int first = 0;
    int size = 0;
    int passed = 0;
  };
  std::vector<Group> groups;
  std::vector<int> group_of(pool_size, -1);
  for (size_t i = 0; i < pool_size; ++i) {
    for (size_t g = 0; g < groups.size(); ++g) {
      if (fingerprints[(size_t)groups[g].first] == fingerprints[i]) {
        group_of[i] = (int)g;
        break;
      }
    }
    if (group_of[i] < 0) {
      group_of[i] = (int)groups.size();
      groups.push_back({(int)i, 0, fingerprints[i].passed()});
    }
    ++groups[(size_t)group_of[i]].size;
  }

  int best = 0;
  for (size_t g = 1; g < groups.size(); ++g) {
    long score = (long)groups[g].passed * groups[g].size;
    long best_score = (long)groups[(size_t)best].passed * groups[(size_t)best].size;
    if (score > best_score) {
      best = (int)g;
    } else if (score == best_score && groups[g].passed > groups[(size_t)best].passed) {
      best = (int)g;  // tie rule: more passed tests, then lowest index
    }
  }
  return groups[(size_t)best].first;
}

}  // namespace sep
