#include "sep/evaluate.hpp"

#include <algorithm>
#include <chrono>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sep/baselines.hpp"

using nlohmann::json;

namespace sep {

const std::vector<std::string> kAllSelectors = {
    "sep", "similarity", "external_similarity", "dual_agreement", "random_pass1",
    "oracle_passN"};

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

bool passes_hidden(const Program& p, const std::vector<TestCase>& hidden, int64_t fuel) {
  for (const auto& tc : hidden) {
    ExecutionOutcome out;
    try {
      out = interpret(p, tc.args, fuel);
    } catch (const TypeMismatchError&) {
      return false;
    }
    if (!outcomes_equal(out, tc.expected)) return false;
  }
  return true;
}

// The first min(n, files) candidates by generation index.
std::vector<Program> live_pool(const LoadedProblem& prob, int n) {
  std::vector<Program> pool;
  for (const auto& p : prob.pool)
    if (p.generation_index < n) pool.push_back(p);
  return pool;
}

int effective_n(const LoadedProblem& prob, int n_configured) {
  int files = (int)(prob.pool.size() + prob.unparsable.size());
  return std::min(n_configured, files);
}

ProblemResult run_problem(const RunConfig& cfg, const LoadedProblem& prob) {
  auto t_start = Clock::now();
  ProblemResult res;
  res.id = prob.inputs.id;
  res.n = effective_n(prob, cfg.n_candidates);

  std::vector<Program> pool = live_pool(prob, res.n);
  res.live = (int)pool.size();

  auto t_label = Clock::now();
  std::vector<bool> correct(pool.size());
  for (size_t i = 0; i < pool.size(); ++i) {
    correct[i] = passes_hidden(pool[i], prob.hidden_tests, cfg.test_fuel);
    res.c += correct[i];
  }
  res.label_ms = ms_since(t_label);
  res.pass1 = res.n > 0 ? (double)res.c / res.n : 0.0;
  res.passN = res.n > 0 ? pass_at_k(res.n, res.c, res.n) : 0.0;

  auto record = [&](const std::string& name, SelectorOutcome out) {
    res.selectors[name] = std::move(out);
  };

  for (const auto& sel : cfg.selectors) {
    SelectorOutcome out;
    auto t0 = Clock::now();
    if (pool.empty()) {
      out.wall_ms = ms_since(t0);
      record(sel, std::move(out));
      continue;
    }
    if (sel == "sep") {
      SolverConfig scfg = cfg.solver;
      if (!scfg.log_dir.empty()) scfg.log_dir += "/" + prob.inputs.id;
      SelectionReport rep =
          sep_select(pool, prob.inputs, cfg.budget, scfg, cfg.test_fuel);
      out.ran = true;
      out.selected_id = rep.selected;
      out.selected_index = rep.selected_index;
      out.fallback_used = rep.fallback_used;
      out.pair_checks = (int)rep.pair_checks.size();
      out.partitions = (int)rep.partitions.partitions.size();
      for (const auto& pc : rep.pair_checks) {
        out.all_exhaustive = out.all_exhaustive && (pc.distinct || pc.exhaustive) && !pc.errored;
        out.smt_queries += pc.smt_queries;
      }
      for (size_t i = 0; i < pool.size(); ++i)
        if (pool[i].generation_index == rep.selected_index) out.correct = correct[i];
    } else if (sel == "similarity") {
      SimilarityMatrix m = similarity_matrix(pool);
      int idx = hac_medoid_select(m);
      out.ran = true;
      out.selected_id = pool[(size_t)idx].id;
      out.selected_index = pool[(size_t)idx].generation_index;
      out.correct = correct[(size_t)idx];
    } else if (sel == "external_similarity") {
      if (prob.similarity && prob.similarity->n >= (int)pool.size()) {
        // The supplied matrix is indexed by generation index; take the
        // submatrix of the live pool.
        SimilarityMatrix m;
        m.n = (int)pool.size();
        m.values.assign(pool.size(), std::vector<double>(pool.size(), 1.0));
        for (size_t i = 0; i < pool.size(); ++i)
          for (size_t j = 0; j < pool.size(); ++j)
            m.values[i][j] = prob.similarity->values[(size_t)pool[i].generation_index]
                                                    [(size_t)pool[j].generation_index];
        int idx = hac_medoid_select(m);
        out.ran = true;
        out.selected_id = pool[(size_t)idx].id;
        out.selected_index = pool[(size_t)idx].generation_index;
        out.correct = correct[(size_t)idx];
      }
    } else if (sel == "dual_agreement") {
      const std::vector<TestCase>& tests =
          prob.generated_tests.empty() ? prob.inputs.public_examples : prob.generated_tests;
      if (!tests.empty()) {
        auto fps = fingerprint(pool, tests, cfg.test_fuel);
        int idx = dual_agreement_select(fps, pool.size());
        out.ran = true;
        out.selected_id = pool[(size_t)idx].id;
        out.selected_index = pool[(size_t)idx].generation_index;
        out.correct = correct[(size_t)idx];
      }
    } else if (sel == "random_pass1") {
      std::mt19937_64 rng(cfg.seed ^ fnv1a(prob.inputs.id));
      size_t idx = std::uniform_int_distribution<size_t>(0, pool.size() - 1)(rng);
      out.ran = true;
      out.selected_id = pool[idx].id;
      out.selected_index = pool[idx].generation_index;
      out.correct = correct[idx];
    } else if (sel == "oracle_passN") {
      out.ran = true;
      for (size_t i = 0; i < pool.size(); ++i) {
        if (correct[i]) {
          out.selected_id = pool[i].id;
          out.selected_index = pool[i].generation_index;
          out.correct = true;
          break;
        }
      }
    } else {
      throw std::invalid_argument("unknown selector: " + sel);
    }
    out.wall_ms = ms_since(t0);
    record(sel, std::move(out));
  }

  res.wall_ms = ms_since(t_start);
  return res;
}

json selector_to_json(const SelectorOutcome& s) {
  json j;
  j["ran"] = s.ran;
  j["selected"] = s.selected_id;
  j["selected_index"] = s.selected_index;
  j["correct"] = s.correct;
  j["wall_ms"] = s.wall_ms;
  if (s.pair_checks > 0 || s.partitions > 0) {
    j["fallback_used"] = s.fallback_used;
    j["pair_checks"] = s.pair_checks;
    j["partitions"] = s.partitions;
    j["all_exhaustive"] = s.all_exhaustive;
    j["smt_queries"] = s.smt_queries;
  }
  return j;
}

}  // namespace

RunReport evaluate(const RunConfig& cfg, const LoadReport& corpus) {
  RunReport report;
  report.skipped = corpus.skipped;
  report.problems.resize(corpus.problems.size());

  const int n_problems = (int)corpus.problems.size();
#ifdef _OPENMP
  if (cfg.threads != 1) {
    int nt = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (int i = 0; i < n_problems; ++i)
      report.problems[(size_t)i] = run_problem(cfg, corpus.problems[(size_t)i]);
  } else
#endif
  {
    for (int i = 0; i < n_problems; ++i)
      report.problems[(size_t)i] = run_problem(cfg, corpus.problems[(size_t)i]);
  }

  // Aggregate accuracy per selector over the problems it ran on.
  json agg;
  agg["type"] = "aggregate";
  agg["schema_version"] = 1;
  agg["problems"] = n_problems;
  agg["skipped_problems"] = (int)corpus.skipped.size();
  json sels;
  for (const auto& sel : cfg.selectors) {
    int ran = 0, right = 0;
    double wall = 0.0;
    for (const auto& pr : report.problems) {
      auto it = pr.selectors.find(sel);
      if (it == pr.selectors.end()) continue;
      wall += it->second.wall_ms;
      if (!it->second.ran) continue;
      ++ran;
      right += it->second.correct;
    }
    json s;
    s["problems_run"] = ran;
    s["accuracy"] = ran > 0 ? (double)right / ran : 0.0;
    s["wall_ms_total"] = wall;
    sels[sel] = s;
  }
  agg["selectors"] = sels;
  double p1 = 0.0, pn = 0.0, wall_total = 0.0;
  for (const auto& pr : report.problems) {
    p1 += pr.pass1;
    pn += pr.passN;
    wall_total += pr.wall_ms;
  }
  agg["pass_at_1"] = n_problems > 0 ? p1 / n_problems : 0.0;
  agg["pass_at_n"] = n_problems > 0 ? pn / n_problems : 0.0;
  agg["wall_ms_total"] = wall_total;
  json cfgj;
  cfgj["n"] = cfg.n_candidates;
  cfgj["seed"] = cfg.seed;
  cfgj["selectors"] = cfg.selectors;
  cfgj["budget_paths"] = cfg.budget.max_paths;
  cfgj["unroll"] = cfg.budget.loop_unroll_limit;
  cfgj["solver_timeout_ms"] = cfg.budget.solver_timeout_ms;
  cfgj["threads"] = cfg.threads;
  agg["config"] = cfgj;
  report.aggregate = agg;
  return report;
}

std::vector<std::string> report_to_jsonl(const RunReport& report) {
  std::vector<std::string> lines;
  for (const auto& pr : report.problems) {
    json j;
    j["type"] = "problem";
    j["id"] = pr.id;
    j["n"] = pr.n;
    j["c"] = pr.c;
    j["live"] = pr.live;
    j["pass1"] = pr.pass1;
    j["passN"] = pr.passN;
    json sels;
    for (const auto& [name, s] : pr.selectors) sels[name] = selector_to_json(s);
    j["selectors"] = sels;
    j["label_ms"] = pr.label_ms;
    j["wall_ms"] = pr.wall_ms;
    lines.push_back(j.dump());
  }
  for (const auto& [id, reason] : report.skipped) {
    json j;
    j["type"] = "skipped_problem";
    j["id"] = id;
    j["reason"] = reason;
    lines.push_back(j.dump());
  }
  lines.push_back(report.aggregate.dump());
  return lines;
}

namespace {

void strip_ms_keys(json& j) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end();) {
      const std::string& key = it.key();
      if (key.size() > 3 && key.compare(key.size() - 3, 3, "_ms") == 0) {
        it = j.erase(it);
      } else {
        strip_ms_keys(it.value());
        ++it;
      }
    }
  } else if (j.is_array()) {
    for (auto& e : j) strip_ms_keys(e);
  }
}

}  // namespace

std::string normalize_report_line(const std::string& line) {
  json j = json::parse(line);
  strip_ms_keys(j);
  return j.dump();
}

json PairAccReport::to_json() const {
  json j;
  j["type"] = "pairwise_accuracy";
  j["schema_version"] = 1;
  j["total_scored"] = total_scored;
  j["total_matched"] = total_matched;
  j["micro_accuracy"] = micro;
  j["macro_accuracy"] = macro;
  json probs = json::array();
  for (const auto& p : problems) {
    json pj;
    pj["id"] = p.id;
    pj["scored"] = p.scored;
    pj["matched"] = p.matched;
    pj["excluded"] = p.excluded;
    probs.push_back(pj);
  }
  j["problems"] = probs;
  return j;
}

PairAccReport pairwise_equivalence_accuracy(const RunConfig& cfg, const LoadReport& corpus) {
  PairAccReport report;
  report.problems.resize(corpus.problems.size());

  const int n_problems = (int)corpus.problems.size();
  auto run_one = [&](int pi) {
    const LoadedProblem& prob = corpus.problems[(size_t)pi];
    PairAccProblem pa;
    pa.id = prob.inputs.id;
    std::vector<Program> pool = live_pool(prob, effective_n(prob, cfg.n_candidates));
    std::vector<bool> correct(pool.size());
    for (size_t i = 0; i < pool.size(); ++i)
      correct[i] = passes_hidden(pool[i], prob.hidden_tests, cfg.test_fuel);

    for (size_t i = 0; i < pool.size(); ++i) {
      for (size_t j = i + 1; j < pool.size(); ++j) {
        if (!correct[i] && !correct[j]) {
          ++pa.excluded;  // benchmark failure does not pin down equivalence
          continue;
        }
        bool ref_equivalent = correct[i] && correct[j];
        bool sep_equivalent;
        try {
          PairCheckResult pc = check_divergence(pool[i], pool[j], prob.inputs, cfg.budget,
                                                cfg.solver, cfg.max_array_len);
          sep_equivalent = !pc.verdict.distinct();
        } catch (const std::exception&) {
          sep_equivalent = false;
        }
        ++pa.scored;
        if (sep_equivalent == ref_equivalent) ++pa.matched;
      }
    }
    report.problems[(size_t)pi] = std::move(pa);
  };

#ifdef _OPENMP
  if (cfg.threads != 1) {
    int nt = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (int i = 0; i < n_problems; ++i) run_one(i);
  } else
#endif
  {
    for (int i = 0; i < n_problems; ++i) run_one(i);
  }

  double macro_sum = 0.0;
  int macro_n = 0;
  for (const auto& p : report.problems) {
    report.total_scored += p.scored;
    report.total_matched += p.matched;
    if (p.scored > 0) {
      macro_sum += (double)p.matched / p.scored;
      ++macro_n;
    }
  }
  if (report.total_scored == 0)
    throw UndefinedMetric("no pairs with at least one correct candidate");
  report.micro = (double)report.total_matched / report.total_scored;
  report.macro = macro_n > 0 ? macro_sum / macro_n : 0.0;
  return report;
}

}  // namespace sep
