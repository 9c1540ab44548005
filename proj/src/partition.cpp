#include "sep/partition.hpp"

#include <algorithm>
#include <chrono>

namespace sep {

PrefilterResult prefilter(const std::vector<Program>& pool, const ProblemInputs& spec,
                          int64_t fuel) {
  PrefilterResult r;
  for (size_t i = 0; i < pool.size(); ++i)
    if (run_public_examples(pool[i], spec, fuel).pass) r.survivors.push_back((int)i);
  if (r.survivors.empty()) {
    for (size_t i = 0; i < pool.size(); ++i) r.survivors.push_back((int)i);
    r.fallback_used = true;
  }
  return r;
}

PartitionOutcome partition_pool(const std::vector<Program>& pool,
                                const std::vector<int>& survivors, const ProblemInputs& spec,
                                const Budget& budget, const SolverConfig& solver_cfg) {
  PartitionOutcome out;
  for (size_t si = 0; si < survivors.size(); ++si) {
    int cand = survivors[si];
    if (out.partitions.partitions.empty()) {
      out.partitions.partitions.push_back({(int)si, {(int)si}, 0});
      continue;
    }
    // Largest first, then earliest created.
    std::vector<Partition*> order;
    for (auto& p : out.partitions.partitions) order.push_back(&p);
    std::sort(order.begin(), order.end(), [](const Partition* a, const Partition* b) {
      if (a->members.size() != b->members.size()) return a->members.size() > b->members.size();
      return a->created_at < b->created_at;
    });

    bool matched = false;
    for (Partition* part : order) {
      const Program& rep = pool[survivors[(size_t)part->representative]];
      PairCheckRecord rec;
      rec.candidate = pool[cand].generation_index;
      rec.representative = rep.generation_index;
      bool distinct;
      try {
        PairCheckResult pc = check_divergence(pool[cand], rep, spec, budget, solver_cfg);
        distinct = pc.verdict.distinct();
        rec.distinct = distinct;
        rec.exhaustive = pc.verdict.distinct() ? true : pc.verdict.exhaustive;
        rec.wall_ms = pc.wall_ms;
        rec.smt_queries = pc.smt_queries;
      } catch (const std::exception& e) {
        // A candidate that cannot be shown equivalent opens its own
        // partition; joining on error could crown a wrong representative.
        distinct = true;
        rec.distinct = true;
        rec.errored = true;
        rec.error = e.what();
      }
      out.pair_checks.push_back(std::move(rec));
      if (!distinct) {
        part->members.push_back((int)si);
        matched = true;
        break;
      }
    }
    if (!matched) {
      int created = (int)out.partitions.partitions.size();
      out.partitions.partitions.push_back({(int)si, {(int)si}, created});
    }
  }
  return out;
}

int select_representative(const PartitionSet& ps) {
  int best = -1;
  size_t best_size = 0;
  for (const auto& p : ps.partitions) {
    if (p.members.size() > best_size) {
      best_size = p.members.size();
      best = p.representative;
    }
    // Equal sizes keep the earlier partition: creation order iteration.
  }
  return best;
}

SelectionReport sep_select(const std::vector<Program>& pool, const ProblemInputs& spec,
                           const Budget& budget, const SolverConfig& solver_cfg,
                           int64_t public_fuel) {
  SelectionReport report;
  auto t0 = std::chrono::steady_clock::now();
  PrefilterResult pf = prefilter(pool, spec, public_fuel);
  auto t1 = std::chrono::steady_clock::now();
  report.prefilter_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  report.fallback_used = pf.fallback_used;
  for (int idx : pf.survivors) report.prefilter_survivors.push_back(pool[idx].generation_index);

  PartitionOutcome po = partition_pool(pool, pf.survivors, spec, budget, solver_cfg);
  auto t2 = std::chrono::steady_clock::now();
  report.partition_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  report.partitions = std::move(po.partitions);
  report.pair_checks = std::move(po.pair_checks);

  int rep = select_representative(report.partitions);
  if (rep >= 0) {
    const Program& p = pool[pf.survivors[(size_t)rep]];
    report.selected = p.id;
    report.selected_index = p.generation_index;
  }
  return report;
}

}  // namespace sep
