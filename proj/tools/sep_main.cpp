// sep: best-of-N candidate selection by symbolic equivalence
// partitioning, plus baselines and a corpus generator.
//
//   sep run        evaluate selectors over a corpus, write a JSONL report
//   sep gen-corpus emit a seeded synthetic corpus
//   sep pair-acc   pairwise equivalence accuracy against hidden labels
//
// Exit codes: 0 ok, 2 corpus error, 3 solver backend unavailable.
#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "sep/corpus.hpp"
#include "sep/evaluate.hpp"
#include "sep/solver.hpp"

namespace fs = std::filesystem;

namespace {

std::string find_on_path(const std::string& name) {
  const char* path = std::getenv("PATH");
  if (!path) return "";
  std::stringstream ss(path);
  std::string dir;
  while (std::getline(ss, dir, ':')) {
    fs::path candidate = fs::path(dir) / name;
    std::error_code ec;
    if (fs::exists(candidate, ec) && !fs::is_directory(candidate, ec)) return candidate.string();
  }
  return "";
}

// Resolution order: explicit flag, $SEP_SOLVER_CMD, z3 on PATH, the
// minismt binary next to this one, none (enumerative only).
std::string resolve_solver_cmd(const std::string& flag, const char* argv0) {
  if (flag == "builtin" || flag == "none") return "";
  if (!flag.empty() && flag != "auto") return flag;
  if (const char* env = std::getenv("SEP_SOLVER_CMD"); env && *env) return env;
  if (!find_on_path("z3").empty()) return "z3 -in";
  std::error_code ec;
  fs::path self = fs::canonical(fs::path(argv0), ec);
  if (!ec) {
    fs::path sibling = self.parent_path() / "minismt";
    if (fs::exists(sibling, ec)) return sibling.string();
  }
  std::string on_path = find_on_path("minismt");
  if (!on_path.empty()) return on_path;
  return "";
}

int ensure_backend(sep::SolverConfig& cfg) {
  if (cfg.external_cmd.empty()) return 0;  // enumerative only, by request
  if (!sep::probe_external_solver(cfg.external_cmd)) {
    std::cerr << "error: solver backend unavailable: " << cfg.external_cmd << "\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic equivalence partitioning selector"};
  app.require_subcommand(1);

  // --- run -----------------------------------------------------------------
  auto* run = app.add_subcommand("run", "Evaluate selectors over a corpus");
  sep::RunConfig cfg;
  std::string solver_flag = "auto";
  std::string selectors_csv = "sep,similarity,dual_agreement,random_pass1,oracle_passN";
  bool log_smt = false;
  cfg.output_path = "sep_report.jsonl";
  run->add_option("--corpus", cfg.corpus_path, "Corpus directory")->required();
  run->add_option("--n", cfg.n_candidates, "Candidate pool size (e.g. 5, 10, 20)")
      ->check(CLI::PositiveNumber);
  run->add_option("--selectors", selectors_csv, "Comma-separated selector list");
  run->add_option("--budget-paths", cfg.budget.max_paths, "Max symbolic paths per execution")
      ->check(CLI::PositiveNumber);
  run->add_option("--unroll", cfg.budget.loop_unroll_limit, "Loop unroll limit")
      ->check(CLI::PositiveNumber);
  run->add_option("--solver-timeout-ms", cfg.budget.solver_timeout_ms, "Per-query timeout");
  run->add_option("--deadline-ms", cfg.budget.total_deadline_ms, "Per-pair-check deadline");
  run->add_option("--solver-cmd", solver_flag,
                  "SMT-LIB2 solver command ('auto', 'builtin', or a command line)");
  run->add_option("--seed", cfg.seed, "Seed for stochastic selector choices");
  run->add_option("--out", cfg.output_path, "Report path (JSONL)");
  run->add_option("--threads", cfg.threads, "1 = serial; 0 = all cores; k = k threads");
  run->add_option("--max-array-len", cfg.max_array_len, "Array length cap for symbolic runs");
  run->add_flag("--log-smt", log_smt, "Write SMT transcripts next to the report");

  // --- gen-corpus ------------------------------------------------------------
  auto* gen = app.add_subcommand("gen-corpus", "Generate a synthetic corpus");
  sep::GenConfig gcfg;
  gen->add_option("--out", gcfg.out_dir, "Output directory")->required();
  gen->add_option("--seed", gcfg.seed, "Generator seed");
  gen->add_option("--problems", gcfg.n_problems, "Number of problems")->check(CLI::PositiveNumber);
  gen->add_option("--pool", gcfg.pool_size, "Candidates per problem")->check(CLI::PositiveNumber);
  gen->add_option("--correct-fraction", gcfg.correct_fraction, "Fraction of correct candidates")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--hidden-tests", gcfg.hidden_tests, "Hidden tests per problem");
  gen->add_option("--generated-tests", gcfg.generated_tests, "Generated (noisy) tests");
  gen->add_option("--test-noise", gcfg.generated_test_noise, "Corruption rate of generated tests");

  // --- pair-acc ---------------------------------------------------------------
  auto* pacc = app.add_subcommand("pair-acc", "Pairwise equivalence accuracy");
  sep::RunConfig pcfg;
  std::string psolver_flag = "auto";
  std::string pout = "pair_acc.json";
  pacc->add_option("--corpus", pcfg.corpus_path, "Corpus directory")->required();
  pacc->add_option("--n", pcfg.n_candidates, "Candidate pool size");
  pacc->add_option("--budget-paths", pcfg.budget.max_paths, "Max symbolic paths");
  pacc->add_option("--unroll", pcfg.budget.loop_unroll_limit, "Loop unroll limit");
  pacc->add_option("--solver-timeout-ms", pcfg.budget.solver_timeout_ms, "Per-query timeout");
  pacc->add_option("--deadline-ms", pcfg.budget.total_deadline_ms, "Per-pair deadline");
  pacc->add_option("--solver-cmd", psolver_flag, "SMT-LIB2 solver command");
  pacc->add_option("--out", pout, "Output JSON path");
  pacc->add_option("--threads", pcfg.threads, "1 = serial; 0 = all cores");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      sep::generate_corpus(gcfg);
      std::cout << "corpus written to " << gcfg.out_dir << "\n";
      return 0;
    }

    if (*run) {
      cfg.solver.external_cmd = resolve_solver_cmd(solver_flag, argv[0]);
      cfg.solver.timeout_ms = cfg.budget.solver_timeout_ms;
      if (log_smt) cfg.solver.log_dir = cfg.output_path + ".smt";
      if (int rc = ensure_backend(cfg.solver)) return rc;
      cfg.selectors.clear();
      std::stringstream ss(selectors_csv);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) cfg.selectors.push_back(item);

      sep::LoadReport corpus = sep::load_corpus(cfg.corpus_path);
      sep::RunReport report = sep::evaluate(cfg, corpus);
      std::ofstream out(cfg.output_path);
      if (!out) {
        std::cerr << "error: cannot write " << cfg.output_path << "\n";
        return 1;
      }
      for (const auto& line : sep::report_to_jsonl(report)) out << line << "\n";
      std::cout << report.aggregate.dump() << "\n";
      return 0;
    }

    if (*pacc) {
      pcfg.solver.external_cmd = resolve_solver_cmd(psolver_flag, argv[0]);
      pcfg.solver.timeout_ms = pcfg.budget.solver_timeout_ms;
      if (int rc = ensure_backend(pcfg.solver)) return rc;
      sep::LoadReport corpus = sep::load_corpus(pcfg.corpus_path);
      sep::PairAccReport report = sep::pairwise_equivalence_accuracy(pcfg, corpus);
      std::ofstream out(pout);
      out << report.to_json().dump(2) << "\n";
      std::cout << report.to_json().dump() << "\n";
      return 0;
    }
  } catch (const sep::CorpusFormatError& e) {
    std::cerr << "corpus error: " << e.what() << "\n";
    return 2;
  } catch (const sep::BackendUnavailable& e) {
    std::cerr << "solver backend error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
