// Benchmark: serial vs OpenMP-parallel harness evaluation on a
// generated corpus. Problems are independent, so the parallel run must
// produce the identical report (timing fields aside); this binary checks
// that and prints the speedup.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sep/corpus.hpp"
#include "sep/evaluate.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double run_once(const sep::RunConfig& cfg, const sep::LoadReport& corpus,
                std::vector<std::string>* lines) {
  auto t0 = Clock::now();
  sep::RunReport report = sep::evaluate(cfg, corpus);
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  lines->clear();
  for (const auto& line : sep::report_to_jsonl(report))
    lines->push_back(sep::normalize_report_line(line));
  return secs;
}

}  // namespace

int main(int argc, char** argv) {
  int problems = argc > 1 ? std::atoi(argv[1]) : 24;
  int pool = argc > 2 ? std::atoi(argv[2]) : 10;

  std::string dir = "/tmp/sep-bench-corpus";
  std::error_code ec;
  std::filesystem::remove_all(dir, ec);
  sep::GenConfig gcfg;
  gcfg.seed = 99;
  gcfg.n_problems = problems;
  gcfg.pool_size = pool;
  gcfg.correct_fraction = 0.6;
  gcfg.out_dir = dir;
  sep::generate_corpus(gcfg);
  sep::LoadReport corpus = sep::load_corpus(dir);

  sep::RunConfig cfg;
  cfg.corpus_path = dir;
  cfg.n_candidates = pool;
  cfg.seed = 7;
  cfg.selectors = {"sep", "similarity", "dual_agreement"};

  std::vector<std::string> serial_lines, parallel_lines;
  cfg.threads = 1;
  double serial_s = run_once(cfg, corpus, &serial_lines);
  std::printf("serial   (1 thread) : %7.2fs over %d problems\n", serial_s, problems);

#ifdef _OPENMP
  cfg.threads = 0;
  double parallel_s = run_once(cfg, corpus, &parallel_lines);
  std::printf("parallel (%d threads): %7.2fs  speedup %.2fx\n", omp_get_max_threads(),
              parallel_s, serial_s / parallel_s);
  if (serial_lines != parallel_lines) {
    std::fprintf(stderr, "FAIL: parallel report differs from the serial reference\n");
    return 1;
  }
  std::printf("parallel report matches the serial reference\n");
#else
  std::printf("built without OpenMP; parallel comparison skipped\n");
#endif
  return 0;
}
