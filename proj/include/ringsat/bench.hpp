#pragma once

#include "ringsat/ruler.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace ringsat {

struct BenchInstance {
  std::string name;
  InputFormula formula;
};

struct BenchConfig {
  std::vector<unsigned> threads{1};
  std::vector<uint64_t> seeds{0};
  std::vector<ProofMode> modes{ProofMode::Shared};
  ProofEncoding encoding = ProofEncoding::Ascii;
  double time_limit = 0;
  bool check = true; // run the checker on UNSAT proofs
  SolverOptions base;
};

struct BenchRow {
  std::string instance;
  unsigned threads = 1;
  uint64_t seed = 0;
  ProofMode mode = ProofMode::Shared;
  Verdict verdict = Verdict::Unknown;
  double wall_ms = 0;
  uint64_t proof_bytes = 0;
  uint64_t adds = 0;
  uint64_t deletes = 0;
  double check_ms = 0;
  bool checked = false;  // checker ran
  bool verified = false; // and accepted the proof
  std::string proof;     // proof contents when kept
};

const char *verdict_name(Verdict verdict);

// Runs one configuration with the proof collected in memory.
BenchRow bench_run(const BenchInstance &instance, unsigned threads, uint64_t seed, ProofMode mode,
                   const BenchConfig &config, bool keep_proof = false);

// Every instance x threads x seed x mode, in that nesting order.
std::vector<BenchRow> run_bench(const std::vector<BenchInstance> &instances, const BenchConfig &config,
                                const std::function<void(const BenchRow &)> &on_row = {});

// All *.cnf files below 'dir' in name order.
std::vector<BenchInstance> load_corpus(const std::string &dir);

void write_csv_header(std::ostream &out);
void write_csv_row(std::ostream &out, const BenchRow &row);

} // namespace ringsat
