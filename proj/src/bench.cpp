#include "ringsat/bench.hpp"

#include "ringsat/checker.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <ostream>

namespace ringsat {

const char *verdict_name(Verdict verdict) {
  switch (verdict) {
  case Verdict::Sat:
    return "SAT";
  case Verdict::Unsat:
    return "UNSAT";
  default:
    return "UNKNOWN";
  }
}

BenchRow bench_run(const BenchInstance &instance, unsigned threads, uint64_t seed, ProofMode mode,
                   const BenchConfig &config, bool keep_proof) {
  BenchRow row;
  row.instance = instance.name;
  row.threads = threads;
  row.seed = seed;
  row.mode = mode;

  SolverOptions options = config.base;
  options.threads = threads;
  options.seed = seed;
  options.time_limit = config.time_limit;
  options.proof_path.clear();
  std::unique_ptr<ProofTracer> tracer;
  if (mode != ProofMode::Off) {
    tracer = std::make_unique<ProofTracer>(config.encoding, mode);
    options.proof = tracer.get();
  } else {
    options.proof = nullptr;
  }

  const auto start = std::chrono::steady_clock::now();
  SolveResult result;
  {
    Ruler ruler(instance.formula, options);
    result = ruler.solve();
  }
  if (tracer)
    tracer->close();
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  row.verdict = result.verdict;
  if (tracer) {
    row.proof_bytes = tracer->bytes_written();
    row.adds = tracer->added();
    row.deletes = tracer->deleted();
    if (config.check && result.verdict == Verdict::Unsat) {
      const CheckResult check = check_proof(instance.formula, tracer->contents(), config.encoding);
      row.checked = true;
      row.verified = check.verified();
      row.check_ms = check.seconds * 1000.0;
    }
    if (keep_proof)
      row.proof = tracer->contents();
  }
  return row;
}

std::vector<BenchRow> run_bench(const std::vector<BenchInstance> &instances, const BenchConfig &config,
                                const std::function<void(const BenchRow &)> &on_row) {
  std::vector<BenchRow> rows;
  for (const auto &instance : instances)
    for (unsigned threads : config.threads)
      for (uint64_t seed : config.seeds)
        for (ProofMode mode : config.modes) {
          rows.push_back(bench_run(instance, threads, seed, mode, config));
          if (on_row)
            on_row(rows.back());
        }
  return rows;
}

std::vector<BenchInstance> load_corpus(const std::string &dir) {
  std::vector<std::filesystem::path> paths;
  for (const auto &entry : std::filesystem::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".cnf")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  std::vector<BenchInstance> instances;
  for (const auto &path : paths)
    instances.push_back({path.filename().string(), parse_dimacs_file(path.string())});
  return instances;
}

void write_csv_header(std::ostream &out) {
  out << "instance,threads,seed,mode,verdict,wall_ms,proof_bytes,adds,deletes,check_ms\n";
}

void write_csv_row(std::ostream &out, const BenchRow &row) {
  out << row.instance << ',' << row.threads << ',' << row.seed << ',' << to_string(row.mode) << ','
      << verdict_name(row.verdict) << ',' << static_cast<uint64_t>(row.wall_ms + 0.5) << ',' << row.proof_bytes
      << ',' << row.adds << ',' << row.deletes << ',' << static_cast<uint64_t>(row.check_ms + 0.5) << '\n';
}

} // namespace ringsat
