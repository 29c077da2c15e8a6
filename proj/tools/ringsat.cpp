// ringsat command line: solve, check, bench, gen.

#include "ringsat/bench.hpp"
#include "ringsat/checker.hpp"
#include "ringsat/generators.hpp"
#include "ringsat/ruler.hpp"

#include <CLI11.hpp>

#include <cinttypes>
#include <filesystem>
#include <cstdio>
#include <fstream>
#include <iostream>

using namespace ringsat;

namespace {

struct SolveArgs {
  std::string input;
  unsigned threads = default_threads();
  std::string proof_path;
  bool binary_proof = false;
  std::string proof_mode = "shared";
  uint64_t seed = 0;
  double time_limit = 0;
  uint64_t conflict_limit = 0;
  bool no_inprocessing = false;
  bool no_preprocessing = false;
  bool no_exchange = false;
  bool quiet = false;
  int verbose = 0;
};

void print_model(const std::vector<signed char> &model) {
  std::string line = "v";
  for (size_t v = 1; v < model.size(); v++) {
    const std::string lit = " " + std::string(model[v] < 0 ? "-" : "") + std::to_string(v);
    if (line.size() + lit.size() > 78) {
      std::puts(line.c_str());
      line = "v";
    }
    line += lit;
  }
  line += " 0";
  std::puts(line.c_str());
}

void print_stats(const SolveResult &result, const SolveArgs &args) {
  const auto &s = result.stats;
  std::printf("c conflicts %" PRIu64 "\n", s.conflicts);
  std::printf("c decisions %" PRIu64 "\n", s.decisions);
  std::printf("c propagations %" PRIu64 "\n", s.propagations);
  std::printf("c restarts %" PRIu64 "\n", s.restarts);
  std::printf("c reductions %" PRIu64 "\n", s.reductions);
  std::printf("c exports %" PRIu64 "\n", s.exported);
  std::printf("c imports %" PRIu64 "\n", s.imported);
  std::printf("c imported-units %" PRIu64 "\n", s.imported_units);
  std::printf("c simplification-rounds %" PRIu64 "\n", s.inprocess_rounds);
  std::printf("c eliminated %" PRIu64 "\n", s.eliminated);
  std::printf("c fixed %" PRIu64 "\n", s.fixed);
  std::printf("c peak-tracked-bytes %" PRIu64 "\n", s.peak_tracked_bytes);
  if (!args.proof_path.empty())
    std::printf("c proof-bytes %" PRIu64 " adds %" PRIu64 " deletes %" PRIu64 "\n", s.proof_bytes, s.proof_adds,
                s.proof_deletes);
  if (s.winner >= 0)
    std::printf("c winner %d\n", s.winner);
  if (args.verbose)
    for (size_t i = 0; i < s.rings.size(); i++) {
      const auto &r = s.rings[i];
      std::printf("c ring %zu conflicts %" PRIu64 " decisions %" PRIu64 " learned %" PRIu64 " exported %" PRIu64
                  " imported %" PRIu64 " subsumed-imports %" PRIu64 "\n",
                  i, r.conflicts, r.decisions, r.learned, r.exported_clauses + r.exported_binaries,
                  r.imported_clauses + r.imported_binaries, r.subsumed_imports);
    }
  std::printf("c wall-seconds %.3f\n", s.wall_seconds);
}

int run_solve(const SolveArgs &args) {
  InputFormula formula;
  try {
    formula = parse_dimacs_file(args.input);
  } catch (const std::exception &e) {
    std::fprintf(stderr, "ringsat: %s\n", e.what());
    return 1;
  }
  SolverOptions options;
  options.threads = args.threads;
  options.proof_path = args.proof_path;
  options.proof_encoding = args.binary_proof ? ProofEncoding::Binary : ProofEncoding::Ascii;
  options.proof_mode = parse_proof_mode(args.proof_mode);
  options.seed = args.seed;
  options.time_limit = args.time_limit;
  if (args.conflict_limit)
    options.conflict_limit = args.conflict_limit;
  options.inprocessing = !args.no_inprocessing;
  options.preprocessing = !args.no_preprocessing;
  options.exchange = !args.no_exchange;

  if (!args.quiet) {
    std::printf("c ringsat\n");
    std::printf("c input %s: %u variables, %zu clauses\n", args.input.c_str(), formula.num_vars,
                formula.clauses.size() + formula.has_empty_clause);
    for (const auto &w : formula.warnings)
      std::printf("c warning: %s\n", w.c_str());
    std::printf("c threads %u seed %" PRIu64 " proof %s\n", args.threads, args.seed,
                args.proof_path.empty() ? "off" : args.proof_mode.c_str());
    std::fflush(stdout);
  }
  SolveResult result;
  try {
    Ruler ruler(formula, options);
    result = ruler.solve();
  } catch (const std::runtime_error &e) {
    std::fprintf(stderr, "ringsat: %s\n", e.what());
    return 1;
  }
  if (!args.quiet)
    print_stats(result, args);
  switch (result.verdict) {
  case Verdict::Sat:
    std::puts("s SATISFIABLE");
    print_model(result.model);
    return 10;
  case Verdict::Unsat:
    std::puts("s UNSATISFIABLE");
    return 20;
  default:
    std::puts("s UNKNOWN");
    return 0;
  }
}

template <class T> std::vector<T> parse_list(const std::string &text, T (*convert)(const std::string &)) {
  std::vector<T> out;
  size_t start = 0;
  while (start <= text.size()) {
    const size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty())
      out.push_back(convert(item));
    if (comma == std::string::npos)
      break;
    start = comma + 1;
  }
  return out;
}

unsigned to_unsigned(const std::string &s) {
  const unsigned long v = std::stoul(s);
  if (!v)
    throw std::invalid_argument("thread counts must be positive");
  return static_cast<unsigned>(v);
}
uint64_t to_u64(const std::string &s) { return std::stoull(s); }
ProofMode to_mode(const std::string &s) { return parse_proof_mode(s); }

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"ringsat: parallel proof-producing SAT solver"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto *solve = app.add_subcommand("solve", "solve a DIMACS CNF file");
  solve->add_option("input", solve_args.input, "CNF file")->required();
  solve->add_option("--threads,-t", solve_args.threads, "solver threads")->check(CLI::Range(1u, 4096u));
  solve->add_option("--proof", solve_args.proof_path, "write a DRAT proof to this file");
  solve->add_flag("--binary-proof", solve_args.binary_proof, "binary DRAT encoding");
  solve->add_option("--proof-mode", solve_args.proof_mode, "shared or fakecopy")
      ->check(CLI::IsMember({"shared", "fakecopy"}));
  solve->add_option("--seed", solve_args.seed, "random seed");
  solve->add_option("--time-limit", solve_args.time_limit, "seconds")->check(CLI::NonNegativeNumber);
  solve->add_option("--conflict-limit", solve_args.conflict_limit, "conflicts per ring");
  solve->add_flag("--no-inprocessing", solve_args.no_inprocessing);
  solve->add_flag("--no-preprocessing", solve_args.no_preprocessing);
  solve->add_flag("--no-exchange", solve_args.no_exchange, "no clause or unit import/export");
  solve->add_flag("--quiet,-q", solve_args.quiet, "only s and v lines");
  solve->add_flag("-v,--verbose", solve_args.verbose, "more statistics");

  std::string check_cnf, check_proof_path;
  bool check_binary = false;
  auto *check = app.add_subcommand("check", "check a DRAT proof against a CNF file");
  check->add_option("cnf", check_cnf)->required();
  check->add_option("proof", check_proof_path)->required();
  check->add_flag("--binary", check_binary, "binary DRAT input");

  std::vector<std::string> bench_inputs;
  std::string bench_threads = "1", bench_seeds = "0", bench_modes = "shared", bench_out;
  double bench_time_limit = 0;
  bool bench_binary = false, bench_no_check = false;
  auto *bench = app.add_subcommand("bench", "run a corpus and report CSV");
  bench->add_option("inputs", bench_inputs, "CNF files or directories")->required();
  bench->add_option("--threads", bench_threads, "comma separated thread counts");
  bench->add_option("--seeds", bench_seeds, "comma separated seeds");
  bench->add_option("--modes", bench_modes, "comma separated: shared, fakecopy, off");
  bench->add_option("--time-limit", bench_time_limit, "seconds per run")->check(CLI::NonNegativeNumber);
  bench->add_flag("--binary-proof", bench_binary);
  bench->add_flag("--no-check", bench_no_check, "skip proof checking");
  bench->add_option("--output,-o", bench_out, "CSV file (default stdout)");

  std::string gen_kind, gen_out;
  uint32_t gen_vars = 100, gen_clauses = 426, gen_k = 3, gen_holes = 5;
  uint64_t gen_seed = 0;
  auto *gen = app.add_subcommand("gen", "write a generated instance (random or php)");
  gen->add_option("kind", gen_kind)->required()->check(CLI::IsMember({"random", "php"}));
  gen->add_option("--vars", gen_vars);
  gen->add_option("--clauses", gen_clauses);
  gen->add_option("--k", gen_k)->check(CLI::Range(1u, 64u));
  gen->add_option("--holes", gen_holes)->check(CLI::Range(1u, 64u));
  gen->add_option("--seed", gen_seed);
  gen->add_option("--output,-o", gen_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::fprintf(stderr, "ringsat: %s\n", e.what());
    CLI::App *sub = nullptr;
    for (auto *s : app.get_subcommands())
      sub = s;
    std::fputs((sub ? sub : &app)->help().c_str(), stderr);
    return 1;
  }

  if (*solve) {
    if (solve_args.proof_mode == "fakecopy" && solve_args.proof_path.empty()) {
      std::fputs("ringsat: --proof-mode fakecopy requires --proof\n", stderr);
      std::fputs(solve->help().c_str(), stderr);
      return 1;
    }
    return run_solve(solve_args);
  }

  if (*check) {
    const CheckResult result =
        check_proof_files(check_cnf, check_proof_path, check_binary ? ProofEncoding::Binary : ProofEncoding::Ascii);
    if (result.verified()) {
      std::printf("s VERIFIED\nc additions %" PRIu64 " deletions %" PRIu64 " rat %" PRIu64 " seconds %.3f\n",
                  result.additions, result.deletions, result.rat_additions, result.seconds);
      return 0;
    }
    std::puts("s NOT VERIFIED");
    std::fprintf(stderr, "failed line %zu: %s%s%s\n", result.line, to_string(result.status),
                 result.message.empty() ? "" : ": ", result.message.c_str());
    return 1;
  }

  if (*bench) {
    BenchConfig config;
    std::vector<BenchInstance> instances;
    try {
      config.threads = parse_list<unsigned>(bench_threads, to_unsigned);
      config.seeds = parse_list<uint64_t>(bench_seeds, to_u64);
      config.modes = parse_list<ProofMode>(bench_modes, to_mode);
      for (const auto &input : bench_inputs) {
        if (std::filesystem::is_directory(input)) {
          auto more = load_corpus(input);
          std::move(more.begin(), more.end(), std::back_inserter(instances));
        } else {
          instances.push_back({std::filesystem::path(input).filename().string(), parse_dimacs_file(input)});
        }
      }
    } catch (const std::exception &e) {
      std::fprintf(stderr, "ringsat: %s\n", e.what());
      return 1;
    }
    if (config.threads.empty() || config.seeds.empty() || config.modes.empty()) {
      std::fputs("ringsat: empty thread, seed or mode list\n", stderr);
      return 1;
    }
    config.time_limit = bench_time_limit;
    config.encoding = bench_binary ? ProofEncoding::Binary : ProofEncoding::Ascii;
    config.check = !bench_no_check;
    std::ofstream file;
    if (!bench_out.empty()) {
      file.open(bench_out);
      if (!file) {
        std::fprintf(stderr, "ringsat: cannot write %s\n", bench_out.c_str());
        return 1;
      }
    }
    std::ostream &out = bench_out.empty() ? std::cout : file;
    write_csv_header(out);
    bool failed = false;
    run_bench(instances, config, [&](const BenchRow &row) {
      write_csv_row(out, row);
      out.flush();
      if (row.checked && !row.verified) {
        std::fprintf(stderr, "ringsat: proof of %s (threads %u seed %" PRIu64 ") rejected\n", row.instance.c_str(),
                     row.threads, row.seed);
        failed = true;
      }
    });
    return failed ? 1 : 0;
  }

  if (*gen) {
    InputFormula formula;
    if (gen_kind == "php") {
      formula = pigeonhole(gen_holes);
    } else {
      if (gen_k > gen_vars) {
        std::fputs("ringsat: --k exceeds --vars\n", stderr);
        return 1;
      }
      formula = random_ksat(gen_vars, gen_clauses, gen_k, gen_seed);
    }
    if (gen_out.empty()) {
      write_dimacs(std::cout, formula);
    } else {
      std::ofstream file(gen_out);
      if (!file) {
        std::fprintf(stderr, "ringsat: cannot write %s\n", gen_out.c_str());
        return 1;
      }
      write_dimacs(file, formula);
    }
    return 0;
  }
  return 1;
}
