#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "external.hpp"
#include "oracles.hpp"

#include "ringsat/checker.hpp"
#include "ringsat/generators.hpp"
#include "ringsat/ruler.hpp"

#include <random>

using namespace ringsat;

namespace {

std::vector<Lit> lits_of(std::initializer_list<int> xs) {
  std::vector<Lit> out;
  for (int x : xs)
    out.push_back(lit_from_dimacs(x));
  return out;
}

CheckResult check(uint32_t vars, const oracle::IntCnf &cnf, const std::string &proof) {
  return check_proof(oracle::from_ints(vars, cnf), proof, ProofEncoding::Ascii);
}

std::string solver_proof(const InputFormula &f, unsigned threads, ProofMode mode, uint64_t seed = 0) {
  ProofTracer proof(ProofEncoding::Ascii, mode);
  SolverOptions options;
  options.threads = threads;
  options.proof = &proof;
  options.proof_mode = mode;
  options.seed = seed;
  const auto result = solve(f, options);
  REQUIRE(result.verdict == Verdict::Unsat);
  proof.close();
  return proof.contents();
}

} // namespace

TEST_CASE("reverse unit propagation") {
  {
    ClauseDatabase db;
    db.insert(lits_of({1}));
    CHECK(db.rup(lits_of({1, 2})));
  }
  {
    ClauseDatabase db;
    db.insert(lits_of({1, 2}));
    CHECK(!db.rup(lits_of({1})));
  }
  {
    ClauseDatabase db;
    db.insert(lits_of({1, 2}));
    db.insert(lits_of({1, -2}));
    CHECK(db.rup(lits_of({1})));
    // The check leaves no assignment behind.
    CHECK(!db.rup(lits_of({2})));
    CHECK(db.rup(lits_of({1})));
  }
  {
    ClauseDatabase db;
    db.insert(lits_of({1, 2, 3}));
    db.insert(lits_of({-3, 4}));
    db.insert(lits_of({-4, 1}));
    CHECK(db.rup(lits_of({1, 2})));
    CHECK(!db.rup(lits_of({2})));
  }
}

TEST_CASE("multiset copies") {
  ClauseDatabase db;
  db.insert(lits_of({1, 2}));
  db.insert(lits_of({2, 1}));
  CHECK(db.copies(lits_of({1, 2})) == 2);
  CHECK(db.unique_clauses() == 1);
  db.insert(lits_of({-1}));
  CHECK(db.rup(lits_of({2})));
  CHECK(db.erase(lits_of({1, 2})));
  CHECK(db.rup(lits_of({2})));
  CHECK(db.erase(lits_of({2, 1})));
  CHECK(!db.rup(lits_of({2})));
  CHECK(!db.erase(lits_of({1, 2})));
  CHECK(db.copies(lits_of({1, 2})) == 0);
}

TEST_CASE("deleting a reason recomputes the top level") {
  ClauseDatabase db;
  db.insert(lits_of({1}));
  db.insert(lits_of({-1, 2}));
  CHECK(db.rup(lits_of({2})));
  db.erase(lits_of({1}));
  CHECK(!db.rup(lits_of({2})));
  db.insert(lits_of({1}));
  db.insert(lits_of({-2}));
  CHECK(db.inconsistent());
  db.erase(lits_of({-2}));
  CHECK(!db.inconsistent());
}

TEST_CASE("proof verdicts") {
  CHECK(check(1, {{1}, {-1}}, "0\n").status == CheckStatus::Verified);
  const auto failed = check(2, {{1, 2}, {-1, -2}}, "1 0\n");
  CHECK(failed.status == CheckStatus::AddFailed);
  CHECK(failed.line == 1);
  CHECK(check(2, {{1, 2}, {1, -2}, {-1, 2}, {-1, -2}}, "1 0\n0\n").verified());
  const auto missing = check(2, {{1, 2}, {1, -2}, {-1, 2}, {-1, -2}}, "1 0\n");
  CHECK(missing.status == CheckStatus::NoEmptyClause);
  const auto late = check(2, {{1, 2}, {1, -2}}, "c comment\n1 0\nd 1 0\n-1 0\n");
  CHECK(late.status == CheckStatus::AddFailed);
  CHECK(late.line == 4);
  const auto parse = check(2, {{1, 2}}, "1 0\n1 y 0\n");
  CHECK(parse.status == CheckStatus::ParseError);
  CHECK(parse.line == 2);
  // Empty clause in the input.
  CHECK(check_proof(parse_dimacs_string("p cnf 1 1\n0\n"), "0\n", ProofEncoding::Ascii).verified());
}

TEST_CASE("deleting one copy keeps the other") {
  const oracle::IntCnf cnf{{1, 2}, {1, -2}, {-1, 2}, {-1, -2}};
  CHECK(check(2, cnf, "1 2 0\nd 1 2 0\n1 0\n0\n").verified());
  CHECK(check(2, cnf, "d 1 2 0\n1 0\n").status == CheckStatus::AddFailed);
}

TEST_CASE("RAT fallback on the first literal") {
  // [3, 1] is not RUP but RAT on the fresh variable 3.
  const auto r = check(2, {{1, 2}, {-1, 2}}, "3 1 0\n");
  CHECK(r.status == CheckStatus::NoEmptyClause);
  CHECK(r.rat_additions == 1);
}

TEST_CASE("binary proofs") {
  const auto f = oracle::from_ints(2, {{1, 2}, {1, -2}, {-1, 2}, {-1, -2}});
  const std::string proof("a\x02\x00" "a\x00", 5);
  CHECK(check_proof(f, proof, ProofEncoding::Binary).verified());
  CHECK(check_proof(f, std::string("a\x04\x00", 3), ProofEncoding::Binary).status == CheckStatus::NoEmptyClause);
}

TEST_CASE("solver proofs are verified") {
  for (unsigned holes = 3; holes <= 5; holes++) {
    const auto f = pigeonhole(holes);
    for (unsigned threads : {1u, 2u, 4u})
      for (ProofMode mode : {ProofMode::Shared, ProofMode::FakeCopy}) {
        const auto proof = solver_proof(f, threads, mode, holes);
        const auto r = check_proof(f, proof, ProofEncoding::Ascii);
        CHECK(r.verified());
        if (auto external = external::drat_check(f, proof, false))
          CHECK(*external);
      }
  }
}

TEST_CASE("checker agrees with the external checker on mutated proofs") {
  if (!external::drat_checker_available()) {
    MESSAGE("no external DRAT checker installed");
    return;
  }
  std::mt19937_64 rng(3);
  const auto f = random_ksat(40, 190, 3, 12);
  ProofTracer proof(ProofEncoding::Ascii, ProofMode::Shared);
  SolverOptions options;
  options.proof = &proof;
  options.preprocessing = false;
  if (solve(f, options).verdict != Verdict::Unsat) {
    MESSAGE("instance is satisfiable, nothing to mutate");
    return;
  }
  proof.close();
  const auto steps = *oracle::read_ascii_proof(proof.contents());
  std::vector<size_t> additions;
  for (size_t i = 0; i < steps.size(); i++)
    if (!steps[i].deletion && !steps[i].lits.empty())
      additions.push_back(i);
  REQUIRE(!additions.empty());
  int agreements = 0, trials = 0;
  for (int round = 0; round < 20; round++) {
    auto mutated = steps;
    auto &line = mutated[additions[rng() % additions.size()]].lits;
    int &lit = line[rng() % line.size()];
    lit = -lit;
    std::string text;
    for (const auto &s : mutated) {
      if (s.deletion)
        text += "d ";
      for (int x : s.lits)
        text += std::to_string(x) + " ";
      text += "0\n";
    }
    const bool ours = check_proof(f, text, ProofEncoding::Ascii).verified();
    const auto theirs = external::drat_check(f, text, false);
    trials++;
    // The external tool checks deletions and RAT differently, so only
    // acceptance by us without acceptance by it would be a soundness issue.
    if (ours)
      CHECK(*theirs);
    agreements += ours == *theirs;
  }
  MESSAGE("verdict agreement on mutated proofs: " << agreements << "/" << trials);
}

TEST_CASE("mutation kill rate") {
  // Tracked, not asserted: some mutations stay valid.
  std::mt19937_64 rng(1);
  int killed = 0, total = 0;
  for (unsigned holes = 3; holes <= 5; holes++) {
    const auto f = pigeonhole(holes);
    const auto steps = *oracle::read_ascii_proof(solver_proof(f, 1, ProofMode::Shared));
    std::vector<size_t> additions;
    for (size_t i = 0; i < steps.size(); i++)
      if (!steps[i].deletion && !steps[i].lits.empty())
        additions.push_back(i);
    for (int round = 0; round < 30; round++) {
      auto mutated = steps;
      auto &line = mutated[additions[rng() % additions.size()]].lits;
      line[rng() % line.size()] *= -1;
      std::string text;
      for (const auto &s : mutated) {
        text += s.deletion ? "d " : "";
        for (int x : s.lits)
          text += std::to_string(x) + " ";
        text += "0\n";
      }
      const auto r = check_proof(f, text, ProofEncoding::Ascii);
      killed += !r.verified();
      total++;
    }
  }
  MESSAGE("mutation kill rate: " << killed << "/" << total);
  CHECK(total == 90);
}

TEST_CASE("clauses added while inconsistent are watched after recovery") {
  ClauseDatabase db;
  db.insert(lits_of({1}));
  db.insert(lits_of({-1}));
  REQUIRE(db.inconsistent());
  db.insert(lits_of({-2, 3}));
  db.insert(lits_of({-3, -2}));
  db.erase(lits_of({-1}));
  REQUIRE(!db.inconsistent());
  CHECK(db.rup(lits_of({-2})));
  CHECK(!db.rup(lits_of({2})));
}
