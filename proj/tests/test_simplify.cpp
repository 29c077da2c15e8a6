#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"

#include "ringsat/checker.hpp"
#include "ringsat/generators.hpp"
#include "ringsat/ruler.hpp"
#include "ringsat/simplify.hpp"

#include <random>
#include <set>

using namespace ringsat;

namespace {

Lit L(int x) { return lit_from_dimacs(x); }

std::vector<Lit> lits_of(std::initializer_list<int> xs) {
  std::vector<Lit> out;
  for (int x : xs)
    out.push_back(L(x));
  return out;
}

// Stand-alone simplifier over integer clauses of size >= 2 with units
// given as already fixed literals.
struct Bench {
  uint32_t vars;
  ProofTracer proof{ProofEncoding::Ascii, ProofMode::Shared};
  ClauseStore store{&proof};
  std::vector<int8_t> fixed;
  std::vector<uint8_t> eliminated;
  ReconstructionStack stack;
  Simplifier simplifier;

  Bench(uint32_t n, const oracle::IntCnf &clauses, std::initializer_list<int> units = {})
      : vars(n), fixed(2 * (n + 1), 0), eliminated(n + 1, 0),
        simplifier(n, store, &proof, fixed, eliminated, stack) {
    for (int u : units) {
      fixed[L(u).code()] = 1;
      fixed[(~L(u)).code()] = -1;
    }
    for (const auto &c : clauses) {
      std::vector<Lit> lits;
      for (int x : c)
        lits.push_back(L(x));
      simplifier.add_literals(lits);
    }
  }

  std::vector<oracle::Step> steps() {
    proof.flush();
    auto s = oracle::read_ascii_proof(proof.contents());
    REQUIRE(s.has_value());
    return *s;
  }

  std::set<std::vector<int>> remaining() {
    std::set<std::vector<int>> out;
    for (auto [a, b] : simplifier.binaries())
      out.insert(oracle::key_of({static_cast<int>(decode_lit(a)), static_cast<int>(decode_lit(b))}));
    for (Clause *c : simplifier.take_clauses()) {
      std::vector<int> k;
      for (Lit l : *c)
        k.push_back(static_cast<int>(decode_lit(l)));
      out.insert(oracle::key_of(k));
      store.release(c);
    }
    return out;
  }
};

SimplifierLimits only(bool subsumption, bool elimination) {
  SimplifierLimits limits;
  limits.subsumption = subsumption;
  limits.elimination = elimination;
  return limits;
}

} // namespace

TEST_CASE("reconstruction stack") {
  ReconstructionStack stack;
  std::vector<signed char> model{0, 1, 0, -1};
  const auto before = model;
  stack.extend(model);
  CHECK(model == before);

  // Witness 3 for [3, -1]: with 1 true the clause is falsified, so 3 flips.
  stack.push(L(3), lits_of({3, -1}));
  stack.extend(model);
  CHECK(model[3] == 1);
  // Satisfied clause leaves the witness alone.
  std::vector<signed char> other{0, -1, 0, -1};
  stack.extend(other);
  CHECK(other[3] == -1);
  // Later entries are replayed first.
  ReconstructionStack two;
  two.push(L(2), lits_of({2, 3}));
  two.push(L(-3), lits_of({-3}));
  std::vector<signed char> m{0, 0, 0, 1};
  two.extend(m);
  CHECK(m[3] == -1);
  CHECK(m[2] == 1);
}

TEST_CASE("variables eliminated later are fixed before a witness flips") {
  // 5 is eliminated with [2,5,8] and [2,-5,-8] on the stack, then 8 goes as
  // a pure literal whose only clause is satisfied.  With 2 false, leaving 8
  // open while 5 is decided flips 5 twice and falsifies [2,-5,-8].
  ReconstructionStack stack;
  stack.push(L(5), lits_of({2, 5, 8}));
  stack.push(L(-5), lits_of({2, -5, -8}));
  stack.push(L(-8), lits_of({-2, -8}));
  std::vector<signed char> model{0, 0, -1, 0, 0, 0, 0, 0, 0};
  stack.extend(model);
  for (const auto &e : stack.entries())
    CHECK(std::any_of(e.clause.begin(), e.clause.end(), [&](Lit l) {
      const signed char v = model[l.var().index];
      return l.negative() ? v < 0 : v > 0;
    }));
}

TEST_CASE("unit propagation empties the formula") {
  const auto f = oracle::from_ints(3, {{1}, {-1, 2}, {-2, 3}});
  SolverOptions options;
  Ruler ruler(f, options);
  CHECK(ruler.preprocess());
  for (int v = 1; v <= 3; v++)
    CHECK(ruler.fixed()[L(v).code()] == 1);
  ruler.clone_rings();
  CHECK(ruler.live_clauses().empty());
  const auto result = ruler.run();
  CHECK(result.verdict == Verdict::Sat);
  CHECK(result.model[1] == 1);
  CHECK(result.model[2] == 1);
  CHECK(result.model[3] == 1);
  CHECK(result.stats.decisions == 0);
}

TEST_CASE("elimination of 2 in [1,2],[1,-2]") {
  // The extra clauses keep 1, 3 and 4 from being pure, and 2 has the
  // fewest resolution pairs.
  Bench b(4, {{1, 2}, {1, -2}, {-1, 3, 4}, {1, -3, -4}});
  CHECK(b.simplifier.run(only(false, true)));
  CHECK(b.eliminated[2]);
  CHECK(b.fixed[L(1).code()] == 1);
  REQUIRE(b.stack.size() >= 2);
  CHECK(b.stack.entries()[0].witness == L(2));
  CHECK(b.stack.entries()[1].witness == L(-2));
  const auto steps = b.steps();
  REQUIRE(steps.size() >= 3);
  CHECK(!steps[0].deletion);
  CHECK(steps[0].lits == std::vector<int>{1});
  CHECK(steps[1].deletion);
  CHECK(oracle::key_of(steps[1].lits) == std::vector<int>{1, 2});
  CHECK(steps[2].deletion);
  CHECK(oracle::key_of(steps[2].lits) == std::vector<int>{-2, 1});

  for (signed char two : {-1, 1}) {
    std::vector<signed char> model{0, 1, two, 1, 1};
    b.stack.extend(model);
    CHECK(oracle::satisfies({{1, 2}, {1, -2}, {-1, 3, 4}}, model));
  }
}

TEST_CASE("satisfied clauses and falsified literals") {
  SUBCASE("falsified literal: add the shorter clause, then delete") {
    Bench b(3, {{1, 2, 3}}, {-1});
    CHECK(b.simplifier.run(only(false, false)));
    const auto steps = b.steps();
    REQUIRE(steps.size() == 2);
    CHECK(!steps[0].deletion);
    CHECK(oracle::key_of(steps[0].lits) == std::vector<int>{2, 3});
    CHECK(steps[1].deletion);
    CHECK(oracle::key_of(steps[1].lits) == std::vector<int>{1, 2, 3});
    CHECK(b.remaining() == std::set<std::vector<int>>{{2, 3}});
  }
  SUBCASE("satisfied clause is deleted") {
    Bench b(4, {{1, 2, 3}, {2, 4}}, {1});
    CHECK(b.simplifier.run(only(false, false)));
    const auto steps = b.steps();
    REQUIRE(steps.size() == 1);
    CHECK(steps[0].deletion);
    CHECK(b.remaining() == std::set<std::vector<int>>{{2, 4}});
    CHECK(b.simplifier.stats().satisfied == 1);
  }
  SUBCASE("strengthening to a unit propagates") {
    Bench b(3, {{1, 2}, {-2, 3}}, {-1});
    CHECK(b.simplifier.run(only(false, false)));
    CHECK(b.fixed[L(2).code()] == 1);
    CHECK(b.fixed[L(3).code()] == 1);
    CHECK(b.simplifier.new_units() == lits_of({2, 3}));
    CHECK(b.remaining().empty());
  }
  SUBCASE("conflict") {
    Bench b(2, {{1, 2}}, {-1, -2});
    CHECK(!b.simplifier.run(only(false, false)));
  }
}

TEST_CASE("subsumption and strengthening") {
  SUBCASE("subsumed clause is deleted") {
    Bench b(4, {{1, 2}, {1, 2, 3}, {1, 2, 3, 4}, {-1, 3, 4}});
    CHECK(b.simplifier.run(only(true, false)));
    CHECK(b.remaining() == std::set<std::vector<int>>{{1, 2}, {-1, 3, 4}});
    CHECK(b.simplifier.stats().subsumed == 2);
  }
  SUBCASE("self-subsuming resolution") {
    Bench b(4, {{1, 2, 3}, {1, 2, -3}, {-1, 4, 2}});
    CHECK(b.simplifier.run(only(true, false)));
    const auto left = b.remaining();
    CHECK(left.count({1, 2}));
    CHECK(!left.count({1, 2, 3}));
    CHECK(!left.count({-3, 1, 2}));
  }
}

TEST_CASE("elimination respects the clause bound") {
  // 5 has 3 x 3 non-tautological resolvents, more than its 6 occurrences.
  // Variables 1..4 occur 7 times each and stay above the occurrence limit.
  Bench b(5, {{5, 1, 2}, {5, 3, 4}, {5, 1, 3}, {-5, 2, 4}, {-5, 1, 4}, {-5, 2, 3},
              {1, 2, 3, 4}, {-1, -2, -3, -4}, {1, -2, 3, -4}, {-1, 2, -3, 4}});
  SimplifierLimits limits = only(false, true);
  limits.occurrence_limit = 6;
  CHECK(b.simplifier.run(limits));
  CHECK(!b.eliminated[5]);
  CHECK(b.simplifier.stats().eliminated == 0);
  CHECK(b.steps().empty());

  // Two positive and one negative occurrence: 2 resolvents <= 3.
  Bench c(5, {{5, 1, 2}, {5, 3, 4}, {-5, 1, 3}, {1, 2, 3, 4}, {-1, -2, -3, -4}, {1, -2, 3, -4},
              {-1, 2, -3, 4}, {-1, -2, 3, 4}, {1, 2, -3, -4}});
  CHECK(c.simplifier.run(limits));
  CHECK(c.eliminated[5]);
  CHECK(c.stack.size() == 3);
}

TEST_CASE("simplification preserves satisfiability and proofs check") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 300; round++) {
    const uint32_t vars = 4 + rng() % 10;
    const uint32_t clauses = static_cast<uint32_t>(vars * (3 + rng() % 3));
    const auto f = random_ksat(vars, clauses, 2 + rng() % 2, rng());
    ProofTracer proof(ProofEncoding::Ascii, ProofMode::Shared);
    SolverOptions options;
    options.proof = &proof;
    options.seed = round;
    const auto result = solve(f, options);
    proof.close();
    const bool sat = oracle::brute_force_sat(vars, oracle::to_ints(f));
    INFO("round " << round);
    REQUIRE(result.verdict != Verdict::Unknown);
    CHECK((result.verdict == Verdict::Sat) == sat);
    if (sat)
      CHECK(oracle::satisfies(oracle::to_ints(f), result.model));
    else
      CHECK(check_proof(f, proof.contents(), ProofEncoding::Ascii).verified());
  }
}

TEST_CASE("pigeonhole with 3 pigeons in 2 holes") {
  const auto f = pigeonhole(2);
  ProofTracer proof(ProofEncoding::Ascii, ProofMode::Shared);
  SolverOptions options;
  options.proof = &proof;
  const auto result = solve(f, options);
  proof.close();
  CHECK(result.verdict == Verdict::Unsat);
  CHECK(check_proof(f, proof.contents(), ProofEncoding::Ascii).verified());
}

TEST_CASE("fixed literals override the winner assignment") {
  const auto f = oracle::from_ints(8, {{7}, {1, 2, 3}, {-1, -2}});
  SolverOptions options;
  options.preprocessing = false;
  Ruler ruler(f, options);
  ruler.preprocess();
  std::vector<signed char> assignment(9, -1);
  assignment[1] = 1;
  const auto model = ruler.reconstruct_model(assignment);
  CHECK(model[7] == 1);
  CHECK(model[1] == 1);
  CHECK(model[2] == -1);
  // Nothing fixed or eliminated: identity.
  for (int v : {1, 2, 3, 4, 5, 6, 8})
    CHECK(model[v] == assignment[v]);
}
