#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"

#include "ringsat/formula.hpp"
#include "ringsat/generators.hpp"

#include <random>
#include <sstream>

using namespace ringsat;

TEST_CASE("literal encoding") {
  CHECK(encode_lit(1, 1).code() == 2);
  CHECK(encode_lit(-1, 1).code() == 3);
  CHECK(decode_lit(encode_lit(-7, 7)) == -7);
  CHECK((encode_lit(5, 5).code() ^ encode_lit(-5, 5).code()) == 1);
  CHECK(encode_lit(-4, 9) == ~encode_lit(4, 9));
  CHECK(~~encode_lit(3, 3) == encode_lit(3, 3));
  CHECK(encode_lit(6, 6).var().index == 6);
  CHECK_THROWS_AS(encode_lit(0, 5), LitRangeError);
  CHECK_THROWS_AS(encode_lit(6, 5), LitRangeError);
  CHECK_THROWS_AS(encode_lit(-6, 5), LitRangeError);
  for (int64_t x = -50; x <= 50; x++)
    if (x)
      CHECK(decode_lit(encode_lit(x, 50)) == x);
}

TEST_CASE("parse simple formula") {
  const auto f = parse_dimacs_string("p cnf 2 2\n1 2 0\n-1 -2 0\n");
  CHECK(f.num_vars == 2);
  CHECK(oracle::to_ints(f) == oracle::IntCnf{{1, 2}, {-1, -2}});
  CHECK(!f.has_empty_clause);
  CHECK(f.warnings.empty());
}

TEST_CASE("tautologies and duplicates are normalized away") {
  const auto f = parse_dimacs_string("p cnf 1 1\n1 -1 0\n");
  CHECK(f.num_vars == 1);
  CHECK(f.clauses.empty());
  CHECK(f.dropped_tautologies.size() == 1);

  const auto g = parse_dimacs_string("p cnf 3 1\n3 1 3 -2 1 0\n");
  REQUIRE(g.clauses.size() == 1);
  CHECK(oracle::key_of(oracle::to_ints(g)[0]) == std::vector<int>{-2, 1, 3});
  CHECK(g.clauses[0].size() == 3);
}

TEST_CASE("empty clause marks inconsistency") {
  const auto f = parse_dimacs_string("p cnf 2 2\n1 2 0\n0\n");
  CHECK(f.has_empty_clause);
  CHECK(f.clauses.size() == 1);
}

TEST_CASE("parse errors carry line numbers") {
  auto line_of = [](const char *text) -> size_t {
    try {
      parse_dimacs_string(text);
    } catch (const ParseError &e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("p cnf 2 1\n3 0\n") == 2);
  CHECK(line_of("c comment\np cnf 2 1\n1 -3 0\n") == 3);
  CHECK(line_of("p cnf 2 1\n1 2\n") == 2);
  CHECK(line_of("p cnf 2 1\n1 x 0\n") == 2);
  CHECK(line_of("p dnf 2 1\n1 0\n") == 1);
  CHECK(line_of("p cnf two 1\n1 0\n") == 1);
  CHECK(line_of("1 2 0\n") == 1);
  try {
    parse_dimacs_string("p cnf 2 1\n3 0\n");
  } catch (const ParseError &e) {
    CHECK(std::string(e.what()).find("literal 3 exceeds declared 2 variables") != std::string::npos);
  }
}

TEST_CASE("comments anywhere and arbitrary whitespace") {
  const auto f = parse_dimacs_string("c first\nc second\np cnf 3 2\nc between\n 1\t-2\n\n 0 c trailing\n"
                                     "c again\n 3   2 0\n");
  CHECK(oracle::to_ints(f) == oracle::IntCnf{{1, -2}, {2, 3}});
}

TEST_CASE("clause count in header is advisory") {
  const auto fewer = parse_dimacs_string("p cnf 2 3\n1 2 0\n");
  CHECK(fewer.clauses.size() == 1);
  CHECK(fewer.warnings.size() == 1);
  const auto more = parse_dimacs_string("p cnf 2 1\n1 2 0\n-1 0\n");
  CHECK(more.clauses.size() == 2);
  CHECK(more.warnings.size() == 1);
}

TEST_CASE("parse serialize parse is a fixpoint") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 200; round++) {
    const uint32_t vars = 1 + rng() % 12;
    std::string text = "c random\np cnf " + std::to_string(vars) + " 0\n";
    const unsigned clauses = rng() % 20;
    for (unsigned i = 0; i < clauses; i++) {
      const unsigned len = rng() % 5;
      for (unsigned j = 0; j < len; j++) {
        const int v = 1 + static_cast<int>(rng() % vars);
        text += std::to_string(rng() & 1 ? v : -v) + (rng() & 1 ? " " : "\n  ");
      }
      text += "0\n";
    }
    const auto once = parse_dimacs_string(text);
    const auto twice = parse_dimacs_string(to_dimacs(once));
    CHECK(once.num_vars == twice.num_vars);
    CHECK(once.has_empty_clause == twice.has_empty_clause);
    CHECK(oracle::to_ints(once) == oracle::to_ints(twice));
    CHECK(to_dimacs(once) == to_dimacs(twice));
  }
}

TEST_CASE("first_falsified agrees with the evaluator") {
  const auto f = random_ksat(20, 80, 3, 3);
  std::mt19937_64 rng(11);
  for (int round = 0; round < 100; round++) {
    std::vector<signed char> model(21);
    for (auto &m : model)
      m = rng() & 1 ? 1 : -1;
    CHECK((first_falsified(f.clauses, model) < 0) == oracle::satisfies(oracle::to_ints(f), model));
  }
}

TEST_CASE("generators") {
  const auto r = random_ksat(50, 213, 3, 1);
  CHECK(r.num_vars == 50);
  CHECK(r.clauses.size() == 213);
  for (const auto &c : r.clauses)
    CHECK(c.size() == 3);
  CHECK(to_dimacs(r) == to_dimacs(random_ksat(50, 213, 3, 1)));
  CHECK(to_dimacs(r) != to_dimacs(random_ksat(50, 213, 3, 2)));

  const auto php = pigeonhole(3);
  // 4 pigeons, 3 holes: 4 at-least-one clauses and 3 * C(4,2) exclusions.
  CHECK(php.num_vars == 12);
  CHECK(php.clauses.size() == 4 + 3 * 6);
  CHECK(!oracle::brute_force_sat(php.num_vars, oracle::to_ints(php)));
}
