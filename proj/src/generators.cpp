#include "ringsat/generators.hpp"

#include <algorithm>
#include <random>

namespace ringsat {

InputFormula random_ksat(uint32_t num_vars, uint32_t num_clauses, unsigned k, uint64_t seed) {
  assert(k <= num_vars);
  InputFormula f;
  f.num_vars = num_vars;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<uint32_t> pick(1, num_vars);
  std::bernoulli_distribution negative(0.5);
  std::vector<uint32_t> vars;
  while (f.clauses.size() < num_clauses) {
    vars.clear();
    while (vars.size() < k) {
      const uint32_t v = pick(rng);
      if (std::find(vars.begin(), vars.end(), v) == vars.end())
        vars.push_back(v);
    }
    LitVec clause;
    for (uint32_t v : vars)
      clause.push_back(Lit(Var(v), negative(rng)));
    normalize_clause(clause);
    f.clauses.push_back(std::move(clause));
  }
  return f;
}

InputFormula pigeonhole(unsigned holes) {
  const unsigned pigeons = holes + 1;
  auto var = [&](unsigned p, unsigned h) { return Var(p * holes + h + 1); };
  InputFormula f;
  f.num_vars = pigeons * holes;
  for (unsigned p = 0; p < pigeons; p++) {
    LitVec clause;
    for (unsigned h = 0; h < holes; h++)
      clause.push_back(Lit(var(p, h), false));
    normalize_clause(clause);
    f.clauses.push_back(std::move(clause));
  }
  for (unsigned h = 0; h < holes; h++)
    for (unsigned p = 0; p < pigeons; p++)
      for (unsigned q = p + 1; q < pigeons; q++) {
        LitVec clause{Lit(var(p, h), true), Lit(var(q, h), true)};
        normalize_clause(clause);
        f.clauses.push_back(std::move(clause));
      }
  return f;
}

} // namespace ringsat
