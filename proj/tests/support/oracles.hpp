#pragma once

// Reference implementations used by the tests.  Nothing here calls into the
// solver except for building an InputFormula from integer clauses.

#include "ringsat/formula.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oracle {

using IntClause = std::vector<int>;
using IntCnf = std::vector<IntClause>;

IntCnf to_ints(const ringsat::InputFormula &formula);
// Every clause of the input file, including tautologies the parser dropped.
IntCnf premises(const ringsat::InputFormula &formula);
ringsat::InputFormula from_ints(uint32_t num_vars, const IntCnf &clauses);

// Naive unit propagation: rescans every clause until nothing changes.
// 'value' is indexed by variable: +1 true, -1 false, 0 unassigned.
struct Propagation {
  bool conflict = false;
  std::vector<int> value;
};
Propagation naive_propagate(uint32_t num_vars, const IntCnf &clauses, const std::vector<int> &assumptions);

// Every clause has a true literal under 'model' (+1 / -1 by variable).
bool satisfies(const IntCnf &clauses, const std::vector<signed char> &model);

// Truth-table satisfiability for tiny formulas (num_vars <= 24).
bool brute_force_sat(uint32_t num_vars, const IntCnf &clauses);

/*------------------------------------------------------------------------*/
// Proof reading, written independently of the solver's own parser.

struct Step {
  bool deletion = false;
  std::vector<int> lits;
};

// Returns nullopt if any line is incomplete or malformed.
std::optional<std::vector<Step>> read_ascii_proof(std::string_view text);
std::optional<std::vector<Step>> read_binary_proof(std::string_view bytes);

// Multiset key: sorted literals.
std::vector<int> key_of(std::vector<int> lits);

struct Hygiene {
  bool ok = true;
  size_t first_violation = 0; // 1-based step index
  std::string message;
  uint64_t adds = 0;
  uint64_t deletes = 0;
  bool has_empty = false;
};

// Delete count of a clause never exceeds premises + adds at any prefix.
Hygiene multiset_hygiene(const IntCnf &premises, const std::vector<Step> &steps);

/*------------------------------------------------------------------------*/

struct NamedFormula {
  std::string name;
  ringsat::InputFormula formula;
};

// Random 3-SAT, pigeonhole and edge cases (at least 200 instances).
std::vector<NamedFormula> soundness_corpus();
std::vector<NamedFormula> edge_cases();

} // namespace oracle
