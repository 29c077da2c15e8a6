#pragma once

#include "ringsat/lit.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ringsat {

using LitVec = std::vector<Lit>;

// Normalized CNF as read from DIMACS: no duplicate literals inside a clause
// and no tautologies.  An empty input clause sets 'has_empty_clause' and is
// not stored in 'clauses'.
struct InputFormula {
  uint32_t num_vars = 0;
  std::vector<LitVec> clauses;
  bool has_empty_clause = false;

  // Tautologies dropped during normalization, kept verbatim so a proof can
  // delete them at startup and keep the checker's clause multiset aligned.
  std::vector<LitVec> dropped_tautologies;

  // Non-fatal notes such as a clause count not matching the header.
  std::vector<std::string> warnings;
};

class ParseError : public std::runtime_error {
public:
  ParseError(size_t line, const std::string &message);
  size_t line() const { return line_; }

private:
  size_t line_;
};

InputFormula parse_dimacs(std::istream &in);
InputFormula parse_dimacs_string(std::string_view text);
InputFormula parse_dimacs_file(const std::string &path);

// Removes duplicate literals in place; returns false for a tautology.
bool normalize_clause(LitVec &clause);

void write_dimacs(std::ostream &out, const InputFormula &formula);
std::string to_dimacs(const InputFormula &formula);

// Evaluates 'clauses' under 'model', which is indexed by variable and holds
// +1 (true) or -1 (false).  Returns the index of the first falsified clause
// or -1 if all are satisfied.
long first_falsified(const std::vector<LitVec> &clauses, const std::vector<signed char> &model);

} // namespace ringsat
