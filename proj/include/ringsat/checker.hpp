#pragma once

#include "ringsat/formula.hpp"
#include "ringsat/proof.hpp"

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ringsat {

enum class CheckStatus { Verified, AddFailed, NoEmptyClause, ParseError };

const char *to_string(CheckStatus status);

struct CheckResult {
  CheckStatus status = CheckStatus::NoEmptyClause;
  size_t line = 0; // offending proof line for AddFailed / ParseError
  std::string message;
  uint64_t additions = 0;
  uint64_t deletions = 0;
  uint64_t missing_deletions = 0; // deleted clauses that were not present
  uint64_t rat_additions = 0;     // additions only accepted as RAT
  double seconds = 0;

  bool verified() const { return status == CheckStatus::Verified; }
};

// Clause multiset with unit propagation at the top level.  Copies of the
// same clause (equal as literal sets) share one watched record and a count.

class ClauseDatabase {
public:
  explicit ClauseDatabase(uint32_t num_vars = 0);

  void reserve_vars(uint32_t num_vars);

  // Adds one copy without checking.
  void insert(std::span<const Lit> literals);
  // Removes one copy; returns false if no copy was present.
  bool erase(std::span<const Lit> literals);

  // Asserting the negation of 'literals' and propagating yields a conflict.
  bool rup(std::span<const Lit> literals);
  // Resolution asymmetric tautology on the first literal.
  bool rat(std::span<const Lit> literals);

  // Top-level propagation of the current database conflicts.
  bool inconsistent() const { return inconsistent_; }
  size_t copies(std::span<const Lit> literals) const;
  size_t unique_clauses() const { return index_.size(); }

private:
  struct Record {
    std::vector<Lit> lits;
    uint32_t count = 0;
    bool active = true;
    bool watched = false; // clauses added while inconsistent are not

  };

  using Key = std::vector<uint32_t>;
  struct KeyHash {
    size_t operator()(const Key &key) const noexcept;
  };

  static bool make_key(std::span<const Lit> literals, Key &key);
  int8_t val(Lit l) const { return values_[l.code()]; }
  void assign(Lit l, uint32_t reason);
  bool propagate();
  void backtrack(size_t trail_size);
  void attach(uint32_t index);
  void recompute();

  std::vector<Record> records_;
  std::unordered_map<Key, uint32_t, KeyHash> index_;
  std::vector<std::vector<uint32_t>> watches_;
  std::vector<int8_t> values_;
  std::vector<uint32_t> reasons_;
  std::vector<Lit> trail_;
  size_t head_ = 0;
  uint32_t empty_copies_ = 0;
  bool inconsistent_ = false;
};

// Forward check of 'proof' against 'formula'.
CheckResult check_proof(const InputFormula &formula, std::string_view proof, ProofEncoding encoding);
CheckResult check_proof_files(const std::string &cnf_path, const std::string &proof_path, ProofEncoding encoding);

} // namespace ringsat
