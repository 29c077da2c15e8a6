#pragma once

#include "ringsat/clause.hpp"

#include <vector>

namespace ringsat {

// Clauses removed by variable elimination, each with the literal that has
// to be made true if the clause is falsified when extending a model.
class ReconstructionStack {
public:
  struct Entry {
    Lit witness;
    std::vector<Lit> clause;
  };

  void push(Lit witness, std::span<const Lit> clause) { entries_.push_back({witness, {clause.begin(), clause.end()}}); }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Entry> &entries() const { return entries_; }

  // Replays the stack in reverse on 'model' (+1 / -1 / 0 by variable).
  // Unassigned variables of stacked clauses count as false and are set.
  void extend(std::vector<signed char> &model) const;

private:
  std::vector<Entry> entries_;
};

struct SimplifierLimits {
  bool subsumption = true;
  bool elimination = true;
  unsigned rounds = 3;
  uint64_t subsumption_effort = 20'000'000; // literal visits per round
  uint64_t elimination_effort = 20'000'000;
  unsigned occurrence_limit = 24;  // skip variables with more occurrences
  unsigned resolvent_limit = 32;   // skip if a resolvent gets longer
};

struct SimplifierStats {
  uint64_t units = 0;
  uint64_t satisfied = 0;
  uint64_t strengthened = 0;
  uint64_t subsumed = 0;
  uint64_t eliminated = 0;
  uint64_t resolvents = 0;
};

// Sequential simplification of the irredundant clauses.  Every clause it is
// given must already be present in the proof (a premise or traced earlier).
// New clauses are traced as additions before the clauses they replace are
// traced as deletions.  The fixed map and the set of eliminated variables
// belong to the caller and persist across rounds.

class Simplifier {
public:
  Simplifier(uint32_t num_vars, ClauseStore &store, ProofTracer *proof, std::vector<int8_t> &fixed,
             std::vector<uint8_t> &eliminated, ReconstructionStack &stack);
  ~Simplifier();

  Simplifier(const Simplifier &) = delete;
  Simplifier &operator=(const Simplifier &) = delete;

  // Takes over a stored clause holding exactly one reference.
  void add_clause(Clause *c);
  // Any clause already in the proof, given by its literals.
  void add_literals(std::span<const Lit> literals);

  // False if the empty clause was derived (not traced here).
  bool run(const SimplifierLimits &limits);

  // Remaining clauses.  Stored clauses come with one reference each.
  std::vector<Clause *> take_clauses();
  std::vector<std::pair<Lit, Lit>> binaries() const;
  // Units fixed by this simplifier (already traced), in derivation order.
  const std::vector<Lit> &new_units() const { return new_units_; }
  const SimplifierStats &stats() const { return stats_; }
  size_t live_clauses() const;

private:
  struct Entry {
    std::vector<Lit> lits;
    Clause *clause = nullptr; // size >= 3 only
    bool garbage = false;
  };

  int8_t value(Lit l) const { return fixed_[l.code()]; }
  bool active(Var v) const { return !eliminated_[v.index] && !fixed_[Lit(v, false).code()]; }

  uint32_t insert(std::vector<Lit> lits, Clause *c);
  // Adds a derived clause; returns false on the empty clause.
  bool derive(std::vector<Lit> lits);
  void remove(uint32_t index);
  bool assign_unit(Lit lit);
  bool propagate();
  size_t occurrences(Lit l);
  void clean(Lit l);

  bool subsume_round(uint64_t effort);
  bool eliminate_round(uint64_t effort, unsigned occurrence_limit, unsigned resolvent_limit, bool &changed);
  bool try_eliminate(Var v, unsigned resolvent_limit, uint64_t &effort, bool &ok);

  uint32_t num_vars_;
  ClauseStore &store_;
  ProofTracer *proof_;
  std::vector<int8_t> &fixed_;
  std::vector<uint8_t> &eliminated_;
  ReconstructionStack &stack_;

  std::vector<Entry> entries_;
  std::vector<std::vector<uint32_t>> occs_; // by literal code
  std::vector<Lit> queue_;
  size_t queue_head_ = 0;
  std::vector<Lit> new_units_;
  std::vector<uint32_t> mark_;
  uint32_t stamp_ = 0;
  bool inconsistent_ = false;
  SimplifierStats stats_;
};

} // namespace ringsat
