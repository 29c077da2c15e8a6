#pragma once

#include "ringsat/clause.hpp"
#include "ringsat/exchange.hpp"
#include "ringsat/heuristics.hpp"

#include <random>
#include <span>
#include <vector>

namespace ringsat {

/*------------------------------------------------------------------------*/

enum class RestartMode { Alternating, StableOnly, FocusedOnly };

const char *to_string(RestartMode mode);

struct RingConfig {
  RestartMode mode = RestartMode::Alternating;
  bool initial_phase = false;
  bool reason_bumping = false;
  uint64_t seed = 0;
};

// Portfolio entry of ring 'index': modes, phases and reason bumping cycle
// with period 12.
RingConfig portfolio_config(unsigned index, uint64_t seed = 0);

// Search constants.  Nothing here is tied to the sharing scheme.
struct RingTuning {
  double decay = 0.95;
  double restart_margin = 1.25;
  double fast_window = 32;
  double slow_window = 4096;
  uint64_t stable_base = 1024;
  uint64_t mode_interval = 1000;
  uint64_t reduce_base = 2000;
  double reduce_exponent = 1.2;
  unsigned reason_bump_limit = 10; // per learned literal
};

/*------------------------------------------------------------------------*/

// Irredundant binary clauses in one flat array, indexed by literal code.
// Built by the ruler and only read by rings while they search.
struct BinaryTable {
  std::vector<uint32_t> offsets; // size 2 * (vars + 1) + 1
  std::vector<Lit> partners;

  static BinaryTable build(uint32_t num_vars, std::span<const std::pair<Lit, Lit>> binaries);

  std::span<const Lit> of(Lit lit) const {
    if (lit.code() + 1 >= offsets.size())
      return {};
    return {partners.data() + offsets[lit.code()], partners.data() + offsets[lit.code() + 1]};
  }
  size_t bytes() const { return offsets.capacity() * sizeof(uint32_t) + partners.capacity() * sizeof(Lit); }
};

/*------------------------------------------------------------------------*/

// Ring-local view of a shared clause.  The watched pair doubles as blocking
// literals.
struct Watcher {
  Lit watched[2];
  Clause *clause = nullptr;
  uint8_t glue = 0;
  bool redundant = false;
  bool used = false;
  bool garbage = false;
  bool reason = false;
  bool fake_copy = false; // FakeCopy import: this ring logged its own copy
};

enum class ReasonKind : uint8_t { Decision, Unit, Binary, Large };

struct Reason {
  ReasonKind kind = ReasonKind::Decision;
  uint32_t data = 0; // partner literal code (Binary) or watcher index (Large)

  static Reason decision() { return {}; }
  static Reason unit() { return {ReasonKind::Unit, 0}; }
  static Reason binary(Lit other) { return {ReasonKind::Binary, other.code()}; }
  static Reason large(uint32_t watcher) { return {ReasonKind::Large, watcher}; }
};

struct LearnedClause {
  std::vector<Lit> literals; // literals[0] is the asserting literal
  unsigned glue = 0;
  unsigned backjump_level = 0;
};

struct RingStats {
  uint64_t conflicts = 0;
  uint64_t decisions = 0;
  uint64_t propagations = 0;
  uint64_t restarts = 0;
  uint64_t reductions = 0;
  uint64_t learned = 0;
  uint64_t reduced_clauses = 0;
  uint64_t exported_clauses = 0;
  uint64_t exported_binaries = 0;
  uint64_t imported_units = 0;
  uint64_t imported_clauses = 0;
  uint64_t imported_binaries = 0;
  uint64_t subsumed_imports = 0;
  uint64_t mode_switches = 0;
};

enum class ImportOutcome { NoImport, ImportedUnits, ImportedClause, Conflict, BecameInconsistent };

class Ring;

// Hooks into the orchestrating thread.
class RingCoordinator {
public:
  virtual ~RingCoordinator() = default;
  virtual bool barrier_requested() const = 0;
  // Ring 0 asks for a simplification round.
  virtual void request_barrier(Ring &ring) = 0;
  // Blocks until the round is over.  Returns false if the ring should stop.
  virtual bool arrive(Ring &ring) = 0;
};

enum class RingResult { Sat, Unsat, Interrupted };

/*------------------------------------------------------------------------*/

class Ring {
public:
  Ring(unsigned index, uint32_t num_vars, const RingConfig &config, const RingTuning &tuning, Exchange &exchange,
       const BinaryTable *binaries, const std::vector<uint8_t> *eliminated);
  ~Ring();

  Ring(const Ring &) = delete;
  Ring &operator=(const Ring &) = delete;

  unsigned index() const { return index_; }
  const RingConfig &config() const { return config_; }
  const RingStats &stats() const { return stats_; }

  void set_coordinator(RingCoordinator *coordinator) { coordinator_ = coordinator; }
  void set_conflict_limit(uint64_t limit) { conflict_limit_ = limit; }
  void set_exchange_enabled(bool enabled) { exchange_enabled_ = enabled; }
  void set_inprocessing(uint64_t first_interval) { inprocess_interval_ = next_inprocess_ = first_interval; }
  void set_binaries(const BinaryTable *binaries) { shared_binaries_ = binaries; }

  /*----------------------------------------------------------------------*/
  // Cloning.

  // Watches the given irredundant clauses.  Without 'owned' a reference is
  // acquired per clause; with it the caller's references move to the ring.
  void attach_irredundant(std::span<Clause *const> clauses, bool owned);

  // Gives up all irredundant watchers at root level.  References move into
  // 'handover' if given, otherwise they are released.  Redundant watchers are
  // kept aside for 'restore_redundant'.
  void unclone(std::vector<Clause *> *handover);

  // Re-attaches saved redundant watchers, dropping those that mention
  // eliminated variables or are satisfied at the root.
  void restore_redundant();

  // Consumes all published units and schedules full re-propagation.
  void resume_after_barrier();

  /*----------------------------------------------------------------------*/
  // Search.

  RingResult solve();

  bool propagate();
  // Requires a conflict from 'propagate' at decision level > 0.
  LearnedClause analyze();
  void learn(LearnedClause &learned);
  // Returns false if every active variable is assigned.
  bool decide();
  void reduce();
  bool should_restart();
  void restart();
  ImportOutcome import();

  // Imports pending global units only (first half of 'import').
  ImportOutcome import_units();

  // Test access: push a decision at a new level.
  void assume(Lit lit);
  void backtrack(unsigned level);

  /*----------------------------------------------------------------------*/
  // Inspection.

  int8_t value(Lit lit) const { return values_[lit.code()]; }
  unsigned level_of(Var v) const { return levels_[v.index]; }
  unsigned decision_level() const { return static_cast<unsigned>(control_.size()); }
  const std::vector<Lit> &trail() const { return trail_; }
  const Reason &reason_of(Var v) const { return reasons_[v.index]; }
  bool has_conflict() const { return conflict_.kind != ReasonKind::Decision; }
  bool inconsistent() const { return inconsistent_; }
  bool stable_mode() const { return stable_; }

  // +1 / -1 per variable (index 0 unused, eliminated variables 0).
  const std::vector<signed char> &model() const { return model_; }

  const std::vector<Watcher> &watchers() const { return watchers_; }
  size_t live_watchers() const { return watchers_.size() - free_watchers_.size(); }
  size_t redundant_binaries() const;
  size_t tracked_bytes() const;

  // Full scan; true if no falsified watched literal lacks a justification.
  bool check_watch_invariant() const;

  double activity(Var v) const { return activity_[v.index]; }

  // One entry per reference this ring holds (watchers and saved watchers).
  void collect_references(std::vector<Clause *> &out) const;

private:
  struct SavedWatcher {
    Clause *clause;
    uint8_t glue;
    bool used;
    bool fake_copy;
  };

  void assign(Lit lit, Reason reason);
  void unassign_to(size_t trail_size);
  uint32_t new_watcher(Clause *c, Lit a, Lit b, bool redundant, unsigned glue, bool fake_copy);
  void drop_watcher(uint32_t index);
  void pick_watches(std::span<const Lit> literals, Lit &first, Lit &second) const;
  bool root_satisfied(std::span<const Lit> literals) const;
  bool root_false(Lit lit) const { return values_[lit.code()] < 0 && levels_[lit.var().index] == 0; }
  bool mentions_eliminated(std::span<const Lit> literals) const;

  ImportOutcome import_clause(uint64_t word);
  bool subsumed_import(std::span<const Lit> literals, Lit watch) const;
  ImportOutcome repair(std::span<const Lit> literals, Lit first, Lit second, Reason reason);

  void bump(Var v);
  void decay() { increment_ /= tuning_.decay; }
  void reason_bump(const std::vector<Lit> &clause);
  bool literal_redundant(Lit lit, uint32_t abstract_levels);
  void minimize(std::vector<Lit> &clause);
  std::span<const Lit> reason_literals(const Reason &reason, Lit propagated, Lit &scratch) const;

  bool publish_root_units();
  bool handle_conflict();
  void save_model();
  void root_reasons_to_units();
  void update_mode();
  void schedule_reduce();

  const unsigned index_;
  const uint32_t num_vars_;
  const RingConfig config_;
  const RingTuning tuning_;
  Exchange &exchange_;
  ClauseStore &store_;
  ProofTracer *proof_;
  const BinaryTable *shared_binaries_;
  const std::vector<uint8_t> *eliminated_;
  RingCoordinator *coordinator_ = nullptr;

  std::vector<int8_t> values_;    // by literal code
  std::vector<unsigned> levels_;  // by variable
  std::vector<Reason> reasons_;   // by variable
  std::vector<uint8_t> phases_;   // saved phase, by variable
  std::vector<Lit> trail_;
  std::vector<size_t> control_;   // trail size at each decision
  size_t propagated_ = 0;
  size_t root_published_ = 0;

  std::vector<Watcher> watchers_;
  std::vector<uint32_t> free_watchers_;
  std::vector<std::vector<uint32_t>> watches_;  // by literal code
  std::vector<std::vector<Lit>> binaries_;      // ring-local redundant binaries
  std::vector<SavedWatcher> saved_;

  std::vector<double> activity_;
  double increment_ = 1.0;
  ScoreHeap heap_;

  // Analysis scratch.
  std::vector<uint8_t> seen_;
  std::vector<uint32_t> analyzed_;
  std::vector<uint32_t> level_stamp_;
  uint32_t stamp_ = 0;
  std::vector<Lit> minimize_stack_;
  std::vector<uint32_t> minimize_clear_;
  mutable std::vector<uint32_t> mark_; // subsumption marks by literal code
  mutable uint32_t mark_stamp_ = 0;

  Reason conflict_;
  Lit conflict_lits_[2];

  // Restarts and modes.
  bool stable_ = false;
  Ema fast_glue_, slow_glue_;
  uint64_t conflicts_at_restart_ = 0;
  uint64_t luby_index_ = 1;
  uint64_t next_mode_switch_ = 0;
  uint64_t mode_interval_ = 0;

  uint64_t next_reduce_ = 0;
  uint64_t next_inprocess_ = 0;
  uint64_t inprocess_interval_ = 0;
  uint64_t conflict_limit_ = UINT64_MAX;
  bool exchange_enabled_ = true;
  bool imported_clause_since_decision_ = false;
  size_t units_consumed_ = 0;
  bool inconsistent_ = false;

  std::mt19937_64 rng_;
  std::vector<signed char> model_;
  RingStats stats_;
};

} // namespace ringsat
