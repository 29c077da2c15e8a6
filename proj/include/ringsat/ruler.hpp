#pragma once

#include "ringsat/formula.hpp"
#include "ringsat/ring.hpp"
#include "ringsat/simplify.hpp"

#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace ringsat {

unsigned default_threads();

struct SolverOptions {
  unsigned threads = 1;
  // Either a tracer owned by the caller or a path the ruler opens.
  ProofTracer *proof = nullptr;
  std::string proof_path;
  ProofEncoding proof_encoding = ProofEncoding::Ascii;
  ProofMode proof_mode = ProofMode::Shared;
  uint64_t seed = 0;
  double time_limit = 0;                 // seconds, 0 = none
  uint64_t conflict_limit = UINT64_MAX;  // per ring
  bool preprocessing = true;
  bool inprocessing = true;
  bool exchange = true;
  uint64_t inprocess_first = 10000;      // ring 0 conflicts before the first round
  RingTuning tuning;
  SimplifierLimits simplifier;
};

struct SolveStats {
  uint64_t conflicts = 0;
  uint64_t decisions = 0;
  uint64_t propagations = 0;
  uint64_t restarts = 0;
  uint64_t reductions = 0;
  uint64_t exported = 0;
  uint64_t imported = 0;
  uint64_t imported_units = 0;
  uint64_t inprocess_rounds = 0;
  uint64_t eliminated = 0;
  uint64_t fixed = 0;
  uint64_t peak_tracked_bytes = 0;
  uint64_t proof_bytes = 0;
  uint64_t proof_adds = 0;
  uint64_t proof_deletes = 0;
  int winner = -1;
  double wall_seconds = 0;
  std::vector<RingStats> rings;
};

struct SolveResult {
  Verdict verdict = Verdict::Unknown;
  std::vector<signed char> model; // by original variable, +1 / -1 (SAT only)
  SolveStats stats;
};

struct MemoryReport {
  uint64_t literal_bytes = 0;  // literal arrays of stored clauses
  uint64_t clause_bytes = 0;   // stored clauses including headers
  uint64_t binary_bytes = 0;   // shared binary table
  uint64_t ring_bytes = 0;     // per-ring structures, all rings
  uint64_t exchange_bytes = 0;
  uint64_t total() const { return clause_bytes + binary_bytes + ring_bytes + exchange_bytes; }
};

/*------------------------------------------------------------------------*/

// Runs one solve: preprocessing, cloning, the ring threads, simplification
// rounds and model reconstruction.  The phases are public so that tests can
// stop in between.

class Ruler : private RingCoordinator {
public:
  Ruler(const InputFormula &formula, const SolverOptions &options);
  ~Ruler() override;

  Ruler(const Ruler &) = delete;
  Ruler &operator=(const Ruler &) = delete;

  // Returns false if the formula was refuted on the way.
  bool preprocess();
  void clone_rings();
  SolveResult run();

  // preprocess + clone_rings + run.
  SolveResult solve();

  // Collects all irredundant clauses, simplifies them and clones again.
  // Rings must be parked (between runs or at the barrier).  Returns false
  // on refutation.
  bool inprocess_round();

  /*----------------------------------------------------------------------*/

  unsigned rings() const { return static_cast<unsigned>(rings_.size()); }
  Ring &ring(unsigned i) { return *rings_[i]; }
  ClauseStore &store() { return store_; }
  Exchange &exchange() { return *exchange_; }
  ProofTracer *proof() const { return proof_; }
  const ReconstructionStack &reconstruction() const { return stack_; }
  const std::vector<uint8_t> &eliminated() const { return eliminated_; }
  const std::vector<int8_t> &fixed() const { return fixed_; }
  const BinaryTable &binary_table() const { return *binaries_; }

  // Distinct stored clauses referenced by watchers, saved watchers or slots.
  std::vector<Clause *> live_clauses() const;

  // Checks that every live clause's reference count equals the number of
  // watchers, saved watchers and slots holding it.  Fills 'problem' on the
  // first mismatch.
  bool audit_references(std::string *problem = nullptr) const;

  MemoryReport memory() const;

  // Extends a ring assignment to all original variables.
  std::vector<signed char> reconstruct_model(const std::vector<signed char> &assignment) const;

private:
  bool barrier_requested() const override { return barrier_requested_.load(std::memory_order_acquire); }
  void request_barrier(Ring &ring) override;
  bool arrive(Ring &ring) override;

  void refute();
  bool absorb_units();
  bool publish_fixed(const std::vector<Lit> &units);
  void finish_stats(SolveResult &result);
  void teardown();

  const InputFormula &formula_;
  SolverOptions options_;
  std::unique_ptr<ProofTracer> owned_proof_;
  ProofTracer *proof_ = nullptr;
  ClauseStore store_;
  std::unique_ptr<Exchange> exchange_;
  std::unique_ptr<BinaryTable> binaries_;
  std::vector<std::unique_ptr<Ring>> rings_;

  std::vector<int8_t> fixed_;      // by literal code
  std::vector<uint8_t> eliminated_;
  ReconstructionStack stack_;
  size_t units_absorbed_ = 0;

  // Output of the latest simplification, consumed by 'clone_rings'.
  std::vector<Clause *> pending_clauses_;
  std::vector<std::pair<Lit, Lit>> pending_binaries_;

  bool preprocessed_ = false;
  bool refuted_ = false;
  uint64_t rounds_ = 0;
  uint64_t peak_bytes_ = 0;

  // Barrier state.
  std::atomic<bool> barrier_requested_{false};
  std::mutex mutex_;
  std::condition_variable ruler_cv_, rings_cv_;
  unsigned arrived_ = 0;
  unsigned running_ = 0;
  uint64_t generation_ = 0;
  bool abandon_ = false;
};

// Convenience wrapper.
SolveResult solve(const InputFormula &formula, const SolverOptions &options);

} // namespace ringsat
