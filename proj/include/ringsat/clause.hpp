#pragma once

#include "ringsat/lit.hpp"
#include "ringsat/proof.hpp"

#include <atomic>
#include <cstddef>
#include <optional>
#include <span>

namespace ringsat {

/*------------------------------------------------------------------------*/

// A stored (size >= 3) clause.  The literal array follows the header in the
// same allocation and is never written after 'ClauseStore::allocate'
// returns, so rings read it without synchronization.  Which literals a ring
// watches lives in that ring's watchers, not here.

class Clause {
public:
  uint64_t id() const { return id_; }
  unsigned glue() const { return glue_; }
  bool redundant() const { return redundant_; }
  uint32_t size() const { return size_; }

  std::span<const Lit> literals() const { return {literals_, size_}; }
  Lit operator[](size_t i) const { return literals_[i]; }
  const Lit *begin() const { return literals_; }
  const Lit *end() const { return literals_ + size_; }

  uint32_t references() const { return refcount_.load(std::memory_order_acquire); }

  static size_t bytes_for(size_t size) { return offsetof(Clause, literals_) + size * sizeof(Lit); }

private:
  friend class ClauseStore;
  Clause(uint64_t id, unsigned glue, bool redundant, std::span<const Lit> lits);

  const uint64_t id_;
  std::atomic<uint32_t> refcount_{1};
  const uint32_t size_;
  const uint8_t glue_;
  const bool redundant_;
  Lit literals_[1];
};

/*------------------------------------------------------------------------*/

// Export classes; the enumerator value is the slot index in a pool.
enum class GlueClass : uint8_t { Binary = 0, Glue1 = 1, Glue2 = 2, Tier2 = 3 };
constexpr unsigned glue_classes = 4;
constexpr unsigned max_exported_glue = 6;

std::optional<GlueClass> classify(size_t size, unsigned glue);

/*------------------------------------------------------------------------*/

// Global allocation point for stored clauses.  Besides the id counter it
// keeps the byte accounting used to show that each literal array exists
// once, however many rings reference it.

class ClauseStore {
public:
  explicit ClauseStore(ProofTracer *proof = nullptr) : proof_(proof) {}

  ClauseStore(const ClauseStore &) = delete;
  ClauseStore &operator=(const ClauseStore &) = delete;

  ProofTracer *proof() const { return proof_; }

  // Returns a clause with one reference.  With 'trace' set the addition is
  // logged before the clause is returned (the caller still has to flush
  // before publishing it).  Original clauses are premises and therefore
  // allocated untraced; their deletion is still logged.
  Clause *allocate(std::span<const Lit> literals, unsigned glue, bool redundant, bool trace = true);

  static void acquire(Clause *c) {
    [[maybe_unused]] const auto previous = c->refcount_.fetch_add(1, std::memory_order_relaxed);
    assert(previous > 0);
  }

  // Drops one reference.  The thread that observes the count reaching zero
  // logs the deletion and frees the memory.  Returns true in that case.
  bool release(Clause *c);

  // Marks a freshly allocated clause as owning 'count' references in total.
  static void set_references(Clause *c, uint32_t count) { c->refcount_.store(count, std::memory_order_relaxed); }

  uint64_t live_clauses() const { return live_.load(std::memory_order_relaxed); }
  uint64_t allocated_clauses() const { return allocated_.load(std::memory_order_relaxed); }
  uint64_t clause_bytes() const { return clause_bytes_.load(std::memory_order_relaxed); }
  uint64_t literal_bytes() const { return literal_bytes_.load(std::memory_order_relaxed); }
  uint64_t peak_clause_bytes() const { return peak_bytes_.load(std::memory_order_relaxed); }

private:
  ProofTracer *proof_;
  std::atomic<uint64_t> next_id_{1};
  std::atomic<uint64_t> live_{0};
  std::atomic<uint64_t> allocated_{0};
  std::atomic<uint64_t> clause_bytes_{0};
  std::atomic<uint64_t> literal_bytes_{0};
  std::atomic<uint64_t> peak_bytes_{0};
};

} // namespace ringsat
