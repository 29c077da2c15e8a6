#pragma once

#include "ringsat/clause.hpp"
#include "ringsat/proof.hpp"

#include <atomic>
#include <memory>
#include <optional>
#include <vector>

namespace ringsat {

/*------------------------------------------------------------------------*/

// Slot word encoding: 0 = empty, odd = packed binary clause (two 31-bit
// literal codes), even and non-zero = owned 'Clause *'.

namespace slot {

constexpr uint64_t empty = 0;

inline uint64_t pack_binary(Lit a, Lit b) {
  assert(a.code() < (1u << 31) && b.code() < (1u << 31));
  return (uint64_t{a.code()} << 32) | (uint64_t{b.code()} << 1) | 1;
}
inline bool is_binary(uint64_t word) { return word & 1; }
inline Lit binary_first(uint64_t word) { return Lit::from_code(static_cast<uint32_t>(word >> 32)); }
inline Lit binary_second(uint64_t word) { return Lit::from_code(static_cast<uint32_t>(word >> 1) & 0x7fffffffu); }
inline uint64_t from_clause(Clause *c) {
  const auto word = reinterpret_cast<uint64_t>(c);
  assert(!(word & 1));
  return word;
}
inline Clause *to_clause(uint64_t word) { return reinterpret_cast<Clause *>(word); }

} // namespace slot

/*------------------------------------------------------------------------*/

// Four slots an exporter keeps for one importer, on their own cache line.
struct alignas(64) SlotGroup {
  std::atomic<uint64_t> slots[glue_classes];
};

// Outgoing slots for all (exporter, importer) pairs.  'group(e, i)' lives in
// exporter 'e''s block, so exporters write only to their own memory.
class PoolTable {
public:
  explicit PoolTable(unsigned rings);
  ~PoolTable();

  PoolTable(const PoolTable &) = delete;
  PoolTable &operator=(const PoolTable &) = delete;

  unsigned rings() const { return rings_; }
  SlotGroup &group(unsigned exporter, unsigned importer) { return groups_[exporter * rings_ + importer]; }

  // Stores 'word' into slot (exporter -> importer, cls).  A displaced clause
  // reference is released; the caller must already have acquired the
  // reference 'word' carries.
  void put(unsigned exporter, unsigned importer, GlueClass cls, uint64_t word, ClauseStore &store);

  // Takes the lowest non-empty slot exporter -> importer or returns empty.
  uint64_t take(unsigned exporter, unsigned importer);

  // Releases every slotted reference (barrier / teardown).
  void clear(ClauseStore &store);

  // Number of slots currently holding a clause reference to 'c' (audit).
  size_t count_references(const Clause *c) const;
  size_t occupied_clause_slots() const;
  template <class F> void for_each_clause(F &&f) const {
    for (size_t i = 0; i < size_t{rings_} * rings_; i++)
      for (auto &s : groups_[i].slots) {
        const uint64_t w = s.load(std::memory_order_acquire);
        if (w && !slot::is_binary(w))
          f(slot::to_clause(w));
      }
  }

private:
  unsigned rings_;
  std::unique_ptr<SlotGroup[]> groups_;
};

/*------------------------------------------------------------------------*/

// Append-only array of root-level units shared by all rings.  Producers
// reserve an index, then store the literal; readers consume entries in
// order and stop at the first one not yet written.
class UnitTrail {
public:
  explicit UnitTrail(size_t capacity);

  void append(Lit lit);
  // Literal at 'index' if it is already visible.
  std::optional<Lit> at(size_t index) const;
  size_t reserved() const { return size_.load(std::memory_order_acquire); }
  size_t capacity() const { return capacity_; }

private:
  std::unique_ptr<std::atomic<uint32_t>[]> lits_;
  size_t capacity_;
  std::atomic<size_t> size_{0};
};

/*------------------------------------------------------------------------*/

enum class Verdict { Unknown = 0, Sat = 10, Unsat = 20 };

struct GlobalFlags {
  static constexpr int no_winner = -1;

  std::atomic<bool> terminate{false};
  std::atomic<bool> inconsistent{false};
  std::atomic<int> winner{no_winner};
  std::atomic<int> verdict{0};
};

/*------------------------------------------------------------------------*/

// Everything rings exchange besides clause literal arrays: pools, units and
// the termination state.

class Exchange {
public:
  Exchange(unsigned rings, uint32_t num_vars, ClauseStore &store, ProofTracer *proof);

  ClauseStore &store() { return store_; }
  ProofTracer *proof() const { return proof_; }
  PoolTable &pools() { return pools_; }
  const PoolTable &pools() const { return pools_; }
  UnitTrail &units() { return units_; }
  GlobalFlags &flags() { return flags_; }
  unsigned rings() const { return rings_; }
  size_t bytes() const {
    return sizeof(*this) + size_t{rings_} * rings_ * sizeof(SlotGroup) + units_.capacity() * sizeof(uint32_t) +
           (num_vars_ + size_t{1}) * (sizeof(uint8_t) + sizeof(uint32_t));
  }

  // Offers a learned clause to every other ring.  Large clauses need one
  // reference per slot; they are acquired here.  Returns the number of slots
  // written (0 when the clause has no export class).
  unsigned export_clause(unsigned exporter, Clause *c);
  unsigned export_binary(unsigned exporter, Lit a, Lit b);

  // Makes 'lit' a global unit.  When 'derived' is set and this call is the
  // first to publish the variable, the unit is traced and flushed before it
  // becomes visible.  Returns false if the opposite literal was published
  // before (global inconsistency; the empty clause was traced).
  bool publish_unit(int ring, Lit lit, bool derived);

  // Unit state: 0 = unpublished, 1 = claimed, 2 = in the proof and trail.
  uint8_t unit_state(Var v) const { return unit_state_[v.index].load(std::memory_order_acquire); }
  bool published(Lit lit) const;

  // First caller wins.  An UNSAT win also raises 'inconsistent' and traces
  // the empty clause.
  bool raise_termination(int ring, Verdict verdict);

  // Stops everybody without a winner (time limit, interrupt).
  void interrupt() { flags_.terminate.store(true, std::memory_order_release); }
  bool terminating() const { return flags_.terminate.load(std::memory_order_acquire); }

private:
  unsigned rings_;
  uint32_t num_vars_;
  ClauseStore &store_;
  ProofTracer *proof_;
  PoolTable pools_;
  UnitTrail units_;
  GlobalFlags flags_;
  std::unique_ptr<std::atomic<uint8_t>[]> unit_state_;
  std::unique_ptr<std::atomic<uint32_t>[]> unit_lit_;
};

} // namespace ringsat
