#include "ringsat/exchange.hpp"

#include <thread>

namespace ringsat {

PoolTable::PoolTable(unsigned rings) : rings_(rings), groups_(new SlotGroup[size_t{rings} * rings]) {
  for (size_t i = 0; i < size_t{rings} * rings; i++)
    for (auto &s : groups_[i].slots)
      s.store(slot::empty, std::memory_order_relaxed);
}

PoolTable::~PoolTable() {
  // Owners must 'clear' first; leaking here would lose proof deletions.
  assert(occupied_clause_slots() == 0);
}

void PoolTable::put(unsigned exporter, unsigned importer, GlueClass cls, uint64_t word, ClauseStore &store) {
  assert(exporter != importer);
  auto &s = group(exporter, importer).slots[static_cast<unsigned>(cls)];
  const uint64_t displaced = s.exchange(word, std::memory_order_acq_rel);
  if (displaced && !slot::is_binary(displaced))
    store.release(slot::to_clause(displaced));
}

uint64_t PoolTable::take(unsigned exporter, unsigned importer) {
  auto &g = group(exporter, importer);
  for (auto &s : g.slots) {
    if (s.load(std::memory_order_relaxed) == slot::empty)
      continue;
    const uint64_t word = s.exchange(slot::empty, std::memory_order_acq_rel);
    if (word)
      return word;
  }
  return slot::empty;
}

void PoolTable::clear(ClauseStore &store) {
  for (size_t i = 0; i < size_t{rings_} * rings_; i++)
    for (auto &s : groups_[i].slots) {
      const uint64_t word = s.exchange(slot::empty, std::memory_order_acq_rel);
      if (word && !slot::is_binary(word))
        store.release(slot::to_clause(word));
    }
}

size_t PoolTable::count_references(const Clause *c) const {
  size_t count = 0;
  for_each_clause([&](Clause *d) { count += d == c; });
  return count;
}

size_t PoolTable::occupied_clause_slots() const {
  size_t count = 0;
  for_each_clause([&](Clause *) { count++; });
  return count;
}

/*------------------------------------------------------------------------*/

UnitTrail::UnitTrail(size_t capacity) : lits_(new std::atomic<uint32_t>[capacity]), capacity_(capacity) {
  for (size_t i = 0; i < capacity; i++)
    lits_[i].store(0, std::memory_order_relaxed);
}

void UnitTrail::append(Lit lit) {
  const size_t index = size_.fetch_add(1, std::memory_order_acq_rel);
  if (index >= capacity_) {
    std::fputs("ringsat: fatal: unit trail overflow\n", stderr);
    std::abort();
  }
  lits_[index].store(lit.code(), std::memory_order_release);
}

std::optional<Lit> UnitTrail::at(size_t index) const {
  if (index >= capacity_)
    return std::nullopt;
  const uint32_t code = lits_[index].load(std::memory_order_acquire);
  if (!code)
    return std::nullopt;
  return Lit::from_code(code);
}

/*------------------------------------------------------------------------*/

Exchange::Exchange(unsigned rings, uint32_t num_vars, ClauseStore &store, ProofTracer *proof)
    : rings_(rings), num_vars_(num_vars), store_(store), proof_(proof), pools_(rings), units_(2 * size_t{num_vars} + 2),
      unit_state_(new std::atomic<uint8_t>[num_vars + 1]), unit_lit_(new std::atomic<uint32_t>[num_vars + 1]) {
  for (uint32_t v = 0; v <= num_vars; v++) {
    unit_state_[v].store(0, std::memory_order_relaxed);
    unit_lit_[v].store(0, std::memory_order_relaxed);
  }
}

unsigned Exchange::export_clause(unsigned exporter, Clause *c) {
  const auto cls = classify(c->size(), c->glue());
  if (!cls || rings_ < 2)
    return 0;
  if (proof_)
    proof_->flush();
  unsigned written = 0;
  for (unsigned importer = 0; importer < rings_; importer++) {
    if (importer == exporter)
      continue;
    ClauseStore::acquire(c);
    pools_.put(exporter, importer, *cls, slot::from_clause(c), store_);
    written++;
  }
  return written;
}

unsigned Exchange::export_binary(unsigned exporter, Lit a, Lit b) {
  if (rings_ < 2)
    return 0;
  if (proof_)
    proof_->flush();
  const uint64_t word = slot::pack_binary(a, b);
  unsigned written = 0;
  for (unsigned importer = 0; importer < rings_; importer++) {
    if (importer == exporter)
      continue;
    pools_.put(exporter, importer, GlueClass::Binary, word, store_);
    written++;
  }
  return written;
}

bool Exchange::published(Lit lit) const {
  return unit_state(lit.var()) == 2 && unit_lit_[lit.var().index].load(std::memory_order_acquire) == lit.code();
}

bool Exchange::publish_unit(int ring, Lit lit, bool derived) {
  auto &state = unit_state_[lit.var().index];
  uint8_t expected = 0;
  if (state.compare_exchange_strong(expected, 1, std::memory_order_acq_rel)) {
    if (derived && proof_) {
      proof_->add(std::span<const Lit>(&lit, 1));
      proof_->flush();
    }
    unit_lit_[lit.var().index].store(lit.code(), std::memory_order_release);
    state.store(2, std::memory_order_release);
    units_.append(lit);
    return true;
  }
  // Somebody else claimed the variable; its unit line is about to be
  // flushed.  Wait so that later lines of the caller may rely on it.
  while (state.load(std::memory_order_acquire) != 2)
    std::this_thread::yield();
  if (unit_lit_[lit.var().index].load(std::memory_order_acquire) == lit.code())
    return true;
  if (proof_ && derived)
    proof_->add(std::span<const Lit>(&lit, 1));
  raise_termination(ring, Verdict::Unsat);
  return false;
}

bool Exchange::raise_termination(int ring, Verdict verdict) {
  int expected = GlobalFlags::no_winner;
  if (!flags_.winner.compare_exchange_strong(expected, ring, std::memory_order_acq_rel))
    return false;
  flags_.verdict.store(static_cast<int>(verdict), std::memory_order_release);
  if (verdict == Verdict::Unsat) {
    if (proof_) {
      proof_->add_empty();
      proof_->flush();
    }
    flags_.inconsistent.store(true, std::memory_order_release);
  }
  flags_.terminate.store(true, std::memory_order_release);
  return true;
}

} // namespace ringsat
