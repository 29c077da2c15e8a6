#include "ringsat/clause.hpp"

#include <algorithm>
#include <cstring>
#include <new>

namespace ringsat {

Clause::Clause(uint64_t id, unsigned glue, bool redundant, std::span<const Lit> lits)
    : id_(id), size_(static_cast<uint32_t>(lits.size())),
      glue_(static_cast<uint8_t>(std::min(glue, 255u))), redundant_(redundant) {
  std::memcpy(static_cast<void *>(literals_), lits.data(), lits.size() * sizeof(Lit));
}

std::optional<GlueClass> classify(size_t size, unsigned glue) {
  assert(size >= 2);
  if (size == 2)
    return GlueClass::Binary;
  if (glue <= 1)
    return GlueClass::Glue1;
  if (glue == 2)
    return GlueClass::Glue2;
  if (glue <= max_exported_glue)
    return GlueClass::Tier2;
  return std::nullopt;
}

Clause *ClauseStore::allocate(std::span<const Lit> literals, unsigned glue, bool redundant, bool trace) {
  assert(literals.size() >= 3);
  const size_t bytes = Clause::bytes_for(literals.size());
  void *memory = ::operator new(bytes);
  const uint64_t id = next_id_.fetch_add(1, std::memory_order_relaxed);
  auto *c = new (memory) Clause(id, glue, redundant, literals);
  if (trace && proof_)
    proof_->add(literals, id);
  live_.fetch_add(1, std::memory_order_relaxed);
  allocated_.fetch_add(1, std::memory_order_relaxed);
  literal_bytes_.fetch_add(literals.size() * sizeof(Lit), std::memory_order_relaxed);
  const uint64_t now = clause_bytes_.fetch_add(bytes, std::memory_order_relaxed) + bytes;
  uint64_t peak = peak_bytes_.load(std::memory_order_relaxed);
  while (now > peak && !peak_bytes_.compare_exchange_weak(peak, now, std::memory_order_relaxed))
    ;
  return c;
}

bool ClauseStore::release(Clause *c) {
  const uint32_t previous = c->refcount_.fetch_sub(1, std::memory_order_release);
  assert(previous > 0);
  if (previous != 1)
    return false;
  std::atomic_thread_fence(std::memory_order_acquire);
  if (proof_)
    proof_->remove(c->literals(), c->id());
  const size_t bytes = Clause::bytes_for(c->size());
  live_.fetch_sub(1, std::memory_order_relaxed);
  literal_bytes_.fetch_sub(c->size() * sizeof(Lit), std::memory_order_relaxed);
  clause_bytes_.fetch_sub(bytes, std::memory_order_relaxed);
  c->~Clause();
  ::operator delete(static_cast<void *>(c));
  return true;
}

} // namespace ringsat
