#include "ringsat/simplify.hpp"

#include <algorithm>
#include <numeric>

namespace ringsat {

void ReconstructionStack::extend(std::vector<signed char> &model) const {
  auto is_true = [&](Lit l) {
    const signed char v = model[l.var().index];
    return l.negative() ? v < 0 : v > 0;
  };
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    // Variables eliminated later may still be open; fixing them first keeps
    // earlier witness flips from falsifying their clauses.
    for (Lit l : it->clause)
      if (l.var() != it->witness.var() && !model[l.var().index])
        model[l.var().index] = -1;
    if (std::any_of(it->clause.begin(), it->clause.end(), is_true))
      continue;
    model[it->witness.var().index] = it->witness.negative() ? -1 : 1;
  }
}

/*------------------------------------------------------------------------*/

Simplifier::Simplifier(uint32_t num_vars, ClauseStore &store, ProofTracer *proof, std::vector<int8_t> &fixed,
                       std::vector<uint8_t> &eliminated, ReconstructionStack &stack)
    : num_vars_(num_vars), store_(store), proof_(proof), fixed_(fixed), eliminated_(eliminated), stack_(stack) {
  const size_t codes = 2 * (size_t{num_vars} + 1);
  assert(fixed_.size() == codes);
  assert(eliminated_.size() == size_t{num_vars} + 1);
  occs_.resize(codes);
  mark_.assign(codes, 0);
}

Simplifier::~Simplifier() {
  for (auto &e : entries_)
    if (!e.garbage && e.clause)
      store_.release(e.clause);
}

uint32_t Simplifier::insert(std::vector<Lit> lits, Clause *c) {
  const auto index = static_cast<uint32_t>(entries_.size());
  for (Lit l : lits)
    occs_[l.code()].push_back(index);
  entries_.push_back({std::move(lits), c, false});
  return index;
}

void Simplifier::add_clause(Clause *c) {
  assert(c->references() == 1);
  insert({c->begin(), c->end()}, c);
}

void Simplifier::add_literals(std::span<const Lit> literals) {
  assert(literals.size() >= 2);
  Clause *c = literals.size() > 2 ? store_.allocate(literals, 0, false, false) : nullptr;
  insert({literals.begin(), literals.end()}, c);
}

bool Simplifier::assign_unit(Lit lit) {
  const int8_t v = value(lit);
  if (v > 0)
    return true;
  if (v < 0) {
    inconsistent_ = true;
    return false;
  }
  fixed_[lit.code()] = 1;
  fixed_[(~lit).code()] = -1;
  queue_.push_back(lit);
  new_units_.push_back(lit);
  stats_.units++;
  return true;
}

bool Simplifier::derive(std::vector<Lit> lits) {
  if (lits.empty()) {
    inconsistent_ = true;
    return false;
  }
  if (lits.size() == 1) {
    if (value(lits[0]) > 0)
      return true;
    if (proof_)
      proof_->add(lits);
    return assign_unit(lits[0]);
  }
  Clause *c = nullptr;
  if (lits.size() == 2) {
    if (proof_)
      proof_->add(lits);
  } else {
    c = store_.allocate(lits, 0, false, true);
  }
  insert(std::move(lits), c);
  return true;
}

void Simplifier::remove(uint32_t index) {
  Entry &e = entries_[index];
  assert(!e.garbage);
  e.garbage = true;
  if (e.clause) {
    [[maybe_unused]] const bool freed = store_.release(e.clause);
    assert(freed);
    e.clause = nullptr;
  } else if (proof_) {
    proof_->remove(e.lits);
  }
}

void Simplifier::clean(Lit l) {
  std::erase_if(occs_[l.code()], [&](uint32_t i) { return entries_[i].garbage; });
}

size_t Simplifier::occurrences(Lit l) {
  clean(l);
  return occs_[l.code()].size();
}

// Removes satisfied clauses and falsified literals for every queued unit.
bool Simplifier::propagate() {
  while (!inconsistent_ && queue_head_ < queue_.size()) {
    const Lit lit = queue_[queue_head_++];
    for (uint32_t i : std::vector<uint32_t>(occs_[lit.code()]))
      if (!entries_[i].garbage) {
        remove(i);
        stats_.satisfied++;
      }
    occs_[lit.code()].clear();
    for (uint32_t i : std::vector<uint32_t>(occs_[(~lit).code()])) {
      if (entries_[i].garbage)
        continue;
      std::vector<Lit> shorter;
      bool satisfied = false;
      for (Lit l : entries_[i].lits) {
        const int8_t v = value(l);
        satisfied |= v > 0;
        if (!v)
          shorter.push_back(l);
      }
      if (!satisfied && !derive(std::move(shorter)))
        return false;
      remove(i);
      satisfied ? stats_.satisfied++ : stats_.strengthened++;
    }
    occs_[(~lit).code()].clear();
  }
  return !inconsistent_;
}

/*------------------------------------------------------------------------*/

bool Simplifier::subsume_round(uint64_t effort) {
  std::vector<uint32_t> order;
  for (uint32_t i = 0; i < entries_.size(); i++)
    if (!entries_[i].garbage)
      order.push_back(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](uint32_t a, uint32_t b) { return entries_[a].lits.size() < entries_[b].lits.size(); });
  uint64_t spent = 0;
  for (uint32_t ci : order) {
    if (spent > effort)
      break;
    if (entries_[ci].garbage)
      continue;
    const std::vector<Lit> c = entries_[ci].lits;
    Lit pivot = c[0];
    size_t best = SIZE_MAX;
    for (Lit l : c) {
      const size_t n = occurrences(l) + occurrences(~l);
      if (n < best) {
        best = n;
        pivot = l;
      }
    }
    std::vector<uint32_t> candidates = occs_[pivot.code()];
    candidates.insert(candidates.end(), occs_[(~pivot).code()].begin(), occs_[(~pivot).code()].end());
    for (uint32_t di : candidates) {
      if (di == ci || entries_[di].garbage || entries_[ci].garbage)
        continue;
      const auto &d = entries_[di].lits;
      if (d.size() < c.size())
        continue;
      spent += d.size() + c.size();
      if (++stamp_ == 0) {
        std::fill(mark_.begin(), mark_.end(), 0);
        stamp_ = 1;
      }
      for (Lit l : d)
        mark_[l.code()] = stamp_;
      Lit negated;
      bool fits = true;
      for (Lit l : c) {
        if (mark_[l.code()] == stamp_)
          continue;
        if (!negated.valid() && mark_[(~l).code()] == stamp_) {
          negated = l;
          continue;
        }
        fits = false;
        break;
      }
      if (!fits)
        continue;
      if (!negated.valid()) {
        remove(di);
        stats_.subsumed++;
        continue;
      }
      std::vector<Lit> shorter;
      for (Lit l : d)
        if (l != ~negated)
          shorter.push_back(l);
      if (!derive(std::move(shorter)))
        return false;
      remove(di);
      stats_.strengthened++;
    }
    if (!propagate())
      return false;
  }
  return propagate();
}

bool Simplifier::try_eliminate(Var v, unsigned resolvent_limit, uint64_t &effort, bool &ok) {
  const Lit pos(v, false), neg(v, true);
  clean(pos);
  clean(neg);
  const std::vector<uint32_t> ps = occs_[pos.code()], ns = occs_[neg.code()];
  const size_t bound = ps.size() + ns.size();
  std::vector<std::vector<Lit>> resolvents;
  ok = false;
  for (uint32_t pi : ps) {
    if (++stamp_ == 0) {
      std::fill(mark_.begin(), mark_.end(), 0);
      stamp_ = 1;
    }
    const auto &p = entries_[pi].lits;
    for (Lit l : p)
      mark_[l.code()] = stamp_;
    for (uint32_t ni : ns) {
      const auto &n = entries_[ni].lits;
      effort += p.size() + n.size();
      bool tautology = false;
      std::vector<Lit> resolvent;
      for (Lit l : p)
        if (l != pos)
          resolvent.push_back(l);
      for (Lit l : n) {
        if (l == neg || mark_[l.code()] == stamp_)
          continue;
        if (mark_[(~l).code()] == stamp_) {
          tautology = true;
          break;
        }
        resolvent.push_back(l);
      }
      if (tautology)
        continue;
      if (resolvents.size() + 1 > bound || resolvent.size() > resolvent_limit)
        return true;
      resolvents.push_back(std::move(resolvent));
    }
  }
  ok = true;
  for (auto &r : resolvents) {
    stats_.resolvents++;
    if (!derive(std::move(r)))
      return false;
  }
  for (uint32_t pi : ps) {
    stack_.push(pos, entries_[pi].lits);
    remove(pi);
  }
  for (uint32_t ni : ns) {
    stack_.push(neg, entries_[ni].lits);
    remove(ni);
  }
  occs_[pos.code()].clear();
  occs_[neg.code()].clear();
  eliminated_[v.index] = 1;
  stats_.eliminated++;
  return propagate();
}

bool Simplifier::eliminate_round(uint64_t effort, unsigned occurrence_limit, unsigned resolvent_limit,
                                 bool &changed) {
  std::vector<std::pair<uint64_t, uint32_t>> candidates;
  for (uint32_t v = 1; v <= num_vars_; v++) {
    if (!active(Var(v)))
      continue;
    const size_t p = occurrences(Lit(Var(v), false)), n = occurrences(Lit(Var(v), true));
    if (!p && !n)
      continue;
    if (p + n > occurrence_limit)
      continue;
    candidates.emplace_back(uint64_t{p} * n, v);
  }
  std::sort(candidates.begin(), candidates.end());
  uint64_t spent = 0;
  for (const auto &[score, v] : candidates) {
    if (spent > effort)
      break;
    if (!active(Var(v)))
      continue;
    const size_t p = occurrences(Lit(Var(v), false)), n = occurrences(Lit(Var(v), true));
    if ((!p && !n) || p + n > occurrence_limit)
      continue;
    bool ok = false;
    if (!try_eliminate(Var(v), resolvent_limit, spent, ok))
      return false;
    changed |= ok;
  }
  return true;
}

bool Simplifier::run(const SimplifierLimits &limits) {
  if (inconsistent_)
    return false;
  // Units the caller fixed before handing over the clauses.
  const size_t initial = entries_.size();
  for (uint32_t i = 0; i < initial; i++) {
    if (entries_[i].garbage)
      continue;
    bool satisfied = false, falsified = false;
    for (Lit l : entries_[i].lits) {
      satisfied |= value(l) > 0;
      falsified |= value(l) < 0;
    }
    if (satisfied) {
      remove(i);
      stats_.satisfied++;
    } else if (falsified) {
      std::vector<Lit> shorter;
      for (Lit l : entries_[i].lits)
        if (!value(l))
          shorter.push_back(l);
      if (!derive(std::move(shorter)))
        return false;
      remove(i);
      stats_.strengthened++;
    }
  }
  if (!propagate())
    return false;
  for (unsigned round = 0; round < limits.rounds; round++) {
    const auto before = stats_;
    if (limits.subsumption && !subsume_round(limits.subsumption_effort))
      return false;
    bool eliminated = false;
    if (limits.elimination &&
        !eliminate_round(limits.elimination_effort, limits.occurrence_limit, limits.resolvent_limit, eliminated))
      return false;
    if (!eliminated && stats_.strengthened == before.strengthened && stats_.subsumed == before.subsumed &&
        stats_.units == before.units)
      break;
  }
  return !inconsistent_;
}

/*------------------------------------------------------------------------*/

std::vector<Clause *> Simplifier::take_clauses() {
  std::vector<Clause *> result;
  for (auto &e : entries_)
    if (!e.garbage && e.clause) {
      result.push_back(e.clause);
      e.clause = nullptr;
      e.garbage = true;
    }
  return result;
}

std::vector<std::pair<Lit, Lit>> Simplifier::binaries() const {
  std::vector<std::pair<Lit, Lit>> result;
  for (const auto &e : entries_)
    if (!e.garbage && e.lits.size() == 2)
      result.emplace_back(e.lits[0], e.lits[1]);
  return result;
}

size_t Simplifier::live_clauses() const {
  return std::count_if(entries_.begin(), entries_.end(), [](const Entry &e) { return !e.garbage; });
}

} // namespace ringsat
