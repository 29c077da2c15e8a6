#include "ringsat/ring.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace ringsat {

const char *to_string(RestartMode mode) {
  switch (mode) {
  case RestartMode::Alternating:
    return "S+F";
  case RestartMode::StableOnly:
    return "S";
  case RestartMode::FocusedOnly:
    return "F";
  }
  return "?";
}

RingConfig portfolio_config(unsigned index, uint64_t seed) {
  static constexpr RestartMode modes[3] = {RestartMode::Alternating, RestartMode::StableOnly,
                                           RestartMode::FocusedOnly};
  const unsigned column = index % 12;
  RingConfig config;
  config.mode = modes[column % 3];
  config.initial_phase = column & 1;
  config.reason_bumping = (column / 2) & 1;
  config.seed = seed + index;
  return config;
}

BinaryTable BinaryTable::build(uint32_t num_vars, std::span<const std::pair<Lit, Lit>> binaries) {
  BinaryTable table;
  const size_t codes = 2 * (size_t{num_vars} + 1);
  table.offsets.assign(codes + 1, 0);
  for (const auto &[a, b] : binaries) {
    table.offsets[a.code() + 1]++;
    table.offsets[b.code() + 1]++;
  }
  for (size_t i = 1; i <= codes; i++)
    table.offsets[i] += table.offsets[i - 1];
  table.partners.resize(table.offsets[codes]);
  std::vector<uint32_t> fill(table.offsets.begin(), table.offsets.end() - 1);
  for (const auto &[a, b] : binaries) {
    table.partners[fill[a.code()]++] = b;
    table.partners[fill[b.code()]++] = a;
  }
  return table;
}

/*------------------------------------------------------------------------*/

Ring::Ring(unsigned index, uint32_t num_vars, const RingConfig &config, const RingTuning &tuning, Exchange &exchange,
           const BinaryTable *binaries, const std::vector<uint8_t> *eliminated)
    : index_(index), num_vars_(num_vars), config_(config), tuning_(tuning), exchange_(exchange),
      store_(exchange.store()), proof_(exchange.proof()), shared_binaries_(binaries), eliminated_(eliminated),
      heap_(activity_), fast_glue_(tuning.fast_window), slow_glue_(tuning.slow_window), rng_(config.seed) {
  const size_t vars = size_t{num_vars} + 1;
  const size_t codes = 2 * vars;
  values_.assign(codes, 0);
  levels_.assign(vars, 0);
  reasons_.assign(vars, Reason{});
  phases_.assign(vars, config.initial_phase ? 1 : 0);
  watches_.resize(codes);
  binaries_.resize(codes);
  mark_.assign(codes, 0);
  seen_.assign(vars, 0);
  level_stamp_.assign(vars + 1, 0);
  activity_.assign(vars, 0.0);
  trail_.reserve(vars);
  if (config.seed) {
    std::uniform_real_distribution<double> jitter(0.0, 1e-6);
    for (size_t v = 1; v < vars; v++)
      activity_[v] = jitter(rng_);
  }
  heap_.resize(vars);
  for (uint32_t v = 1; v <= num_vars; v++)
    if (!eliminated_ || !(*eliminated_)[v])
      heap_.push(v);
  stable_ = config.mode == RestartMode::StableOnly;
  mode_interval_ = tuning.mode_interval;
  next_mode_switch_ = tuning.mode_interval;
  schedule_reduce();
}

Ring::~Ring() {
  for (auto &w : watchers_)
    if (!w.garbage && w.clause) {
      if (w.fake_copy && proof_)
        proof_->remove(w.clause->literals(), w.clause->id());
      store_.release(w.clause);
    }
  for (auto &saved : saved_) {
    if (saved.fake_copy && proof_)
      proof_->remove(saved.clause->literals(), saved.clause->id());
    store_.release(saved.clause);
  }
}

/*------------------------------------------------------------------------*/

void Ring::assign(Lit lit, Reason reason) {
  assert(!values_[lit.code()]);
  const Var v = lit.var();
  values_[lit.code()] = 1;
  values_[(~lit).code()] = -1;
  levels_[v.index] = decision_level();
  reasons_[v.index] = decision_level() ? reason : (reason.kind == ReasonKind::Decision ? Reason::unit() : reason);
  trail_.push_back(lit);
}

void Ring::unassign_to(size_t trail_size) {
  while (trail_.size() > trail_size) {
    const Lit lit = trail_.back();
    trail_.pop_back();
    const uint32_t v = lit.var().index;
    values_[lit.code()] = 0;
    values_[(~lit).code()] = 0;
    phases_[v] = lit.negative() ? 0 : 1;
    if (!eliminated_ || !(*eliminated_)[v])
      heap_.push(v);
  }
  propagated_ = std::min(propagated_, trail_size);
}

void Ring::backtrack(unsigned level) {
  if (level >= decision_level())
    return;
  unassign_to(control_[level]);
  control_.resize(level);
}

void Ring::assume(Lit lit) {
  control_.push_back(trail_.size());
  assign(lit, Reason::decision());
}

/*------------------------------------------------------------------------*/

uint32_t Ring::new_watcher(Clause *c, Lit a, Lit b, bool redundant, unsigned glue, bool fake_copy) {
  uint32_t index;
  if (!free_watchers_.empty()) {
    index = free_watchers_.back();
    free_watchers_.pop_back();
  } else {
    index = static_cast<uint32_t>(watchers_.size());
    watchers_.emplace_back();
  }
  Watcher &w = watchers_[index];
  w.watched[0] = a;
  w.watched[1] = b;
  w.clause = c;
  w.glue = static_cast<uint8_t>(std::min(glue, 255u));
  w.redundant = redundant;
  w.used = true;
  w.garbage = false;
  w.reason = false;
  w.fake_copy = fake_copy;
  watches_[a.code()].push_back(index);
  watches_[b.code()].push_back(index);
  return index;
}

// Callers purge watch lists before the next 'new_watcher'.
void Ring::drop_watcher(uint32_t index) {
  Watcher &w = watchers_[index];
  assert(!w.garbage);
  if (w.fake_copy && proof_)
    proof_->remove(w.clause->literals(), w.clause->id());
  store_.release(w.clause);
  w.clause = nullptr;
  w.garbage = true;
  free_watchers_.push_back(index);
}

// Picks the pair to watch: true literals first (lowest level), then
// unassigned ones, then false literals (highest level first).
void Ring::pick_watches(std::span<const Lit> literals, Lit &first, Lit &second) const {
  auto rank = [&](Lit l) {
    const int8_t v = values_[l.code()];
    const unsigned level = levels_[l.var().index];
    if (v > 0)
      return std::make_tuple(0u, level);
    if (!v)
      return std::make_tuple(1u, 0u);
    return std::make_tuple(2u, UINT32_MAX - level);
  };
  assert(literals.size() >= 2);
  first = literals[0];
  second = literals[1];
  if (rank(second) < rank(first))
    std::swap(first, second);
  for (size_t i = 2; i < literals.size(); i++) {
    const Lit l = literals[i];
    const auto r = rank(l);
    if (r < rank(first)) {
      second = first;
      first = l;
    } else if (r < rank(second)) {
      second = l;
    }
  }
}

bool Ring::root_satisfied(std::span<const Lit> literals) const {
  for (Lit l : literals)
    if (values_[l.code()] > 0 && !levels_[l.var().index])
      return true;
  return false;
}

bool Ring::mentions_eliminated(std::span<const Lit> literals) const {
  if (!eliminated_)
    return false;
  for (Lit l : literals)
    if ((*eliminated_)[l.var().index])
      return true;
  return false;
}

/*------------------------------------------------------------------------*/

bool Ring::propagate() {
  assert(!has_conflict());
  while (propagated_ < trail_.size()) {
    const Lit lit = trail_[propagated_++];
    const Lit not_lit = ~lit;
    stats_.propagations++;

    auto propagate_binaries = [&](std::span<const Lit> partners) {
      for (Lit other : partners) {
        const int8_t v = values_[other.code()];
        if (v > 0)
          continue;
        if (v < 0) {
          conflict_ = Reason::binary(other);
          conflict_lits_[0] = not_lit;
          conflict_lits_[1] = other;
          return false;
        }
        assign(other, Reason::binary(not_lit));
      }
      return true;
    };
    if (shared_binaries_ && !propagate_binaries(shared_binaries_->of(not_lit)))
      return false;
    if (!propagate_binaries(binaries_[not_lit.code()]))
      return false;

    auto &ws = watches_[not_lit.code()];
    size_t keep = 0, i = 0;
    const size_t end = ws.size();
    bool conflict = false;
    while (i < end) {
      const uint32_t index = ws[i++];
      Watcher &w = watchers_[index];
      if (w.garbage)
        continue;
      const unsigned pos = w.watched[0] == not_lit ? 0 : 1;
      assert(w.watched[pos] == not_lit);
      const Lit other = w.watched[1 - pos];
      const int8_t other_value = values_[other.code()];
      if (other_value > 0) {
        ws[keep++] = index;
        continue;
      }
      Lit replacement;
      for (Lit l : *w.clause) {
        if (l == not_lit || l == other)
          continue;
        if (values_[l.code()] >= 0) {
          replacement = l;
          break;
        }
      }
      if (replacement.valid()) {
        w.watched[pos] = replacement;
        watches_[replacement.code()].push_back(index);
        continue;
      }
      ws[keep++] = index;
      if (!other_value) {
        w.used = true;
        assign(other, Reason::large(index));
      } else {
        w.used = true;
        conflict_ = Reason::large(index);
        conflict = true;
        break;
      }
    }
    while (i < end)
      ws[keep++] = ws[i++];
    ws.resize(keep);
    if (conflict)
      return false;
  }
  return true;
}

/*------------------------------------------------------------------------*/

std::span<const Lit> Ring::reason_literals(const Reason &reason, Lit, Lit &scratch) const {
  switch (reason.kind) {
  case ReasonKind::Binary:
    scratch = Lit::from_code(reason.data);
    return {&scratch, 1};
  case ReasonKind::Large:
    return watchers_[reason.data].clause->literals();
  default:
    return {};
  }
}

void Ring::bump(Var v) {
  double &a = activity_[v.index];
  a += increment_;
  if (a > 1e100) {
    for (auto &score : activity_)
      score *= 1e-100;
    increment_ *= 1e-100;
  }
  heap_.increased(v.index);
}

bool Ring::literal_redundant(Lit lit, uint32_t abstract_levels) {
  minimize_stack_.clear();
  minimize_stack_.push_back(lit);
  const size_t top = minimize_clear_.size();
  while (!minimize_stack_.empty()) {
    const Lit q = minimize_stack_.back();
    minimize_stack_.pop_back();
    Lit scratch;
    const auto lits = reason_literals(reasons_[q.var().index], ~q, scratch);
    for (Lit l : lits) {
      const uint32_t v = l.var().index;
      if (seen_[v] || !levels_[v])
        continue;
      if (reasons_[v].kind == ReasonKind::Decision || !((1u << (levels_[v] & 31)) & abstract_levels)) {
        for (size_t j = top; j < minimize_clear_.size(); j++)
          seen_[minimize_clear_[j]] = 0;
        minimize_clear_.resize(top);
        return false;
      }
      seen_[v] = 1;
      minimize_stack_.push_back(l);
      minimize_clear_.push_back(v);
    }
  }
  return true;
}

void Ring::minimize(std::vector<Lit> &clause) {
  uint32_t abstract_levels = 0;
  for (size_t i = 1; i < clause.size(); i++)
    abstract_levels |= 1u << (levels_[clause[i].var().index] & 31);
  size_t keep = 1;
  for (size_t i = 1; i < clause.size(); i++) {
    const Lit q = clause[i];
    if (reasons_[q.var().index].kind == ReasonKind::Decision || !literal_redundant(q, abstract_levels))
      clause[keep++] = q;
  }
  clause.resize(keep);
}

void Ring::reason_bump(const std::vector<Lit> &clause) {
  const size_t limit = tuning_.reason_bump_limit * clause.size();
  size_t bumped = 0;
  for (Lit q : clause) {
    Lit scratch;
    const auto lits = reason_literals(reasons_[q.var().index], ~q, scratch);
    for (Lit l : lits) {
      const uint32_t v = l.var().index;
      if (seen_[v] || !levels_[v])
        continue;
      seen_[v] = 1;
      analyzed_.push_back(v);
      bump(l.var());
      if (++bumped >= limit)
        return;
    }
  }
}

LearnedClause Ring::analyze() {
  assert(has_conflict());
  assert(decision_level() > 0);
  const unsigned conflict_level = decision_level();
  LearnedClause learned;
  auto &clause = learned.literals;
  clause.push_back(Lit());

  unsigned open = 0;
  size_t i = trail_.size();
  Lit uip;
  std::span<const Lit> lits;
  Lit scratch;
  if (conflict_.kind == ReasonKind::Binary)
    lits = {conflict_lits_, 2};
  else
    lits = watchers_[conflict_.data].clause->literals();

  for (;;) {
    for (Lit q : lits) {
      const uint32_t v = q.var().index;
      if (seen_[v] || !levels_[v])
        continue;
      seen_[v] = 1;
      analyzed_.push_back(v);
      if (levels_[v] == conflict_level)
        open++;
      else
        clause.push_back(q);
    }
    assert(open > 0);
    do {
      assert(i > 0);
      uip = trail_[--i];
    } while (!seen_[uip.var().index]);
    if (!--open)
      break;
    const Reason &reason = reasons_[uip.var().index];
    if (reason.kind == ReasonKind::Large)
      watchers_[reason.data].used = true;
    lits = reason_literals(reason, uip, scratch);
  }
  clause[0] = ~uip;

  minimize(clause);
  for (uint32_t v : analyzed_)
    bump(Var(v));
  if (config_.reason_bumping)
    reason_bump(clause);
  decay();

  stamp_++;
  unsigned glue = 0, jump = 0;
  size_t jump_pos = 0;
  for (size_t k = 0; k < clause.size(); k++) {
    const unsigned level = levels_[clause[k].var().index];
    if (level_stamp_[level] != stamp_) {
      level_stamp_[level] = stamp_;
      glue++;
    }
    if (k && level > jump) {
      jump = level;
      jump_pos = k;
    }
  }
  if (jump_pos > 1)
    std::swap(clause[1], clause[jump_pos]);
  learned.glue = glue;
  learned.backjump_level = jump;

  for (uint32_t v : analyzed_)
    seen_[v] = 0;
  for (uint32_t v : minimize_clear_)
    seen_[v] = 0;
  analyzed_.clear();
  minimize_clear_.clear();
  conflict_ = Reason{};
  return learned;
}

void Ring::learn(LearnedClause &learned) {
  auto &lits = learned.literals;
  stats_.learned++;
  fast_glue_.update(learned.glue);
  slow_glue_.update(learned.glue);
  if (lits.size() == 1) {
    backtrack(0);
    assign(lits[0], Reason::unit());
    if (!exchange_.publish_unit(static_cast<int>(index_), lits[0], true))
      inconsistent_ = true;
    return;
  }
  if (lits.size() == 2) {
    if (proof_)
      proof_->add(lits);
    binaries_[lits[0].code()].push_back(lits[1]);
    binaries_[lits[1].code()].push_back(lits[0]);
    if (exchange_enabled_)
      stats_.exported_binaries += exchange_.export_binary(index_, lits[0], lits[1]) ? 1 : 0;
    backtrack(learned.backjump_level);
    assign(lits[0], Reason::binary(lits[1]));
    return;
  }
  Clause *c = store_.allocate(lits, learned.glue, true);
  const uint32_t w = new_watcher(c, lits[0], lits[1], true, learned.glue, false);
  if (exchange_enabled_)
    stats_.exported_clauses += exchange_.export_clause(index_, c) ? 1 : 0;
  backtrack(learned.backjump_level);
  assign(lits[0], Reason::large(w));
}

/*------------------------------------------------------------------------*/

bool Ring::decide() {
  while (!heap_.empty()) {
    const uint32_t v = heap_.top();
    if (values_[Lit(Var(v), false).code()] || (eliminated_ && (*eliminated_)[v])) {
      heap_.pop();
      continue;
    }
    heap_.pop();
    stats_.decisions++;
    imported_clause_since_decision_ = false;
    assume(Lit(Var(v), !phases_[v]));
    return true;
  }
  return false;
}

bool Ring::should_restart() {
  if (!decision_level())
    return false;
  const uint64_t since = stats_.conflicts - conflicts_at_restart_;
  if (stable_)
    return since >= tuning_.stable_base * luby(luby_index_);
  return since >= 1 && fast_glue_.value() > tuning_.restart_margin * slow_glue_.value();
}

void Ring::restart() {
  backtrack(0);
  conflicts_at_restart_ = stats_.conflicts;
  if (stable_)
    luby_index_++;
  stats_.restarts++;
}

void Ring::update_mode() {
  if (config_.mode != RestartMode::Alternating || stats_.conflicts < next_mode_switch_)
    return;
  stable_ = !stable_;
  stats_.mode_switches++;
  mode_interval_ *= 2;
  next_mode_switch_ = stats_.conflicts + mode_interval_;
  conflicts_at_restart_ = stats_.conflicts;
}

void Ring::schedule_reduce() {
  const double k = static_cast<double>(stats_.reductions + 1);
  next_reduce_ = static_cast<uint64_t>(static_cast<double>(tuning_.reduce_base) * std::pow(k, tuning_.reduce_exponent));
}

void Ring::root_reasons_to_units() {
  const size_t root_end = control_.empty() ? trail_.size() : control_[0];
  for (size_t i = 0; i < root_end; i++)
    reasons_[trail_[i].var().index] = Reason::unit();
}

void Ring::reduce() {
  stats_.reductions++;
  root_reasons_to_units();
  for (size_t i = control_.empty() ? trail_.size() : control_[0]; i < trail_.size(); i++) {
    const Reason &r = reasons_[trail_[i].var().index];
    if (r.kind == ReasonKind::Large)
      watchers_[r.data].reason = true;
  }
  bool flushed = false;
  for (uint32_t index = 0; index < watchers_.size(); index++) {
    Watcher &w = watchers_[index];
    if (w.garbage)
      continue;
    bool drop = false;
    if (!w.reason) {
      if (root_satisfied(w.clause->literals()))
        drop = true;
      else if (w.redundant && w.glue > 2) {
        if (w.used)
          w.used = false;
        else
          drop = true;
      }
    }
    w.reason = false;
    if (!drop)
      continue;
    if (!flushed && proof_) {
      // Our buffered lines may depend on the clause; they precede its deletion.
      proof_->flush();
      flushed = true;
    }
    drop_watcher(index);
    stats_.reduced_clauses++;
  }
  for (auto &ws : watches_)
    std::erase_if(ws, [&](uint32_t index) { return watchers_[index].garbage; });
  for (size_t code = 2; code < binaries_.size(); code++) {
    const Lit lit = Lit::from_code(static_cast<uint32_t>(code));
    auto &partners = binaries_[code];
    if (values_[code] > 0 && !levels_[lit.var().index]) {
      partners.clear();
      continue;
    }
    std::erase_if(partners, [&](Lit other) { return values_[other.code()] > 0 && !levels_[other.var().index]; });
  }
  schedule_reduce();
}

/*------------------------------------------------------------------------*/

ImportOutcome Ring::import_units() {
  ImportOutcome outcome = ImportOutcome::NoImport;
  while (auto unit = exchange_.units().at(units_consumed_)) {
    units_consumed_++;
    const Lit lit = *unit;
    if (values_[lit.code()] > 0 && !levels_[lit.var().index])
      continue;
    backtrack(0);
    const int8_t v = values_[lit.code()];
    if (v > 0)
      continue;
    if (v < 0) {
      inconsistent_ = true;
      exchange_.raise_termination(static_cast<int>(index_), Verdict::Unsat);
      return ImportOutcome::BecameInconsistent;
    }
    assign(lit, Reason::unit());
    stats_.imported_units++;
    outcome = ImportOutcome::ImportedUnits;
  }
  // Opposite units never reach the trail, only the flag.
  if (exchange_.flags().inconsistent.load(std::memory_order_acquire)) {
    inconsistent_ = true;
    return ImportOutcome::BecameInconsistent;
  }
  return outcome;
}

ImportOutcome Ring::import() {
  if (!exchange_enabled_)
    return ImportOutcome::NoImport;
  const ImportOutcome units = import_units();
  if (units != ImportOutcome::NoImport)
    return units;
  const unsigned rings = exchange_.rings();
  if (rings < 2 || imported_clause_since_decision_)
    return ImportOutcome::NoImport;
  std::uniform_int_distribution<unsigned> pick(0, rings - 2);
  unsigned exporter = pick(rng_);
  if (exporter >= index_)
    exporter++;
  const uint64_t word = exchange_.pools().take(exporter, index_);
  if (!word)
    return ImportOutcome::NoImport;
  imported_clause_since_decision_ = true;
  return import_clause(word);
}

bool Ring::subsumed_import(std::span<const Lit> literals, Lit watch) const {
  auto &mark = mark_;
  auto &stamp = mark_stamp_;
  if (++stamp == 0) {
    std::fill(mark.begin(), mark.end(), 0);
    stamp = 1;
  }
  for (Lit l : literals)
    if (!root_false(l))
      mark[l.code()] = stamp;
  auto partner_marked = [&](std::span<const Lit> partners) {
    for (Lit other : partners)
      if (mark[other.code()] == stamp)
        return true;
    return false;
  };
  if (shared_binaries_ && partner_marked(shared_binaries_->of(watch)))
    return true;
  if (partner_marked(binaries_[watch.code()]))
    return true;
  for (uint32_t index : watches_[watch.code()]) {
    const Watcher &w = watchers_[index];
    if (w.garbage)
      continue;
    bool subset = true;
    for (Lit l : *w.clause)
      if (!root_false(l) && mark[l.code()] != stamp) {
        subset = false;
        break;
      }
    if (subset)
      return true;
  }
  return false;
}

ImportOutcome Ring::repair(std::span<const Lit> literals, Lit first, Lit second, Reason reason) {
  const int8_t fv = values_[first.code()], sv = values_[second.code()];
  const unsigned fl = levels_[first.var().index], sl = levels_[second.var().index];
  if (fv > 0) {
    if (sv >= 0 || fl <= sl)
      return ImportOutcome::ImportedClause;
    // Would have propagated 'first' at the level of 'second'.
    backtrack(sl);
    assign(first, reason);
    return ImportOutcome::ImportedClause;
  }
  if (!fv) {
    if (!sv)
      return ImportOutcome::ImportedClause;
    backtrack(sl);
    assign(first, reason);
    return ImportOutcome::ImportedClause;
  }
  // All literals false.
  if (!fl) {
    inconsistent_ = true;
    exchange_.raise_termination(static_cast<int>(index_), Verdict::Unsat);
    return ImportOutcome::BecameInconsistent;
  }
  if (fl > sl) {
    backtrack(sl);
    assign(first, reason);
    return ImportOutcome::ImportedClause;
  }
  backtrack(fl);
  conflict_ = reason;
  if (reason.kind == ReasonKind::Binary) {
    conflict_lits_[0] = literals[0];
    conflict_lits_[1] = literals[1];
  }
  return ImportOutcome::Conflict;
}

ImportOutcome Ring::import_clause(uint64_t word) {
  const bool fake = proof_ && proof_->fake_copy();
  if (slot::is_binary(word)) {
    const Lit lits[2] = {slot::binary_first(word), slot::binary_second(word)};
    if (root_satisfied(lits)) {
      stats_.subsumed_imports++;
      return ImportOutcome::NoImport;
    }
    Lit first, second;
    pick_watches(lits, first, second);
    if (subsumed_import(lits, first)) {
      stats_.subsumed_imports++;
      return ImportOutcome::NoImport;
    }
    if (fake)
      proof_->import(lits);
    binaries_[lits[0].code()].push_back(lits[1]);
    binaries_[lits[1].code()].push_back(lits[0]);
    stats_.imported_binaries++;
    return repair(lits, first, second, Reason::binary(second));
  }
  Clause *c = slot::to_clause(word);
  const auto lits = c->literals();
  if (root_satisfied(lits) || mentions_eliminated(lits)) {
    stats_.subsumed_imports++;
    store_.release(c);
    return ImportOutcome::NoImport;
  }
  Lit first, second;
  pick_watches(lits, first, second);
  const auto load = [&](Lit l) {
    return watches_[l.code()].size() + binaries_[l.code()].size() +
           (shared_binaries_ ? shared_binaries_->of(l).size() : 0);
  };
  const Lit watch = load(second) < load(first) && !root_false(second) ? second : first;
  if (subsumed_import(lits, watch)) {
    stats_.subsumed_imports++;
    store_.release(c);
    return ImportOutcome::NoImport;
  }
  if (fake)
    proof_->import(lits, c->id());
  const uint32_t w = new_watcher(c, first, second, true, c->glue(), fake);
  stats_.imported_clauses++;
  return repair(lits, first, second, Reason::large(w));
}

/*------------------------------------------------------------------------*/

void Ring::attach_irredundant(std::span<Clause *const> clauses, bool owned) {
  for (Clause *c : clauses) {
    if (!owned)
      ClauseStore::acquire(c);
    Lit first, second;
    pick_watches(c->literals(), first, second);
    new_watcher(c, first, second, false, c->glue(), false);
  }
  propagated_ = 0;
}

void Ring::unclone(std::vector<Clause *> *handover) {
  assert(!decision_level());
  root_reasons_to_units();
  for (auto &w : watchers_) {
    if (w.garbage)
      continue;
    if (!w.redundant) {
      if (handover)
        handover->push_back(w.clause);
      else
        store_.release(w.clause);
    } else {
      saved_.push_back({w.clause, w.glue, w.used, w.fake_copy});
    }
  }
  watchers_.clear();
  free_watchers_.clear();
  for (auto &ws : watches_)
    ws.clear();
}

void Ring::restore_redundant() {
  for (const auto &saved : saved_) {
    const auto lits = saved.clause->literals();
    if (mentions_eliminated(lits) || root_satisfied(lits)) {
      if (saved.fake_copy && proof_)
        proof_->remove(lits, saved.clause->id());
      store_.release(saved.clause);
      continue;
    }
    Lit first, second;
    pick_watches(lits, first, second);
    const uint32_t index = new_watcher(saved.clause, first, second, true, saved.glue, saved.fake_copy);
    watchers_[index].used = saved.used;
  }
  saved_.clear();
  for (size_t code = 2; code < binaries_.size(); code++) {
    const Lit lit = Lit::from_code(static_cast<uint32_t>(code));
    auto &partners = binaries_[code];
    if (mentions_eliminated(std::span<const Lit>(&lit, 1)) || (values_[code] > 0 && !levels_[lit.var().index])) {
      partners.clear();
      continue;
    }
    std::erase_if(partners, [&](Lit other) {
      return mentions_eliminated(std::span<const Lit>(&other, 1)) ||
             (values_[other.code()] > 0 && !levels_[other.var().index]);
    });
  }
  propagated_ = 0;
}

void Ring::resume_after_barrier() {
  import_units();
  if (eliminated_)
    for (uint32_t v = 1; v <= num_vars_; v++)
      if ((*eliminated_)[v])
        heap_.remove(v);
  propagated_ = 0;
  imported_clause_since_decision_ = false;
}

/*------------------------------------------------------------------------*/

bool Ring::publish_root_units() {
  if (decision_level())
    return true;
  while (root_published_ < trail_.size()) {
    const Lit lit = trail_[root_published_++];
    if (!exchange_.publish_unit(static_cast<int>(index_), lit, true)) {
      inconsistent_ = true;
      return false;
    }
  }
  return true;
}

bool Ring::handle_conflict() {
  stats_.conflicts++;
  if (!decision_level()) {
    inconsistent_ = true;
    conflict_ = Reason{};
    exchange_.raise_termination(static_cast<int>(index_), Verdict::Unsat);
    return false;
  }
  LearnedClause learned = analyze();
  learn(learned);
  return !inconsistent_;
}

void Ring::save_model() {
  model_.assign(size_t{num_vars_} + 1, 0);
  for (uint32_t v = 1; v <= num_vars_; v++)
    model_[v] = values_[Lit(Var(v), false).code()];
}

RingResult Ring::solve() {
  for (;;) {
    if (inconsistent_)
      return RingResult::Unsat;
    if (exchange_.terminating())
      return RingResult::Interrupted;
    if (!propagate()) {
      if (!handle_conflict())
        return RingResult::Unsat;
      if (stats_.conflicts >= conflict_limit_) {
        exchange_.interrupt();
        return RingResult::Interrupted;
      }
      continue;
    }
    if (!decision_level() && !publish_root_units())
      return RingResult::Unsat;
    if (coordinator_ && coordinator_->barrier_requested()) {
      backtrack(0);
      if (!publish_root_units())
        return RingResult::Unsat;
      if (proof_)
        proof_->flush();
      if (!coordinator_->arrive(*this))
        return RingResult::Interrupted;
      continue;
    }
    if (coordinator_ && !index_ && inprocess_interval_ && stats_.conflicts >= next_inprocess_) {
      inprocess_interval_ *= 2;
      next_inprocess_ = stats_.conflicts + inprocess_interval_;
      coordinator_->request_barrier(*this);
      continue;
    }
    update_mode();
    if (should_restart())
      restart();
    if (stats_.conflicts >= next_reduce_)
      reduce();
    switch (import()) {
    case ImportOutcome::Conflict:
      if (!handle_conflict())
        return RingResult::Unsat;
      continue;
    case ImportOutcome::BecameInconsistent:
      return RingResult::Unsat;
    case ImportOutcome::ImportedUnits:
    case ImportOutcome::ImportedClause:
      continue;
    case ImportOutcome::NoImport:
      break;
    }
    if (!decide()) {
      save_model();
      exchange_.raise_termination(static_cast<int>(index_), Verdict::Sat);
      return RingResult::Sat;
    }
  }
}

/*------------------------------------------------------------------------*/

size_t Ring::redundant_binaries() const {
  size_t count = 0;
  for (const auto &partners : binaries_)
    count += partners.size();
  return count / 2;
}

size_t Ring::tracked_bytes() const {
  size_t bytes = sizeof(*this);
  bytes += values_.capacity() + levels_.capacity() * sizeof(unsigned) + reasons_.capacity() * sizeof(Reason);
  bytes += phases_.capacity() + trail_.capacity() * sizeof(Lit) + control_.capacity() * sizeof(size_t);
  bytes += watchers_.capacity() * sizeof(Watcher) + free_watchers_.capacity() * sizeof(uint32_t);
  for (const auto &ws : watches_)
    bytes += sizeof(ws) + ws.capacity() * sizeof(uint32_t);
  for (const auto &partners : binaries_)
    bytes += sizeof(partners) + partners.capacity() * sizeof(Lit);
  bytes += saved_.capacity() * sizeof(SavedWatcher);
  bytes += activity_.capacity() * sizeof(double) + heap_.bytes();
  bytes += seen_.capacity() + analyzed_.capacity() * sizeof(uint32_t) + level_stamp_.capacity() * sizeof(uint32_t);
  bytes += mark_.capacity() * sizeof(uint32_t) + model_.capacity();
  return bytes;
}

void Ring::collect_references(std::vector<Clause *> &out) const {
  for (const auto &w : watchers_)
    if (!w.garbage && w.clause)
      out.push_back(w.clause);
  for (const auto &saved : saved_)
    out.push_back(saved.clause);
}

bool Ring::check_watch_invariant() const {
  if (propagated_ != trail_.size() || has_conflict())
    return true;
  for (uint32_t index = 0; index < watchers_.size(); index++) {
    const Watcher &w = watchers_[index];
    if (w.garbage)
      continue;
    const auto lits = w.clause->literals();
    for (Lit l : w.watched)
      if (std::find(lits.begin(), lits.end(), l) == lits.end())
        return false;
    for (unsigned pos = 0; pos < 2; pos++) {
      const Lit l = w.watched[pos];
      const auto &ws = watches_[l.code()];
      if (std::find(ws.begin(), ws.end(), index) == ws.end())
        return false;
    }
    for (unsigned pos = 0; pos < 2; pos++) {
      const Lit a = w.watched[pos], b = w.watched[1 - pos];
      if (values_[a.code()] >= 0)
        continue;
      if (values_[b.code()] <= 0)
        return false;
      if (levels_[b.var().index] > levels_[a.var().index])
        return false;
    }
  }
  return true;
}

} // namespace ringsat
