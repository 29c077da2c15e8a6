#include "ringsat/ruler.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace ringsat {

unsigned default_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n ? n : 1;
}

namespace {

std::unique_ptr<ProofTracer> open_proof(const SolverOptions &options) {
  if (options.proof || options.proof_path.empty() || options.proof_mode == ProofMode::Off)
    return nullptr;
  return std::make_unique<ProofTracer>(options.proof_path, options.proof_encoding, options.proof_mode);
}

} // namespace

Ruler::Ruler(const InputFormula &formula, const SolverOptions &options)
    : formula_(formula), options_(options), owned_proof_(open_proof(options)),
      proof_(options.proof ? options.proof : owned_proof_.get()), store_(proof_) {
  if (!options_.threads)
    throw std::invalid_argument("at least one thread is required");
  if (proof_ && !proof_->enabled())
    proof_ = nullptr;
  const size_t vars = size_t{formula.num_vars} + 1;
  fixed_.assign(2 * vars, 0);
  eliminated_.assign(vars, 0);
  exchange_ = std::make_unique<Exchange>(options_.threads, formula.num_vars, store_, proof_);
  binaries_ = std::make_unique<BinaryTable>();
}

Ruler::~Ruler() { teardown(); }

void Ruler::teardown() {
  rings_.clear();
  if (exchange_)
    exchange_->pools().clear(store_);
  for (Clause *c : pending_clauses_)
    store_.release(c);
  pending_clauses_.clear();
  if (owned_proof_)
    owned_proof_->close();
  else if (proof_)
    proof_->flush();
}

void Ruler::refute() {
  refuted_ = true;
  exchange_->raise_termination(static_cast<int>(options_.threads), Verdict::Unsat);
}

bool Ruler::publish_fixed(const std::vector<Lit> &units) {
  for (Lit lit : units)
    if (!exchange_->publish_unit(static_cast<int>(options_.threads), lit, false)) {
      refuted_ = true;
      return false;
    }
  return true;
}

// Moves units published by rings into the fixed map.
bool Ruler::absorb_units() {
  while (auto unit = exchange_->units().at(units_absorbed_)) {
    units_absorbed_++;
    const Lit lit = *unit;
    if (fixed_[lit.code()] < 0) {
      refute();
      return false;
    }
    fixed_[lit.code()] = 1;
    fixed_[(~lit).code()] = -1;
  }
  return true;
}

/*------------------------------------------------------------------------*/

bool Ruler::preprocess() {
  assert(!preprocessed_);
  preprocessed_ = true;
  if (proof_)
    for (const auto &clause : formula_.dropped_tautologies)
      proof_->remove(clause);
  if (formula_.has_empty_clause) {
    refute();
    return false;
  }
  std::vector<Lit> units;
  for (const auto &clause : formula_.clauses) {
    if (clause.size() != 1)
      continue;
    const Lit lit = clause[0];
    if (fixed_[lit.code()] < 0) {
      refute();
      return false;
    }
    if (!fixed_[lit.code()]) {
      fixed_[lit.code()] = 1;
      fixed_[(~lit).code()] = -1;
      units.push_back(lit);
    }
  }
  if (!options_.preprocessing) {
    for (const auto &clause : formula_.clauses) {
      if (clause.size() == 2)
        pending_binaries_.emplace_back(clause[0], clause[1]);
      else if (clause.size() > 2)
        pending_clauses_.push_back(store_.allocate(clause, 0, false, false));
    }
    return publish_fixed(units);
  }
  Simplifier simplifier(formula_.num_vars, store_, proof_, fixed_, eliminated_, stack_);
  for (const auto &clause : formula_.clauses)
    if (clause.size() >= 2)
      simplifier.add_literals(clause);
  if (!simplifier.run(options_.simplifier)) {
    refute();
    return false;
  }
  units.insert(units.end(), simplifier.new_units().begin(), simplifier.new_units().end());
  pending_binaries_ = simplifier.binaries();
  pending_clauses_ = simplifier.take_clauses();
  if (proof_)
    proof_->flush();
  return publish_fixed(units);
}

void Ruler::clone_rings() {
  assert(rings_.empty());
  if (!preprocessed_)
    preprocess();
  binaries_ = std::make_unique<BinaryTable>(BinaryTable::build(formula_.num_vars, pending_binaries_));
  pending_binaries_.clear();
  for (unsigned i = 0; i < options_.threads; i++) {
    auto ring = std::make_unique<Ring>(i, formula_.num_vars, portfolio_config(i, options_.seed), options_.tuning,
                                       *exchange_, binaries_.get(), &eliminated_);
    ring->set_coordinator(this);
    ring->set_conflict_limit(options_.conflict_limit);
    ring->set_exchange_enabled(options_.exchange);
    if (!i && options_.inprocessing)
      ring->set_inprocessing(options_.inprocess_first);
    rings_.push_back(std::move(ring));
  }
  // Ring 0 becomes the owner of the single reference each clause carries.
  for (unsigned i = 0; i < rings(); i++) {
    rings_[i]->attach_irredundant(pending_clauses_, i == 0);
    if (!refuted_ && rings_[i]->import_units() == ImportOutcome::BecameInconsistent)
      refuted_ = true;
  }
  pending_clauses_.clear();
  peak_bytes_ = std::max(peak_bytes_, memory().total());
}

/*------------------------------------------------------------------------*/

void Ruler::request_barrier(Ring &) { barrier_requested_.store(true, std::memory_order_release); }

bool Ruler::arrive(Ring &) {
  std::unique_lock lock(mutex_);
  const uint64_t generation = generation_;
  arrived_++;
  ruler_cv_.notify_all();
  rings_cv_.wait(lock, [&] { return generation_ != generation || abandon_; });
  return !abandon_;
}

bool Ruler::inprocess_round() {
  for (auto &ring : rings_)
    ring->backtrack(0);
  if (!absorb_units())
    return false;
  std::vector<Clause *> handover;
  for (unsigned i = rings(); i-- > 1;)
    rings_[i]->unclone(nullptr);
  rings_[0]->unclone(&handover);
  exchange_->pools().clear(store_);

  Simplifier simplifier(formula_.num_vars, store_, proof_, fixed_, eliminated_, stack_);
  for (Clause *c : handover)
    simplifier.add_clause(c);
  for (uint32_t code = 2; code + 1 < binaries_->offsets.size(); code++)
    for (Lit other : binaries_->of(Lit::from_code(code)))
      if (code < other.code()) {
        const Lit pair[2] = {Lit::from_code(code), other};
        simplifier.add_literals(pair);
      }
  const bool consistent = simplifier.run(options_.simplifier);
  rounds_++;
  if (!consistent) {
    refute();
    return false;
  }
  if (!publish_fixed(simplifier.new_units()))
    return false;
  const auto binaries = simplifier.binaries();
  binaries_ = std::make_unique<BinaryTable>(BinaryTable::build(formula_.num_vars, binaries));
  const auto clauses = simplifier.take_clauses();
  if (proof_)
    proof_->flush();
  for (unsigned i = 0; i < rings(); i++) {
    Ring &ring = *rings_[i];
    ring.set_binaries(binaries_.get());
    if (ring.import_units() == ImportOutcome::BecameInconsistent) {
      refuted_ = true;
      // The remaining references still need an owner for teardown.
      if (!i)
        ring.attach_irredundant(clauses, true);
      return false;
    }
    ring.attach_irredundant(clauses, i == 0);
    ring.restore_redundant();
    ring.resume_after_barrier();
  }
  assert(audit_references());
  peak_bytes_ = std::max(peak_bytes_, memory().total());
  return true;
}

/*------------------------------------------------------------------------*/

SolveResult Ruler::run() {
  const auto start = std::chrono::steady_clock::now();
  SolveResult result;
  if (!refuted_ && !exchange_->terminating()) {
    if (proof_)
      proof_->flush();
    {
      std::lock_guard lock(mutex_);
      running_ = rings();
      arrived_ = 0;
      abandon_ = false;
    }
    std::vector<std::thread> threads;
    try {
      for (auto &ring : rings_)
        threads.emplace_back([this, r = ring.get()] {
          r->solve();
          if (proof_)
            proof_->flush();
          std::lock_guard lock(mutex_);
          running_--;
          ruler_cv_.notify_all();
        });
    } catch (const std::system_error &e) {
      std::fprintf(stderr, "ringsat: fatal: cannot start thread: %s\n", e.what());
      std::abort();
    }
    const bool limited = options_.time_limit > 0;
    const auto deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                      std::chrono::duration<double>(options_.time_limit));
    std::unique_lock lock(mutex_);
    while (running_) {
      ruler_cv_.wait_for(lock, std::chrono::milliseconds(5));
      if (limited && std::chrono::steady_clock::now() >= deadline)
        exchange_->interrupt();
      if (exchange_->terminating()) {
        if (!abandon_) {
          abandon_ = true;
          rings_cv_.notify_all();
        }
        continue;
      }
      if (barrier_requested() && arrived_ == running_) {
        if (!inprocess_round()) {
          abandon_ = true;
          rings_cv_.notify_all();
          continue;
        }
        barrier_requested_.store(false, std::memory_order_release);
        arrived_ = 0;
        generation_++;
        rings_cv_.notify_all();
      }
    }
    lock.unlock();
    for (auto &t : threads)
      t.join();
  }
  result.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  auto &flags = exchange_->flags();
  result.verdict = static_cast<Verdict>(flags.verdict.load(std::memory_order_acquire));
  result.stats.winner = flags.winner.load(std::memory_order_acquire);
  if (refuted_)
    result.verdict = Verdict::Unsat;
  if (result.verdict == Verdict::Sat) {
    const auto &assignment = rings_.at(static_cast<size_t>(result.stats.winner))->model();
    result.model = reconstruct_model(assignment);
    const long falsified = first_falsified(formula_.clauses, result.model);
    if (falsified >= 0 || formula_.has_empty_clause) {
      std::fprintf(stderr, "ringsat: fatal: model falsifies input clause %ld\n", falsified);
      std::abort();
    }
  }
  finish_stats(result);
  return result;
}

SolveResult Ruler::solve() {
  const auto start = std::chrono::steady_clock::now();
  preprocess();
  clone_rings();
  SolveResult result = run();
  result.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<signed char> Ruler::reconstruct_model(const std::vector<signed char> &assignment) const {
  std::vector<signed char> model(size_t{formula_.num_vars} + 1, 0);
  for (uint32_t v = 1; v <= formula_.num_vars; v++) {
    if (eliminated_[v])
      continue;
    const int8_t fixed = fixed_[Lit(Var(v), false).code()];
    if (fixed)
      model[v] = fixed;
    else if (v < assignment.size())
      model[v] = assignment[v];
  }
  stack_.extend(model);
  for (uint32_t v = 1; v <= formula_.num_vars; v++)
    if (!model[v])
      model[v] = -1;
  return model;
}

void Ruler::finish_stats(SolveResult &result) {
  auto &s = result.stats;
  for (const auto &ring : rings_) {
    const RingStats &r = ring->stats();
    s.rings.push_back(r);
    s.conflicts += r.conflicts;
    s.decisions += r.decisions;
    s.propagations += r.propagations;
    s.restarts += r.restarts;
    s.reductions += r.reductions;
    s.exported += r.exported_clauses + r.exported_binaries;
    s.imported += r.imported_clauses + r.imported_binaries;
    s.imported_units += r.imported_units;
  }
  s.inprocess_rounds = rounds_;
  s.eliminated = std::count(eliminated_.begin(), eliminated_.end(), 1);
  for (uint32_t v = 1; v <= formula_.num_vars; v++)
    s.fixed += fixed_[Lit(Var(v), false).code()] != 0;
  peak_bytes_ = std::max(peak_bytes_, memory().total());
  s.peak_tracked_bytes = peak_bytes_;
  if (proof_) {
    proof_->flush();
    s.proof_bytes = proof_->bytes_written();
    s.proof_adds = proof_->added();
    s.proof_deletes = proof_->deleted();
  }
}

/*------------------------------------------------------------------------*/

std::vector<Clause *> Ruler::live_clauses() const {
  std::vector<Clause *> all;
  for (const auto &ring : rings_)
    ring->collect_references(all);
  exchange_->pools().for_each_clause([&](Clause *c) { all.push_back(c); });
  all.insert(all.end(), pending_clauses_.begin(), pending_clauses_.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

bool Ruler::audit_references(std::string *problem) const {
  std::unordered_map<const Clause *, size_t> holders;
  std::vector<Clause *> all;
  for (const auto &ring : rings_)
    ring->collect_references(all);
  exchange_->pools().for_each_clause([&](Clause *c) { all.push_back(c); });
  all.insert(all.end(), pending_clauses_.begin(), pending_clauses_.end());
  for (Clause *c : all)
    holders[c]++;
  for (const auto &[c, count] : holders)
    if (c->references() != count) {
      if (problem)
        *problem = "clause " + std::to_string(c->id()) + " has " + std::to_string(c->references()) +
                   " references but " + std::to_string(count) + " holders";
      return false;
    }
  if (holders.size() != store_.live_clauses()) {
    if (problem)
      *problem = std::to_string(store_.live_clauses()) + " live clauses but " + std::to_string(holders.size()) +
                 " reachable";
    return false;
  }
  return true;
}

MemoryReport Ruler::memory() const {
  MemoryReport report;
  report.literal_bytes = store_.literal_bytes();
  report.clause_bytes = store_.clause_bytes();
  report.binary_bytes = binaries_ ? binaries_->bytes() : 0;
  for (const auto &ring : rings_)
    report.ring_bytes += ring->tracked_bytes();
  report.exchange_bytes = exchange_ ? exchange_->bytes() : 0;
  return report;
}

SolveResult solve(const InputFormula &formula, const SolverOptions &options) {
  Ruler ruler(formula, options);
  return ruler.solve();
}

} // namespace ringsat
