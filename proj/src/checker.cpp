#include "ringsat/checker.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

namespace ringsat {

namespace {
constexpr uint32_t no_reason = UINT32_MAX;
}

const char *to_string(CheckStatus status) {
  switch (status) {
  case CheckStatus::Verified:
    return "verified";
  case CheckStatus::AddFailed:
    return "addition not implied";
  case CheckStatus::NoEmptyClause:
    return "no empty clause";
  case CheckStatus::ParseError:
    return "parse error";
  }
  return "?";
}

size_t ClauseDatabase::KeyHash::operator()(const Key &key) const noexcept {
  uint64_t h = 0xcbf29ce484222325ull;
  for (uint32_t x : key) {
    h ^= x;
    h *= 0x100000001b3ull;
  }
  return static_cast<size_t>(h ^ (h >> 29));
}

ClauseDatabase::ClauseDatabase(uint32_t num_vars) { reserve_vars(num_vars); }

void ClauseDatabase::reserve_vars(uint32_t num_vars) {
  const size_t codes = 2 * (size_t{num_vars} + 1);
  if (values_.size() >= codes)
    return;
  values_.resize(codes, 0);
  watches_.resize(codes);
  reasons_.resize(size_t{num_vars} + 1, no_reason);
}

// Sorted distinct literal codes; false for a tautology.
bool ClauseDatabase::make_key(std::span<const Lit> literals, Key &key) {
  key.clear();
  for (Lit l : literals)
    key.push_back(l.code());
  std::sort(key.begin(), key.end());
  key.erase(std::unique(key.begin(), key.end()), key.end());
  for (size_t i = 1; i < key.size(); i++)
    if ((key[i] ^ 1) == key[i - 1])
      return false;
  return true;
}

void ClauseDatabase::assign(Lit l, uint32_t reason) {
  values_[l.code()] = 1;
  values_[(~l).code()] = -1;
  reasons_[l.var().index] = reason;
  trail_.push_back(l);
}

void ClauseDatabase::backtrack(size_t trail_size) {
  while (trail_.size() > trail_size) {
    const Lit l = trail_.back();
    trail_.pop_back();
    values_[l.code()] = values_[(~l).code()] = 0;
    reasons_[l.var().index] = no_reason;
  }
  head_ = std::min(head_, trail_size);
}

bool ClauseDatabase::propagate() {
  while (head_ < trail_.size()) {
    const Lit falsified = ~trail_[head_++];
    auto &ws = watches_[falsified.code()];
    size_t i = 0, j = 0;
    const size_t n = ws.size();
    while (i < n) {
      const uint32_t ci = ws[i++];
      Record &c = records_[ci];
      if (!c.active)
        continue;
      if (c.lits[0] == falsified)
        std::swap(c.lits[0], c.lits[1]);
      if (c.lits[1] != falsified)
        continue;
      if (val(c.lits[0]) > 0) {
        ws[j++] = ci;
        continue;
      }
      bool moved = false;
      for (size_t k = 2; k < c.lits.size(); k++)
        if (val(c.lits[k]) >= 0) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[c.lits[1].code()].push_back(ci);
          moved = true;
          break;
        }
      if (moved)
        continue;
      ws[j++] = ci;
      if (val(c.lits[0]) < 0) {
        while (i < n)
          ws[j++] = ws[i++];
        ws.resize(j);
        return false;
      }
      assign(c.lits[0], ci);
    }
    ws.resize(j);
  }
  return true;
}

void ClauseDatabase::attach(uint32_t index) {
  Record &c = records_[index];
  if (c.lits.size() == 1) {
    const Lit l = c.lits[0];
    if (val(l) > 0)
      reasons_[l.var().index] = index; // prefer the unit as the reason
    else if (val(l) < 0)
      inconsistent_ = true;
    else {
      assign(l, index);
      inconsistent_ = !propagate();
    }
    return;
  }
  auto rank = [&](Lit l) { return val(l) > 0 ? 0 : val(l) == 0 ? 1 : 2; };
  std::stable_sort(c.lits.begin(), c.lits.end(), [&](Lit a, Lit b) { return rank(a) < rank(b); });
  watches_[c.lits[0].code()].push_back(index);
  watches_[c.lits[1].code()].push_back(index);
  c.watched = true;
  if (val(c.lits[0]) < 0) {
    inconsistent_ = true;
  } else if (!val(c.lits[0]) && val(c.lits[1]) < 0) {
    assign(c.lits[0], index);
    inconsistent_ = !propagate();
  }
}

void ClauseDatabase::recompute() {
  backtrack(0);
  head_ = 0;
  inconsistent_ = empty_copies_ > 0;
  for (uint32_t i = 0; i < records_.size(); i++) {
    Record &c = records_[i];
    if (c.active && !c.watched && c.lits.size() > 1) {
      watches_[c.lits[0].code()].push_back(i);
      watches_[c.lits[1].code()].push_back(i);
      c.watched = true;
    }
  }
  for (uint32_t i = 0; i < records_.size() && !inconsistent_; i++) {
    const Record &c = records_[i];
    if (!c.active || c.lits.size() != 1)
      continue;
    const Lit l = c.lits[0];
    if (val(l) < 0)
      inconsistent_ = true;
    else if (!val(l))
      assign(l, i);
  }
  if (!inconsistent_)
    inconsistent_ = !propagate();
}

void ClauseDatabase::insert(std::span<const Lit> literals) {
  uint32_t max_var = 0;
  for (Lit l : literals)
    max_var = std::max(max_var, l.var().index);
  reserve_vars(max_var);
  if (literals.empty()) {
    empty_copies_++;
    inconsistent_ = true;
    return;
  }
  Key key;
  if (!make_key(literals, key))
    return;
  auto it = index_.find(key);
  if (it != index_.end()) {
    records_[it->second].count++;
    return;
  }
  const auto index = static_cast<uint32_t>(records_.size());
  Record record;
  for (uint32_t code : key)
    record.lits.push_back(Lit::from_code(code));
  record.count = 1;
  records_.push_back(std::move(record));
  index_.emplace(std::move(key), index);
  if (!inconsistent_)
    attach(index);
}

bool ClauseDatabase::erase(std::span<const Lit> literals) {
  if (literals.empty()) {
    if (!empty_copies_)
      return false;
    if (!--empty_copies_)
      recompute();
    return true;
  }
  Key key;
  if (!make_key(literals, key))
    return true;
  auto it = index_.find(key);
  if (it == index_.end())
    return false;
  const uint32_t index = it->second;
  Record &c = records_[index];
  if (--c.count)
    return true;
  c.active = false;
  index_.erase(it);
  const Lit implied = c.lits[0];
  if (inconsistent_ || (val(implied) > 0 && reasons_[implied.var().index] == index))
    recompute();
  return true;
}

size_t ClauseDatabase::copies(std::span<const Lit> literals) const {
  if (literals.empty())
    return empty_copies_;
  Key key;
  if (!make_key(literals, key))
    return 0;
  auto it = index_.find(key);
  return it == index_.end() ? 0 : records_[it->second].count;
}

bool ClauseDatabase::rup(std::span<const Lit> literals) {
  if (inconsistent_)
    return true;
  uint32_t max_var = 0;
  for (Lit l : literals)
    max_var = std::max(max_var, l.var().index);
  reserve_vars(max_var);
  const size_t saved = trail_.size();
  bool conflict = false;
  for (Lit l : literals) {
    if (val(l) > 0) {
      conflict = true;
      break;
    }
    if (!val(l))
      assign(~l, no_reason);
  }
  if (!conflict)
    conflict = !propagate();
  backtrack(saved);
  return conflict;
}

bool ClauseDatabase::rat(std::span<const Lit> literals) {
  if (literals.empty())
    return false;
  const Lit pivot = literals[0];
  std::vector<Lit> resolvent;
  for (const Record &d : records_) {
    if (!d.active || std::find(d.lits.begin(), d.lits.end(), ~pivot) == d.lits.end())
      continue;
    resolvent.assign(literals.begin(), literals.end());
    for (Lit l : d.lits)
      if (l != ~pivot)
        resolvent.push_back(l);
    Key key;
    if (!make_key(resolvent, key))
      continue;
    if (!rup(resolvent))
      return false;
  }
  return true;
}

/*------------------------------------------------------------------------*/

CheckResult check_proof(const InputFormula &formula, std::string_view proof, ProofEncoding encoding) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult result;
  auto finish = [&](CheckStatus status, size_t line, std::string message) {
    result.status = status;
    result.line = line;
    result.message = std::move(message);
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  };

  std::vector<ProofLine> lines;
  try {
    lines = parse_proof(proof, encoding);
  } catch (const ProofParseError &e) {
    return finish(CheckStatus::ParseError, e.line(), e.what());
  }

  uint32_t max_var = formula.num_vars;
  for (const auto &line : lines)
    for (int64_t x : line.literals)
      max_var = std::max<uint32_t>(max_var, static_cast<uint32_t>(x < 0 ? -x : x));
  ClauseDatabase db(max_var);
  for (const auto &clause : formula.clauses)
    db.insert(clause);
  if (formula.has_empty_clause)
    db.insert({});

  std::vector<Lit> lits;
  for (const auto &line : lines) {
    lits.clear();
    for (int64_t x : line.literals)
      lits.push_back(lit_from_dimacs(x));
    if (line.kind == ProofKind::Delete) {
      result.deletions++;
      if (!db.erase(lits))
        result.missing_deletions++;
      continue;
    }
    result.additions++;
    if (!db.rup(lits)) {
      if (!db.rat(lits))
        return finish(CheckStatus::AddFailed, line.line, "clause is neither RUP nor RAT");
      result.rat_additions++;
    }
    if (lits.empty())
      return finish(CheckStatus::Verified, line.line, {});
    db.insert(lits);
  }
  return finish(CheckStatus::NoEmptyClause, 0, "proof ends without the empty clause");
}

CheckResult check_proof_files(const std::string &cnf_path, const std::string &proof_path, ProofEncoding encoding) {
  CheckResult result;
  InputFormula formula;
  try {
    formula = parse_dimacs_file(cnf_path);
  } catch (const ParseError &e) {
    result.status = CheckStatus::ParseError;
    result.line = e.line();
    result.message = cnf_path + ": " + e.what();
    return result;
  } catch (const std::exception &e) {
    result.status = CheckStatus::ParseError;
    result.message = e.what();
    return result;
  }
  std::ifstream in(proof_path, std::ios::binary);
  if (!in) {
    result.status = CheckStatus::ParseError;
    result.message = "cannot open " + proof_path;
    return result;
  }
  std::ostringstream bytes;
  bytes << in.rdbuf();
  return check_proof(formula, bytes.str(), encoding);
}

} // namespace ringsat
