#include "oracles.hpp"

#include "ringsat/generators.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace oracle {

IntCnf to_ints(const ringsat::InputFormula &formula) {
  IntCnf out;
  for (const auto &clause : formula.clauses) {
    IntClause c;
    for (auto lit : clause)
      c.push_back(lit.negative() ? -static_cast<int>(lit.var().index) : static_cast<int>(lit.var().index));
    out.push_back(std::move(c));
  }
  if (formula.has_empty_clause)
    out.push_back({});
  return out;
}

IntCnf premises(const ringsat::InputFormula &formula) {
  IntCnf out = to_ints(formula);
  for (const auto &clause : formula.dropped_tautologies) {
    IntClause c;
    for (auto lit : clause)
      c.push_back(lit.negative() ? -static_cast<int>(lit.var().index) : static_cast<int>(lit.var().index));
    out.push_back(std::move(c));
  }
  return out;
}

ringsat::InputFormula from_ints(uint32_t num_vars, const IntCnf &clauses) {
  std::string text = "p cnf " + std::to_string(num_vars) + " " + std::to_string(clauses.size()) + "\n";
  for (const auto &c : clauses) {
    for (int x : c)
      text += std::to_string(x) + " ";
    text += "0\n";
  }
  return ringsat::parse_dimacs_string(text);
}

Propagation naive_propagate(uint32_t num_vars, const IntCnf &clauses, const std::vector<int> &assumptions) {
  Propagation p;
  p.value.assign(num_vars + 1, 0);
  auto val = [&](int lit) { return lit > 0 ? p.value[lit] : -p.value[-lit]; };
  for (int lit : assumptions) {
    if (val(lit) < 0) {
      p.conflict = true;
      return p;
    }
    p.value[std::abs(lit)] = lit > 0 ? 1 : -1;
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto &c : clauses) {
      int unassigned = 0, last = 0;
      bool satisfied = false;
      for (int lit : c) {
        if (val(lit) > 0)
          satisfied = true;
        else if (!val(lit)) {
          unassigned++;
          last = lit;
        }
      }
      if (satisfied)
        continue;
      if (!unassigned) {
        p.conflict = true;
        return p;
      }
      if (unassigned == 1) {
        p.value[std::abs(last)] = last > 0 ? 1 : -1;
        changed = true;
      }
    }
  }
  return p;
}

bool satisfies(const IntCnf &clauses, const std::vector<signed char> &model) {
  for (const auto &c : clauses) {
    bool sat = false;
    for (int lit : c) {
      const size_t v = static_cast<size_t>(std::abs(lit));
      if (v < model.size() && (lit > 0 ? model[v] > 0 : model[v] < 0))
        sat = true;
    }
    if (!sat)
      return false;
  }
  return true;
}

bool brute_force_sat(uint32_t num_vars, const IntCnf &clauses) {
  std::vector<signed char> model(num_vars + 1, -1);
  for (uint64_t bits = 0; bits < (uint64_t{1} << num_vars); bits++) {
    for (uint32_t v = 1; v <= num_vars; v++)
      model[v] = (bits >> (v - 1)) & 1 ? 1 : -1;
    if (satisfies(clauses, model))
      return true;
  }
  return false;
}

/*------------------------------------------------------------------------*/

std::optional<std::vector<Step>> read_ascii_proof(std::string_view text) {
  std::vector<Step> steps;
  size_t pos = 0;
  while (pos < text.size()) {
    const size_t end = text.find('\n', pos);
    if (end == std::string_view::npos)
      return std::nullopt; // torn last line
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty())
      continue;
    Step step;
    size_t i = 0;
    if (line[0] == 'd') {
      step.deletion = true;
      i = 1;
    }
    bool terminated = false;
    while (i < line.size()) {
      while (i < line.size() && line[i] == ' ')
        i++;
      if (i >= line.size())
        break;
      size_t j = i;
      if (line[j] == '-')
        j++;
      if (j >= line.size() || !std::isdigit(static_cast<unsigned char>(line[j])))
        return std::nullopt;
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j])))
        j++;
      const int x = std::stoi(line.substr(i, j - i));
      i = j;
      if (terminated)
        return std::nullopt;
      if (!x)
        terminated = true;
      else
        step.lits.push_back(x);
    }
    if (!terminated)
      return std::nullopt;
    steps.push_back(std::move(step));
  }
  return steps;
}

std::optional<std::vector<Step>> read_binary_proof(std::string_view bytes) {
  std::vector<Step> steps;
  size_t i = 0;
  while (i < bytes.size()) {
    const char tag = bytes[i++];
    if (tag != 'a' && tag != 'd')
      return std::nullopt;
    Step step;
    step.deletion = tag == 'd';
    for (;;) {
      uint64_t value = 0;
      unsigned shift = 0;
      for (;;) {
        if (i >= bytes.size())
          return std::nullopt;
        const auto byte = static_cast<unsigned char>(bytes[i++]);
        value |= uint64_t{byte & 127u} << shift;
        shift += 7;
        if (!(byte & 128))
          break;
      }
      if (!value)
        break;
      const int v = static_cast<int>(value >> 1);
      step.lits.push_back(value & 1 ? -v : v);
    }
    steps.push_back(std::move(step));
  }
  return steps;
}

std::vector<int> key_of(std::vector<int> lits) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  return lits;
}

Hygiene multiset_hygiene(const IntCnf &premises, const std::vector<Step> &steps) {
  Hygiene h;
  std::map<std::vector<int>, long> live;
  for (const auto &c : premises)
    live[key_of(c)]++;
  for (size_t i = 0; i < steps.size(); i++) {
    const auto key = key_of(steps[i].lits);
    if (!steps[i].deletion) {
      h.adds++;
      live[key]++;
      if (key.empty())
        h.has_empty = true;
      continue;
    }
    h.deletes++;
    if (--live[key] < 0 && h.ok) {
      h.ok = false;
      h.first_violation = i + 1;
      h.message = "deletion without matching addition at step " + std::to_string(i + 1);
    }
  }
  return h;
}

/*------------------------------------------------------------------------*/

std::vector<NamedFormula> edge_cases() {
  std::vector<NamedFormula> out;
  out.push_back({"empty-formula", from_ints(0, {})});
  out.push_back({"empty-formula-with-vars", from_ints(5, {})});
  out.push_back({"single-unit", from_ints(1, {{1}})});
  out.push_back({"single-negative-unit", from_ints(3, {{-2}})});
  out.push_back({"contradictory-units", from_ints(1, {{1}, {-1}})});
  out.push_back({"empty-clause", from_ints(2, {{1, 2}, {}})});
  out.push_back({"unit-chain", from_ints(3, {{1}, {-1, 2}, {-2, 3}})});
  out.push_back({"unit-chain-conflict", from_ints(3, {{1}, {-1, 2}, {-2, 3}, {-3, -1}})});
  out.push_back({"all-binary-sat", from_ints(4, {{1, 2}, {-1, 3}, {-3, 4}, {-2, -4}, {2, 3}})});
  out.push_back({"all-binary-unsat", from_ints(2, {{1, 2}, {1, -2}, {-1, 2}, {-1, -2}})});
  out.push_back({"tautology-only", from_ints(2, {{1, -1}, {2, -2, 1}})});
  out.push_back({"duplicate-literals", from_ints(2, {{1, 1, 2}, {-1, -1}, {-2, -2, 1}})});
  // Implication cycle with a contradiction on both ends.
  out.push_back({"binary-cycle-unsat", from_ints(3, {{-1, 2}, {-2, 3}, {-3, 1}, {1, 2}, {-1, -3}})});
  return out;
}

std::vector<NamedFormula> soundness_corpus() {
  std::vector<NamedFormula> out = edge_cases();
  for (unsigned k = 3; k <= 7; k++)
    out.push_back({"php-" + std::to_string(k + 1) + "-" + std::to_string(k), ringsat::pigeonhole(k)});
  for (uint64_t seed = 1; seed <= 100; seed++)
    out.push_back({"r50-" + std::to_string(seed), ringsat::random_ksat(50, 213, 3, seed)});
  for (uint64_t seed = 1; seed <= 90; seed++)
    out.push_back({"r100-" + std::to_string(seed), ringsat::random_ksat(100, 426, 3, 1000 + seed)});
  return out;
}

} // namespace oracle
