#include "ringsat/formula.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

namespace ringsat {

Lit encode_lit(int64_t dimacs, uint32_t num_vars) {
  if (dimacs == 0)
    throw LitRangeError("literal 0 is the clause terminator, not a literal");
  const uint64_t magnitude = dimacs < 0 ? static_cast<uint64_t>(-dimacs) : static_cast<uint64_t>(dimacs);
  if (magnitude > num_vars)
    throw LitRangeError("literal " + std::to_string(dimacs) + " exceeds declared " +
                        std::to_string(num_vars) + " variables");
  return lit_from_dimacs(dimacs);
}

ParseError::ParseError(size_t line, const std::string &message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

bool normalize_clause(LitVec &clause) {
  std::sort(clause.begin(), clause.end());
  clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
  for (size_t i = 1; i < clause.size(); i++)
    if (clause[i - 1].var() == clause[i].var())
      return false;
  return true;
}

namespace {

class DimacsScanner {
public:
  explicit DimacsScanner(std::string_view text) : text_(text) {}

  InputFormula parse() {
    InputFormula formula;
    parse_header(formula);
    const auto declared_vars = static_cast<uint32_t>(header_vars_);

    LitVec clause;
    size_t clause_line = 0;
    bool in_clause = false;
    uint64_t parsed = 0;

    for (;;) {
      skip_space_and_comments();
      if (at_end() || text_[pos_] == '%')
        break;
      const size_t token_line = line_;
      const int64_t value = read_int("literal");
      if (!in_clause) {
        in_clause = true;
        clause_line = token_line;
      }
      if (value == 0) {
        parsed++;
        in_clause = false;
        if (clause.empty()) {
          formula.has_empty_clause = true;
          continue;
        }
        LitVec original = clause;
        if (normalize_clause(clause))
          formula.clauses.push_back(std::move(clause));
        else
          formula.dropped_tautologies.push_back(std::move(original));
        clause.clear();
        continue;
      }
      try {
        clause.push_back(encode_lit(value, declared_vars));
      } catch (const LitRangeError &e) {
        throw ParseError(token_line, e.what());
      }
    }
    if (in_clause)
      throw ParseError(clause_line, "unterminated clause (missing trailing 0)");

    formula.num_vars = declared_vars;
    if (parsed != header_clauses_)
      formula.warnings.push_back("header declares " + std::to_string(header_clauses_) +
                                 " clauses but " + std::to_string(parsed) + " were parsed");
    return formula;
  }

private:
  bool at_end() const { return pos_ >= text_.size(); }

  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

  void skip_space() {
    while (!at_end() && is_space(text_[pos_])) {
      if (text_[pos_] == '\n')
        line_++;
      pos_++;
    }
  }

  void skip_line() {
    while (!at_end() && text_[pos_] != '\n')
      pos_++;
  }

  void skip_space_and_comments() {
    for (;;) {
      skip_space();
      if (!at_end() && text_[pos_] == 'c')
        skip_line();
      else
        return;
    }
  }

  int64_t read_int(const char *what) {
    const size_t start = pos_;
    while (!at_end() && !is_space(text_[pos_]))
      pos_++;
    const std::string_view token = text_.substr(start, pos_ - start);
    int64_t value = 0;
    const char *first = token.data();
    const char *last = token.data() + token.size();
    if (!token.empty() && *first == '+')
      first++;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (token.empty() || ec != std::errc() || ptr != last)
      throw ParseError(line_, std::string("expected integer ") + what + ", got '" + std::string(token) + "'");
    return value;
  }

  void parse_header(InputFormula &) {
    skip_space_and_comments();
    if (at_end())
      throw ParseError(line_, "missing 'p cnf' header");
    const size_t header_line = line_;
    const size_t eol = text_.find('\n', pos_);
    const std::string_view line = text_.substr(pos_, eol == std::string_view::npos ? std::string_view::npos : eol - pos_);
    std::istringstream fields{std::string(line)};
    std::string p, cnf;
    int64_t vars = -1, clauses = -1;
    std::string extra;
    if (!(fields >> p >> cnf >> vars >> clauses) || p != "p" || cnf != "cnf" || vars < 0 || clauses < 0 ||
        vars > (int64_t{1} << 30) || (fields >> extra))
      throw ParseError(header_line, "malformed header, expected 'p cnf <vars> <clauses>'");
    header_vars_ = vars;
    header_clauses_ = static_cast<uint64_t>(clauses);
    pos_ = eol == std::string_view::npos ? text_.size() : eol;
  }

  std::string_view text_;
  size_t pos_ = 0;
  size_t line_ = 1;
  int64_t header_vars_ = 0;
  uint64_t header_clauses_ = 0;
};

} // namespace

InputFormula parse_dimacs_string(std::string_view text) { return DimacsScanner(text).parse(); }

InputFormula parse_dimacs(std::istream &in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_dimacs_string(text);
}

InputFormula parse_dimacs_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("can not open '" + path + "'");
  return parse_dimacs(in);
}

void write_dimacs(std::ostream &out, const InputFormula &formula) {
  const size_t count = formula.clauses.size() + (formula.has_empty_clause ? 1 : 0);
  out << "p cnf " << formula.num_vars << ' ' << count << '\n';
  if (formula.has_empty_clause)
    out << "0\n";
  for (const auto &clause : formula.clauses) {
    for (Lit lit : clause)
      out << decode_lit(lit) << ' ';
    out << "0\n";
  }
}

std::string to_dimacs(const InputFormula &formula) {
  std::ostringstream out;
  write_dimacs(out, formula);
  return out.str();
}

long first_falsified(const std::vector<LitVec> &clauses, const std::vector<signed char> &model) {
  for (size_t i = 0; i < clauses.size(); i++) {
    bool satisfied = false;
    for (Lit lit : clauses[i]) {
      const auto v = lit.var().index;
      if (v < model.size() && model[v] == (lit.negative() ? -1 : 1)) {
        satisfied = true;
        break;
      }
    }
    if (!satisfied)
      return static_cast<long>(i);
  }
  return -1;
}

} // namespace ringsat
