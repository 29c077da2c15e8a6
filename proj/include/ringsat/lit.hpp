#pragma once

#include <cassert>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>

namespace ringsat {

// Variables are numbered 1..num_vars as in DIMACS.

struct Var {
  uint32_t index = 0;

  constexpr Var() = default;
  constexpr explicit Var(uint32_t i) : index(i) {}

  friend constexpr bool operator==(Var, Var) = default;
  friend constexpr auto operator<=>(Var, Var) = default;
};

// A literal of variable 'v' with sign 's' (1 = negative) has code 2*v + s.
// Codes 0 and 1 are never used by a real literal, which lets 0 serve as an
// "absent" sentinel in packed and atomic storage.

class Lit {
public:
  constexpr Lit() = default;
  constexpr Lit(Var v, bool negative) : code_(2 * v.index + (negative ? 1u : 0u)) {}

  static constexpr Lit from_code(uint32_t code) {
    Lit l;
    l.code_ = code;
    return l;
  }

  constexpr uint32_t code() const { return code_; }
  constexpr Var var() const { return Var(code_ >> 1); }
  constexpr bool negative() const { return code_ & 1; }
  constexpr bool valid() const { return code_ >= 2; }

  constexpr Lit operator~() const { return from_code(code_ ^ 1); }

  friend constexpr bool operator==(Lit, Lit) = default;
  friend constexpr auto operator<=>(Lit, Lit) = default;

private:
  uint32_t code_ = 0;
};

class LitRangeError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Throws 'LitRangeError' on zero or on |dimacs| > num_vars.
Lit encode_lit(int64_t dimacs, uint32_t num_vars);

constexpr int64_t decode_lit(Lit lit) {
  const int64_t v = lit.var().index;
  return lit.negative() ? -v : v;
}

// Unchecked conversion for internal use where the range is known.
constexpr Lit lit_from_dimacs(int64_t dimacs) {
  assert(dimacs != 0);
  return dimacs < 0 ? Lit(Var(static_cast<uint32_t>(-dimacs)), true)
                    : Lit(Var(static_cast<uint32_t>(dimacs)), false);
}

} // namespace ringsat

template <> struct std::hash<ringsat::Lit> {
  size_t operator()(ringsat::Lit l) const noexcept { return std::hash<uint32_t>{}(l.code()); }
};
