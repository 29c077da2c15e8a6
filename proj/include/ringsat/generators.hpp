#pragma once

#include "ringsat/formula.hpp"

#include <cstdint>

namespace ringsat {

// Uniform random k-SAT: every clause has k distinct variables with random
// signs.  Deterministic in 'seed'.
InputFormula random_ksat(uint32_t num_vars, uint32_t num_clauses, unsigned k, uint64_t seed);

// Pigeons into 'holes' holes with one more pigeon than holes (unsatisfiable).
InputFormula pigeonhole(unsigned holes);

} // namespace ringsat
