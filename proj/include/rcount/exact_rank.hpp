#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <vector>

namespace rcount {

using QMatrix = std::vector<std::vector<mpq_class>>;
using ZMatrix = std::vector<std::vector<mpz_class>>;

// Fraction-free (Bareiss) elimination. Every intermediate entry is a minor
// of the input, so all divisions are exact.
std::size_t bareiss_rank(ZMatrix m);

// Clears denominators row by row, then runs bareiss_rank.
std::size_t exact_rank(const QMatrix& m);

}  // namespace rcount
