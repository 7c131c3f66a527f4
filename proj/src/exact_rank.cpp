#include "rcount/exact_rank.hpp"

#include <utility>

namespace rcount {

std::size_t bareiss_rank(ZMatrix m) {
  const std::size_t rows = m.size();
  if (rows == 0) return 0;
  const std::size_t cols = m.front().size();
  mpz_class prev = 1;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && sgn(m[pivot][c]) == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[pivot], m[rank]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        mpz_class t = m[rank][c] * m[i][j] - m[i][c] * m[rank][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev = m[rank][c];
    ++rank;
  }
  return rank;
}

std::size_t exact_rank(const QMatrix& m) {
  ZMatrix z;
  z.reserve(m.size());
  for (const auto& row : m) {
    mpz_class den = 1;
    for (const auto& x : row) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(),
                                      x.get_den_mpz_t());
    std::vector<mpz_class> zr;
    zr.reserve(row.size());
    for (const auto& x : row) zr.emplace_back(x.get_num() * (den / x.get_den()));
    z.push_back(std::move(zr));
  }
  return bareiss_rank(std::move(z));
}

}  // namespace rcount
