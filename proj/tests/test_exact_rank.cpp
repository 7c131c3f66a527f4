#include <doctest.h>

#include <random>

#include "rcount/exact_rank.hpp"

using namespace rcount;

TEST_CASE("rank of small integer matrices") {
  CHECK(bareiss_rank({}) == 0);
  CHECK(bareiss_rank({{0, 0}, {0, 0}}) == 0);
  CHECK(bareiss_rank({{1, 2}, {2, 4}}) == 1);
  CHECK(bareiss_rank({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}) == 2);
  CHECK(bareiss_rank({{0, 1}, {1, 0}}) == 2);
  CHECK(bareiss_rank({{2, 0, 0}, {0, 3, 0}}) == 2);
}

TEST_CASE("rational matrices clear denominators") {
  const QMatrix m{{mpq_class(1, 2), mpq_class(1, 3)}, {mpq_class(3, 2), 1}};
  CHECK(exact_rank(m) == 1);
  const QMatrix full{{mpq_class(1, 7), 0}, {0, mpq_class(-2, 9)}};
  CHECK(exact_rank(full) == 2);
}

TEST_CASE("entries beyond double precision") {
  // Rows differ by a perturbation far below double resolution.
  const mpz_class big = mpz_class(1) << 200;
  CHECK(bareiss_rank({{big, big + 1}, {big + 1, big + 2}}) == 2);
  CHECK(bareiss_rank({{big, 2 * big}, {3 * big, 6 * big}}) == 1);
}

TEST_CASE("rank of products of random factors") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> entry(-9, 9);
  for (int r = 1; r <= 5; ++r) {
    // A (6 x r)(r x 7) product has rank r with high probability; never more.
    ZMatrix a(6, std::vector<mpz_class>(r)), b(r, std::vector<mpz_class>(7));
    for (auto& row : a) for (auto& x : row) x = entry(rng);
    for (auto& row : b) for (auto& x : row) x = entry(rng);
    ZMatrix c(6, std::vector<mpz_class>(7, 0));
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 7; ++j)
        for (int k = 0; k < r; ++k) c[i][j] += a[i][k] * b[k][j];
    CHECK(bareiss_rank(c) == static_cast<std::size_t>(r));
  }
}
