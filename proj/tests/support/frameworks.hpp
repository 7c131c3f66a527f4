#pragma once

// Exact frameworks shared by the unit tests and the acceptance run.

#include <cstdint>
#include <random>

#include "rcount/rigidity.hpp"

namespace rcount::testing {

// A rational point on the unit sphere S^d via inverse stereographic
// projection of t in Q^d: ((2t, |t|^2 - 1) / (|t|^2 + 1)). The last
// coordinate is nonzero unless |t| = 1.
inline std::vector<mpq_class> rational_sphere_point(const std::vector<mpq_class>& t) {
  mpq_class norm = 0;
  for (const auto& x : t) norm += x * x;
  const mpq_class denom = norm + 1;
  std::vector<mpq_class> q;
  for (const auto& x : t) q.push_back(mpq_class(2 * x / denom));
  q.push_back(mpq_class((norm - 1) / denom));
  return q;
}

// n random rational points on S^d (d+1 coordinates each), none on the
// equator x_{d+1} = 0.
inline RealisationExact random_sphere_realisation(int n, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-60, 60);
  std::uniform_int_distribution<int> den(1, 17);
  RealisationExact q{d, {}};
  while (static_cast<int>(q.coords.size()) < n) {
    std::vector<mpq_class> t;
    for (int j = 0; j < d; ++j) {
      mpq_class x(num(rng), den(rng));
      x.canonicalize();
      t.push_back(x);
    }
    auto point = rational_sphere_point(t);
    if (point.back() != 0) q.coords.push_back(std::move(point));
  }
  return q;
}

// Central projection of each q_v onto the affine chart x_{d+1} = 1,
// dropping the last coordinate.
inline RealisationExact central_projection(const RealisationExact& q) {
  RealisationExact p{q.d, {}};
  for (const auto& c : q.coords) {
    std::vector<mpq_class> x;
    for (std::size_t j = 0; j + 1 < c.size(); ++j) x.push_back(mpq_class(c[j] / c.back()));
    p.coords.push_back(std::move(x));
  }
  return p;
}

// Multiplies every coordinate of the vertices other than `apex` by a random
// nonzero rational. Applied to a cone framework with the apex at the origin
// this is a radial rescaling of the cone's rays.
inline RealisationExact radially_scaled(const RealisationExact& p, int apex,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(1, 40);
  std::uniform_int_distribution<int> den(1, 13);
  RealisationExact out = p;
  for (std::size_t v = 0; v < out.coords.size(); ++v) {
    if (static_cast<int>(v) + 1 == apex) continue;
    mpq_class s(num(rng) * (rng() % 2 ? 1 : -1), den(rng));
    s.canonicalize();
    for (auto& x : out.coords[v]) x *= s;
  }
  return out;
}

// A random integer realisation of cone(g) in dimension d with the apex
// (the last vertex) at the origin.
inline RealisationExact cone_framework(int n_base, int d, std::uint64_t seed) {
  RealisationExact p = random_integer_realisation(n_base + 1, d, seed);
  for (auto& x : p.coords.back()) x = 0;
  return p;
}

}  // namespace rcount::testing
