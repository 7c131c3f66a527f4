#include <doctest.h>

#include <sstream>

#include "rcount/error.hpp"
#include "rcount/homotopy.hpp"

using namespace rcount;

namespace {

CVector vec(std::initializer_list<cplx> xs) {
  CVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const cplx& x : xs) v(i++) = x;
  return v;
}

// a x^2 + b in one variable.
Polynomial quadratic(cplx a, cplx b) {
  Polynomial p(1);
  p.add_quadratic(a, 0, 0);
  p.add_constant(b);
  return p;
}

// Equal as sets: every point of a has a partner in b within relative tol.
bool same_points(const std::vector<CVector>& a, const std::vector<CVector>& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& x : a) {
    bool found = false;
    for (std::size_t j = 0; j < b.size() && !found; ++j)
      if (!used[j] && (x - b[j]).norm() <= tol * std::max(1.0, x.norm())) used[j] = found = true;
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("one-variable solve") {
  // 1/2 x^2 = 1/2
  const auto sys = PolySystem::from_equations({quadratic(0.5, -0.5)});
  const SolveResult res = solve(sys, {});
  CHECK(res.raw_count == 2);
  CHECK(res.path_count == 2);
  REQUIRE(res.distinct_solutions.size() == 2);
  CHECK(std::abs(res.distinct_solutions[0](0) - cplx(-1, 0)) < 1e-10);
  CHECK(std::abs(res.distinct_solutions[1](0) - cplx(1, 0)) < 1e-10);
  CHECK(res.paths_failed == 0);
}

TEST_CASE("tracking a single path") {
  const auto sys = PolySystem::from_equations({quadratic(1.0, -4.0)});
  TrackerConfig cfg;
  cfg.start_system = StartSystem::total_degree;
  const Homotopy h(sys, cfg);
  REQUIRE(h.path_count() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    const Endpoint e = h.track(h.start_point(i), i);
    CHECK(e.status == EndpointStatus::finite_nonsingular);
    CHECK(std::abs(std::abs(e.point(0)) - 2.0) < 1e-10);
    CHECK(e.residual <= 1e-9);
  }
}

TEST_CASE("diverging paths end at infinity") {
  // x^2 = 1, x y = 1: two finite solutions out of four total-degree paths.
  Polynomial f(2), g(2);
  f.add_quadratic(1.0, 0, 0);
  f.add_constant(-1.0);
  g.add_quadratic(1.0, 0, 1);
  g.add_constant(-1.0);
  const auto sys = PolySystem::from_equations({f, g});
  TrackerConfig cfg;
  cfg.start_system = StartSystem::total_degree;
  const SolveResult res = solve(sys, cfg);
  CHECK(res.path_count == 4);
  CHECK(res.raw_count == 2);
  std::size_t at_infinity = 0;
  for (const auto& e : res.endpoints) at_infinity += e.status == EndpointStatus::at_infinity;
  CHECK(at_infinity == 2);
}

TEST_CASE("dedup") {
  const std::vector<CVector> pts{vec({1.0}), vec({1.0 + 1e-9}), vec({5.0})};
  CHECK(dedup(pts, 1e-6).size() == 2);
  CHECK(dedup({}, 1e-6).empty());
  CHECK_THROWS_AS(dedup(pts, 0.0), Error);

  // The representative is the member with the smallest residual.
  const auto rep = dedup({vec({2.0}), vec({2.0 + 1e-8})}, 1e-6, {1e-3, 1e-12});
  REQUIRE(rep.size() == 1);
  CHECK(rep[0](0) == cplx(2.0 + 1e-8));

  // Output is sorted regardless of input order.
  const auto sorted = dedup({vec({3.0}), vec({cplx(1.0, 2.0)}), vec({cplx(1.0, -2.0)})}, 1e-6);
  REQUIRE(sorted.size() == 3);
  CHECK(sorted[0](0) == cplx(1.0, -2.0));
  CHECK(sorted[1](0) == cplx(1.0, 2.0));
  CHECK(sorted[2](0) == cplx(3.0));
}

TEST_CASE("start systems on the 3-prism") {
  const auto inst = sample_instance(graphs::three_prism(), 2, Model::euclidean, 21);
  TrackerConfig cfg;
  cfg.seed = 21;

  const auto lifted = euclidean_system(inst, true);
  const Homotopy product(lifted, cfg);
  CHECK(product.start_system() == StartSystem::linear_product);
  CHECK(product.path_count() == 64);
  const SolveResult a = solve(lifted, cfg);
  CHECK(a.raw_count == 48);

  cfg.start_system = StartSystem::total_degree;
  const auto plain = euclidean_system(inst);
  CHECK(Homotopy(plain, cfg).path_count() == 512);
  const SolveResult b = solve(plain, cfg);
  CHECK(b.raw_count == 48);
  CHECK(b.raw_count % 4 == 0);
  CHECK(sign_orbits_closed(plain, b.distinct_solutions, 1e-6));

  // The lifted solutions project onto the plain ones.
  std::vector<CVector> projected;
  for (const auto& x : a.distinct_solutions) projected.push_back(x.head(9));
  CHECK(same_points(dedup(projected, 1e-6), b.distinct_solutions, 1e-6));
}

TEST_CASE("spherical 3-prism has 64 solutions") {
  const auto sys = spherical_system(sample_instance(graphs::three_prism(), 2, Model::spherical, 8));
  TrackerConfig cfg;
  cfg.seed = 8;
  const SolveResult res = solve(sys, cfg);
  CHECK(res.raw_count == 64);
  CHECK(res.orbit_closed);
  for (const auto& x : res.distinct_solutions)
    CHECK(residual(sys, std::span<const cplx>(x.data(), x.size())) <= 1e-8);
}

TEST_CASE("solutions do not depend on gamma or threads") {
  const auto sys = build_system(sample_instance(graphs::k33(), 2, Model::euclidean, 2), true);
  TrackerConfig cfg;
  cfg.seed = 1;
  cfg.threads = 1;
  const SolveResult one = solve(sys, cfg);
  cfg.threads = 4;
  const SolveResult four = solve(sys, cfg);
  CHECK(one.raw_count == 32);
  REQUIRE(one.distinct_solutions.size() == four.distinct_solutions.size());
  for (std::size_t i = 0; i < one.distinct_solutions.size(); ++i)
    CHECK(one.distinct_solutions[i] == four.distinct_solutions[i]);
  std::ostringstream da, db;
  write_endpoint_dump(da, one);
  write_endpoint_dump(db, four);
  CHECK(da.str() == db.str());

  cfg.seed = 99;
  const SolveResult other = solve(sys, cfg);
  CHECK(other.config_used.gamma != one.config_used.gamma);
  CHECK(same_points(other.distinct_solutions, one.distinct_solutions, 1e-6));
}

TEST_CASE("path budget") {
  const auto sys = euclidean_system(sample_instance(graphs::three_prism(), 2, Model::euclidean, 1));
  TrackerConfig cfg;
  cfg.start_system = StartSystem::total_degree;
  cfg.max_variables = 8;  // 256 < 512 paths
  CHECK_THROWS_AS(Homotopy(sys, cfg), Error);
  try {
    solve(sys, cfg);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::capacity);
  }
}
