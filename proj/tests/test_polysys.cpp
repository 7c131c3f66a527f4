#include <doctest.h>

#include <sstream>

#include "rcount/error.hpp"
#include "rcount/homotopy.hpp"
#include "rcount/polysys.hpp"

using namespace rcount;

namespace {

Graph from_code(const std::string& code) { return decode_graph(GraphCode::parse(code)); }

std::size_t euclidean_vars(int n, int d) { return d * n - d * (d + 1) / 2; }
std::size_t spherical_vars(int n, int d) { return (d + 1) * n - (d + 1) - d * (d - 1) / 2; }

}  // namespace

TEST_CASE("polynomial arithmetic") {
  Polynomial x(2), y(2);
  x.add_linear(1.0, 0);
  y.add_linear(1.0, 1);
  const Polynomial p = (x + y) * (x + y.scaled(-1.0));  // x^2 - y^2
  CHECK(p.degree() == 2);
  CHECK(p.terms().size() == 2);
  const std::vector<cplx> at{cplx(3, 0), cplx(2, 0)};
  CHECK(std::abs(p.evaluate(at) - cplx(5, 0)) < 1e-14);

  Polynomial z(1);
  z.add_constant(2.0);
  z.add_constant(-2.0);
  CHECK(z.terms().empty());
  CHECK_THROWS_AS(z.add_term(1.0, {1, 0}), Error);
}

TEST_CASE("instances from given realisations") {
  const InstanceSpec k2 =
      instance_from_realisation(Graph::complete(2), 1, Model::euclidean, {1, {{0.0}, {1.0}}});
  REQUIRE(k2.lambda.size() == 1);
  CHECK(std::abs(k2.lambda[0] - 0.5) < 1e-15);

  const double h = std::sqrt(3.0) / 2;
  const InstanceSpec tri = instance_from_realisation(
      Graph::complete(3), 2, Model::euclidean, {2, {{0, 0}, {1, 0}, {0.5, h}}});
  for (const cplx& l : tri.lambda) CHECK(std::abs(l - 0.5) < 1e-12);

  const InstanceSpec anti = instance_from_realisation(
      Graph::complete(2), 1, Model::spherical, {2, {{1, 0}, {-1, 0}}});
  CHECK(std::abs(anti.lambda[0] - 2.0) < 1e-15);
}

TEST_CASE("sampled instances are realisable") {
  for (Model m : {Model::euclidean, Model::spherical}) {
    const InstanceSpec inst = sample_instance(graphs::three_prism(), 2, m, 17);
    CHECK(inst.lambda.size() == 9);
    CHECK(inst.pins.size() == 2);
    CHECK(inst.source.coords.size() == 6);
    CHECK(inst.source.coords[0].size() == (m == Model::euclidean ? 2u : 3u));
    const InstanceSpec again = sample_instance(graphs::three_prism(), 2, m, 17);
    CHECK(again.lambda == inst.lambda);
  }
}

TEST_CASE("euclidean system shapes") {
  const auto prism = euclidean_system(sample_instance(graphs::three_prism(), 2, Model::euclidean, 1));
  CHECK(prism.variable_count() == 9);
  CHECK(prism.equations.size() == 9);
  CHECK(prism.surplus.empty());
  CHECK(prism.pins.size() == 3);
  CHECK(prism.sign_flips.size() == 2);

  const auto k4 = euclidean_system(sample_instance(Graph::complete(4), 2, Model::euclidean, 1));
  CHECK(k4.variable_count() == 5);
  CHECK(k4.equations.size() == 5);
  CHECK(k4.surplus.size() == 1);

  const InstanceSpec k2i =
      instance_from_realisation(Graph::complete(2), 1, Model::euclidean, {1, {{0.0}, {1.0}}});
  const auto k2 = euclidean_system(k2i);
  REQUIRE(k2.variable_count() == 1);
  for (double x : {1.0, -1.0}) {
    const std::vector<cplx> pt{x};
    CHECK(residual(k2, pt) <= 1e-12);
  }
  const std::vector<cplx> off{1.0 + 1e-6};
  CHECK(residual(k2, off) == doctest::Approx(1e-6).epsilon(1e-3));
  const std::vector<cplx> wrong{1.0, 2.0};
  CHECK_THROWS_AS(residual(k2, wrong), Error);
}

TEST_CASE("spherical system shapes") {
  const auto prism = spherical_system(sample_instance(graphs::three_prism(), 2, Model::spherical, 1));
  CHECK(prism.variable_count() == 14);
  CHECK(prism.equations.size() == 14);
  CHECK(prism.surplus.empty());

  const auto k3 = spherical_system(sample_instance(Graph::complete(3), 1, Model::spherical, 1));
  CHECK(k3.variable_count() == 4);
  CHECK(k3.equations.size() == 4);
  CHECK(k3.surplus.size() == 1);

  const auto k4 = spherical_system(sample_instance(Graph::complete(4), 3, Model::spherical, 1));
  // 4 * 4 - 4 - 3 pinned coordinates; 3 sphere and 6 edge equations.
  CHECK(k4.variable_count() == 9);
  CHECK(k4.surplus.empty());

  // The unit-sphere equation of a free vertex evaluates to -1 at the origin.
  const std::vector<cplx> origin(prism.variable_count(), 0.0);
  CHECK(std::abs(prism.equations.front().evaluate(origin) + 1.0) < 1e-15);
}

TEST_CASE("square cores and pin counting") {
  const std::vector<Graph> graphs{graphs::three_prism(), graphs::k33(), Graph::complete(4),
                                  Graph::complete(5), from_code("1256267"), cone(graphs::three_prism())};
  for (const Graph& g : graphs)
    for (int d = 1; d <= 3; ++d) {
      if (g.n() < d + 1 || !is_d_rigid(g, d)) continue;
      CAPTURE(encode_graph(g).str());
      CAPTURE(d);
      const auto e = euclidean_system(sample_instance(g, d, Model::euclidean, 5));
      CHECK(e.variable_count() == euclidean_vars(g.n(), d));
      CHECK(e.equations.size() == e.variable_count());
      CHECK(e.equations.size() + e.surplus.size() == g.edge_count());
      for (const auto& p : e.equations) CHECK(p.degree() == 2);

      const auto s = spherical_system(sample_instance(g, d, Model::spherical, 5));
      CHECK(s.variable_count() == spherical_vars(g.n(), d));
      CHECK(s.equations.size() == s.variable_count());
    }
}

TEST_CASE("lifted euclidean system") {
  const InstanceSpec inst = sample_instance(graphs::three_prism(), 2, Model::euclidean, 3);
  const auto lifted = euclidean_system(inst, true);
  // One squared-norm variable per vertex with a free coordinate (all but v_1).
  CHECK(lifted.variable_count() == 9 + 5);
  CHECK(lifted.equations.size() == lifted.variable_count());
  CHECK(lifted.groups.size() == lifted.variable_count());
  CHECK(product_path_count(inst.graph, 2, inst.pins) == 64);
  for (const auto& v : lifted.variables)
    if (v.coord == VarRef::kSquaredNorm) CHECK(v.vertex != inst.pins.front());
}

TEST_CASE("pins") {
  const Graph prism = graphs::three_prism();
  const auto pins = default_pins(prism, 2);
  REQUIRE(pins.size() == 2);
  CHECK(prism.has_edge(pins[0], pins[1]));
  CHECK(product_path_count(prism, 2, pins) == 64);
  // Non-rigid graphs keep the greedy rule.
  CHECK(default_pins(Graph::cycle(5), 2).size() == 2);
  CHECK_THROWS_AS(euclidean_system(instance_from_realisation(
                      Graph::complete(2), 2, Model::euclidean, {2, {{0, 0}, {1, 0}}})),
                  Error);
}

TEST_CASE("sign flips map solutions to solutions") {
  // Solve the 3-prism and check every flip image of every solution.
  for (Model m : {Model::euclidean, Model::spherical}) {
    const auto sys = build_system(sample_instance(graphs::three_prism(), 2, m, 9));
    TrackerConfig cfg;
    cfg.seed = 9;
    const SolveResult res = solve(sys, cfg);
    REQUIRE(!res.distinct_solutions.empty());
    for (const auto& x : res.distinct_solutions)
      for (unsigned mask = 0; mask < 4; ++mask) {
        const auto y = apply_sign_flips(sys, std::span<const cplx>(x.data(), x.size()), mask);
        CHECK(residual(sys, y) <= 1e-8);
      }
  }
}

TEST_CASE("instance audit") {
  std::ostringstream out;
  write_instance_audit(out, sample_instance(Graph::complete(3), 2, Model::euclidean, 4));
  const std::string text = out.str();
  CHECK(text.find("seed") != std::string::npos);
  CHECK(text.find("1 2 ") != std::string::npos);
  CHECK(text.find("2 3 ") != std::string::npos);
}
