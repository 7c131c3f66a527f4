#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "rcount/exact_rank.hpp"
#include "rcount/graph.hpp"

namespace rcount {

// Vertex v's coordinates live at coords[v - 1].
template <typename Scalar>
struct Realisation {
  int d = 0;
  std::vector<std::vector<Scalar>> coords;
};

using RealisationReal = Realisation<double>;
using RealisationExact = Realisation<mpq_class>;

enum class RankMode { exact, floating };

struct RankReport {
  std::size_t rank = 0;
  std::size_t target_rigid_rank = 0;
  int trials = 0;
  int d = 0;
};

// d*n - C(d+1,2) for n >= d+1, C(n,2) otherwise.
std::size_t rigid_rank_target(int n, int d);

Eigen::MatrixXd rigidity_matrix(const Graph& g, const RealisationReal& p);
QMatrix rigidity_matrix(const Graph& g, const RealisationExact& p);

// Integer coordinates uniform in [-10^6, 10^6].
RealisationExact random_integer_realisation(int n, int d, std::uint64_t seed);

RankReport generic_rank(const Graph& g, int d, int trials = 3,
                        std::uint64_t seed = 1,
                        RankMode mode = RankMode::exact);

bool is_d_rigid(const Graph& g, int d, std::uint64_t seed = 1);
bool is_d_independent(const Graph& g, int d, std::uint64_t seed = 1);
bool is_minimally_d_rigid(const Graph& g, int d, std::uint64_t seed = 1);

struct EdgeSplit {
  std::vector<Edge> core;     // d-independent, spanning rigid
  std::vector<Edge> surplus;  // remaining edges
};

// Greedy in edge order: keep an edge when it raises the generic rank.
EdgeSplit independent_spanning_rigid_subgraph(const Graph& g, int d,
                                              std::uint64_t seed = 1);

// Rank of the differential of the spherical edge map at q, restricted to
// the tangent space of the product of unit spheres. q has d+1 coordinates
// per vertex and every q_v must lie on the unit sphere.
std::size_t spherical_differential_rank(const Graph& g,
                                        const RealisationExact& q);

enum class Sparsity { tight, sparse_not_tight, not_sparse };
const char* to_string(Sparsity s);

// (2,3) pebble game.
Sparsity pebble_game_2_3(const Graph& g);

inline constexpr int kEnumerateMaxVertices = 7;

// Isomorphism classes of (2,3)-tight graphs on n vertices with minimum
// degree >= min_degree, as canonical codes in increasing order.
std::vector<GraphCode> enumerate_min_rigid(int n, int min_degree = 0);

}  // namespace rcount
