#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rcount {

using Vertex = int;  // 1-based label

struct Edge {
  Vertex u;
  Vertex v;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Finite simple graph on vertices 1..n. Edges are stored normalized
// (u < v) and sorted, so two graphs compare equal iff they have the same
// labelled edge set.
class Graph {
 public:
  Graph() = default;
  Graph(int n, std::vector<Edge> edges);

  static Graph complete(int n);
  static Graph path(int n);
  static Graph cycle(int n);

  int n() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_edge(Vertex u, Vertex v) const;
  int degree(Vertex v) const;
  int min_degree() const;
  std::vector<Vertex> neighbours(Vertex v) const;
  bool is_complete() const;
  bool is_connected() const;

  // Subgraph on the same vertex set with the given edges (must be a subset).
  Graph with_edges(std::vector<Edge> edges) const;
  Graph relabelled(const std::vector<Vertex>& perm) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

// Adjacency-matrix integer code: the strict upper triangle read row-wise
// as binary digits, most significant first.
struct GraphCode {
  mpz_class value;
  std::optional<int> n_hint;

  static GraphCode parse(const std::string& decimal,
                         std::optional<int> n_hint = std::nullopt);
  std::string str() const { return value.get_str(); }

  friend bool operator==(const GraphCode& a, const GraphCode& b) {
    return a.value == b.value;
  }
};

int binom2(int n);
// Smallest n with C(n,2) >= bits (n >= 1).
int min_vertices_for_bits(std::size_t bits);

Graph decode_graph(const GraphCode& code);
GraphCode encode_graph(const Graph& g);

Graph cone(const Graph& g);
Graph zero_extension(const Graph& g, const std::vector<Vertex>& neighbours,
                     int d);
Graph glue_at_clique(const Graph& g, const std::vector<Vertex>& clique,
                     int copies);

// Edge sets of the maximal biconnected subgraphs, each sorted, listed in
// order of their smallest edge.
std::vector<std::vector<Edge>> biconnected_components(const Graph& g);

inline constexpr int kCanonicalMaxVertices = 10;
GraphCode canonical_form(const Graph& g);
bool are_isomorphic(const Graph& a, const Graph& b);

// Plain text: first line n, then one "u v" line per edge.
Graph read_graph_text(std::istream& in);
void write_graph_text(std::ostream& out, const Graph& g);

namespace graphs {
Graph three_prism();  // code 7916
Graph k33();
}  // namespace graphs

}  // namespace rcount
