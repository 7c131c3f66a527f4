#include "rcount/graph.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "rcount/error.hpp"

namespace rcount {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::invalid_code: return "invalid-code";
    case Errc::invalid_graph: return "invalid-graph";
    case Errc::arity: return "arity";
    case Errc::invalid_clique: return "invalid-clique";
    case Errc::capacity: return "capacity";
    case Errc::precondition: return "precondition";
    case Errc::unreliable_result: return "unreliable-result";
    case Errc::domain: return "domain";
    case Errc::empty_summary: return "empty-summary";
    case Errc::parse: return "parse";
  }
  return "unknown";
}

Graph::Graph(int n, std::vector<Edge> edges) : n_(n) {
  if (n < 0) throw Error(Errc::invalid_graph, "negative vertex count");
  for (auto& e : edges) {
    if (e.u == e.v) throw Error(Errc::invalid_graph, "self-loop");
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u < 1 || e.v > n)
      throw Error(Errc::invalid_graph, "edge endpoint out of range");
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw Error(Errc::invalid_graph, "duplicate edge");
  edges_ = std::move(edges);
}

Graph Graph::complete(int n) {
  std::vector<Edge> es;
  for (Vertex u = 1; u <= n; ++u)
    for (Vertex v = u + 1; v <= n; ++v) es.push_back({u, v});
  return Graph(n, std::move(es));
}

Graph Graph::path(int n) {
  std::vector<Edge> es;
  for (Vertex v = 1; v < n; ++v) es.push_back({v, v + 1});
  return Graph(n, std::move(es));
}

Graph Graph::cycle(int n) {
  std::vector<Edge> es;
  for (Vertex v = 1; v < n; ++v) es.push_back({v, v + 1});
  if (n >= 3) es.push_back({1, n});
  return Graph(n, std::move(es));
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  if (u > v) std::swap(u, v);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
}

int Graph::degree(Vertex v) const {
  return static_cast<int>(std::count_if(
      edges_.begin(), edges_.end(),
      [v](const Edge& e) { return e.u == v || e.v == v; }));
}

int Graph::min_degree() const {
  if (n_ == 0) return 0;
  std::vector<int> deg(n_ + 1, 0);
  for (const auto& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return *std::min_element(deg.begin() + 1, deg.end());
}

std::vector<Vertex> Graph::neighbours(Vertex v) const {
  std::vector<Vertex> out;
  for (const auto& e : edges_) {
    if (e.u == v) out.push_back(e.v);
    if (e.v == v) out.push_back(e.u);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Graph::is_complete() const {
  return edges_.size() == static_cast<std::size_t>(binom2(n_));
}

bool Graph::is_connected() const {
  if (n_ <= 1) return true;
  std::vector<int> parent(n_ + 1);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  int components = n_;
  for (const auto& e : edges_) {
    int a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

Graph Graph::with_edges(std::vector<Edge> edges) const {
  Graph sub(n_, std::move(edges));
  for (const auto& e : sub.edges_)
    if (!has_edge(e.u, e.v))
      throw Error(Errc::invalid_graph, "edge not present in parent graph");
  return sub;
}

Graph Graph::relabelled(const std::vector<Vertex>& perm) const {
  if (perm.size() != static_cast<std::size_t>(n_))
    throw Error(Errc::arity, "permutation length must equal n");
  std::vector<Edge> es;
  es.reserve(edges_.size());
  for (const auto& e : edges_) es.push_back({perm[e.u - 1], perm[e.v - 1]});
  return Graph(n_, std::move(es));
}

// ---------------------------------------------------------------------------
// Codec

int binom2(int n) { return n * (n - 1) / 2; }

int min_vertices_for_bits(std::size_t bits) {
  int n = 1;
  while (static_cast<std::size_t>(binom2(n)) < bits) ++n;
  return n;
}

GraphCode GraphCode::parse(const std::string& decimal,
                           std::optional<int> n_hint) {
  GraphCode code;
  if (decimal.empty() ||
      !std::all_of(decimal.begin(), decimal.end(),
                   [](char c) { return c >= '0' && c <= '9'; }))
    throw Error(Errc::invalid_code, "graph code must be a decimal integer: '" +
                                        decimal + "'");
  code.value.set_str(decimal, 10);
  code.n_hint = n_hint;
  return code;
}

static std::size_t bit_length(const mpz_class& v) {
  return sgn(v) == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

Graph decode_graph(const GraphCode& code) {
  if (sgn(code.value) < 0)
    throw Error(Errc::invalid_code, "graph code must be nonnegative");
  const std::size_t bits = bit_length(code.value);
  int n = min_vertices_for_bits(bits);
  if (code.n_hint) {
    if (*code.n_hint < 1 ||
        static_cast<std::size_t>(binom2(*code.n_hint)) < bits)
      throw Error(Errc::invalid_code,
                  "n_hint too small for code " + code.str());
    n = *code.n_hint;
  }
  const int total = binom2(n);
  std::vector<Edge> es;
  int pos = 0;
  for (Vertex u = 1; u <= n; ++u) {
    for (Vertex v = u + 1; v <= n; ++v, ++pos) {
      const auto bit = static_cast<mp_bitcnt_t>(total - 1 - pos);
      if (mpz_tstbit(code.value.get_mpz_t(), bit)) es.push_back({u, v});
    }
  }
  return Graph(n, std::move(es));
}

GraphCode encode_graph(const Graph& g) {
  GraphCode code;
  code.value = 0;
  const int n = g.n();
  const int total = binom2(n);
  int pos = 0;
  for (Vertex u = 1; u <= n; ++u) {
    for (Vertex v = u + 1; v <= n; ++v, ++pos) {
      if (g.has_edge(u, v))
        mpz_setbit(code.value.get_mpz_t(),
                   static_cast<mp_bitcnt_t>(total - 1 - pos));
    }
  }
  code.n_hint = n;
  return code;
}

// ---------------------------------------------------------------------------
// Combinators

Graph cone(const Graph& g) {
  auto es = g.edges();
  const Vertex apex = g.n() + 1;
  for (Vertex v = 1; v <= g.n(); ++v) es.push_back({v, apex});
  return Graph(g.n() + 1, std::move(es));
}

Graph zero_extension(const Graph& g, const std::vector<Vertex>& neighbours,
                     int d) {
  if (static_cast<int>(neighbours.size()) != d)
    throw Error(Errc::arity, "0-extension needs exactly d neighbours");
  std::set<Vertex> distinct(neighbours.begin(), neighbours.end());
  if (distinct.size() != neighbours.size())
    throw Error(Errc::arity, "0-extension neighbours must be distinct");
  auto es = g.edges();
  const Vertex fresh = g.n() + 1;
  for (Vertex v : neighbours) {
    if (v < 1 || v > g.n())
      throw Error(Errc::arity, "0-extension neighbour out of range");
    es.push_back({v, fresh});
  }
  return Graph(g.n() + 1, std::move(es));
}

Graph glue_at_clique(const Graph& g, const std::vector<Vertex>& clique,
                     int copies) {
  if (copies < 1) throw Error(Errc::precondition, "copies must be >= 1");
  std::set<Vertex> s(clique.begin(), clique.end());
  if (s.size() != clique.size())
    throw Error(Errc::invalid_clique, "clique vertices must be distinct");
  for (Vertex a : s) {
    if (a < 1 || a > g.n())
      throw Error(Errc::invalid_clique, "clique vertex out of range");
    for (Vertex b : s)
      if (a < b && !g.has_edge(a, b))
        throw Error(Errc::invalid_clique, "vertex set is not a clique");
  }
  if (copies == 1) return g;

  // Shared vertices keep their labels; the rest of copy c gets a fresh block.
  std::vector<Vertex> others;
  for (Vertex v = 1; v <= g.n(); ++v)
    if (!s.count(v)) others.push_back(v);
  const int shared = static_cast<int>(s.size());
  const int block = static_cast<int>(others.size());
  std::set<Edge> es;
  for (int c = 0; c < copies; ++c) {
    std::vector<Vertex> map(g.n() + 1);
    for (Vertex v : s) map[v] = v;
    for (int i = 0; i < block; ++i) map[others[i]] = shared + c * block + i + 1;
    // Remap clique vertices to 1..|S| so copies occupy contiguous blocks.
    int idx = 1;
    for (Vertex v : s) map[v] = idx++;
    for (const auto& e : g.edges()) {
      Vertex a = map[e.u], b = map[e.v];
      es.insert({std::min(a, b), std::max(a, b)});
    }
  }
  return Graph(copies * block + shared,
               std::vector<Edge>(es.begin(), es.end()));
}

// ---------------------------------------------------------------------------
// Biconnected components (Hopcroft-Tarjan lowpoint with an edge stack)

std::vector<std::vector<Edge>> biconnected_components(const Graph& g) {
  const int n = g.n();
  std::vector<std::vector<Vertex>> adj(n + 1);
  for (const auto& e : g.edges()) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<int> disc(n + 1, 0), low(n + 1, 0);
  std::vector<Edge> stack;
  std::vector<std::vector<Edge>> out;
  int timer = 0;

  std::function<void(Vertex, Vertex)> dfs = [&](Vertex v, Vertex parent) {
    disc[v] = low[v] = ++timer;
    for (Vertex w : adj[v]) {
      if (w == parent) continue;
      if (!disc[w]) {
        stack.push_back({std::min(v, w), std::max(v, w)});
        dfs(w, v);
        low[v] = std::min(low[v], low[w]);
        if (low[w] >= disc[v]) {
          std::vector<Edge> comp;
          const Edge cut{std::min(v, w), std::max(v, w)};
          while (true) {
            Edge e = stack.back();
            stack.pop_back();
            comp.push_back(e);
            if (e == cut) break;
          }
          std::sort(comp.begin(), comp.end());
          out.push_back(std::move(comp));
        }
      } else if (disc[w] < disc[v]) {
        low[v] = std::min(low[v], disc[w]);
        stack.push_back({std::min(v, w), std::max(v, w)});
      }
    }
  };
  for (Vertex v = 1; v <= n; ++v)
    if (!disc[v]) dfs(v, 0);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Canonical form and isomorphism

namespace {

using AdjMask = std::array<std::uint16_t, kCanonicalMaxVertices>;

AdjMask adjacency_masks(const Graph& g) {
  AdjMask adj{};
  for (const auto& e : g.edges()) {
    adj[e.u - 1] |= static_cast<std::uint16_t>(1u << (e.v - 1));
    adj[e.v - 1] |= static_cast<std::uint16_t>(1u << (e.u - 1));
  }
  return adj;
}

}  // namespace

GraphCode canonical_form(const Graph& g) {
  const int n = g.n();
  if (n > kCanonicalMaxVertices)
    throw Error(Errc::capacity, "canonical_form supports at most 10 vertices");
  const AdjMask adj = adjacency_masks(g);
  const int total = binom2(n);

  // perm[i] = original vertex (0-based) placed at position i. Bits are
  // produced most-significant first, so a prefix larger than the best code
  // so far can be abandoned.
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t best = ~std::uint64_t{0};
  do {
    std::uint64_t code = 0;
    int pos = 0;
    bool pruned = false;
    for (int i = 0; i < n && !pruned; ++i) {
      for (int j = i + 1; j < n; ++j, ++pos) {
        if (adj[perm[i]] >> perm[j] & 1u)
          code |= std::uint64_t{1} << (total - 1 - pos);
      }
      // All remaining bits zero is the smallest possible completion.
      if (code > best) pruned = true;
    }
    if (!pruned && code < best) best = code;
  } while (std::next_permutation(perm.begin(), perm.end()));

  GraphCode out;
  out.value = mpz_class(std::to_string(best));
  out.n_hint = n;
  return out;
}

bool are_isomorphic(const Graph& a, const Graph& b) {
  if (a.n() != b.n() || a.edge_count() != b.edge_count()) return false;
  const int n = a.n();
  std::vector<std::vector<bool>> adj_a(n, std::vector<bool>(n)),
      adj_b(n, std::vector<bool>(n));
  std::vector<int> deg_a(n, 0), deg_b(n, 0);
  for (const auto& e : a.edges()) {
    adj_a[e.u - 1][e.v - 1] = adj_a[e.v - 1][e.u - 1] = true;
    ++deg_a[e.u - 1];
    ++deg_a[e.v - 1];
  }
  for (const auto& e : b.edges()) {
    adj_b[e.u - 1][e.v - 1] = adj_b[e.v - 1][e.u - 1] = true;
    ++deg_b[e.u - 1];
    ++deg_b[e.v - 1];
  }
  {
    auto sa = deg_a, sb = deg_b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }
  std::vector<int> map(n, -1);
  std::vector<bool> used(n, false);
  std::function<bool(int)> extend = [&](int i) {
    if (i == n) return true;
    for (int j = 0; j < n; ++j) {
      if (used[j] || deg_a[i] != deg_b[j]) continue;
      bool ok = true;
      for (int k = 0; k < i && ok; ++k)
        ok = adj_a[i][k] == adj_b[j][map[k]];
      if (!ok) continue;
      map[i] = j;
      used[j] = true;
      if (extend(i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  return extend(0);
}

// ---------------------------------------------------------------------------
// Text format

Graph read_graph_text(std::istream& in) {
  std::string line;
  int n = -1;
  std::vector<Edge> es;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    if (n < 0) {
      if (!(ls >> n)) continue;
      continue;
    }
    Vertex u, v;
    if (!(ls >> u)) continue;
    if (!(ls >> v)) throw Error(Errc::parse, "edge line needs two vertices");
    es.push_back({u, v});
  }
  if (n < 0) throw Error(Errc::parse, "missing vertex count line");
  return Graph(n, std::move(es));
}

void write_graph_text(std::ostream& out, const Graph& g) {
  out << g.n() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

namespace graphs {

Graph three_prism() {
  return Graph(6, {{1, 4}, {1, 5}, {1, 6}, {2, 3}, {2, 5}, {2, 6}, {3, 4},
                   {3, 6}, {4, 5}});
}

Graph k33() {
  std::vector<Edge> es;
  for (Vertex u = 1; u <= 3; ++u)
    for (Vertex v = 4; v <= 6; ++v) es.push_back({u, v});
  return Graph(6, std::move(es));
}

}  // namespace graphs

}  // namespace rcount
