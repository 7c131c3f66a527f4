#include "rcount/rigidity.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>

#include "rcount/error.hpp"

namespace rcount {

std::size_t rigid_rank_target(int n, int d) {
  if (n >= d + 1) return static_cast<std::size_t>(d * n - d * (d + 1) / 2);
  return static_cast<std::size_t>(binom2(n));
}

namespace {

template <typename Scalar>
void check_realisation(const Graph& g, const Realisation<Scalar>& p,
                       std::size_t width) {
  if (p.coords.size() != static_cast<std::size_t>(g.n()))
    throw Error(Errc::arity, "realisation must cover every vertex");
  for (const auto& c : p.coords)
    if (c.size() != width)
      throw Error(Errc::arity, "realisation has wrong coordinate count");
}

}  // namespace

Eigen::MatrixXd rigidity_matrix(const Graph& g, const RealisationReal& p) {
  check_realisation(g, p, static_cast<std::size_t>(p.d));
  const int d = p.d;
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(g.edge_count()), d * g.n());
  Eigen::Index row = 0;
  for (const auto& e : g.edges()) {
    for (int j = 0; j < d; ++j) {
      const double diff = p.coords[e.u - 1][j] - p.coords[e.v - 1][j];
      r(row, (e.u - 1) * d + j) = diff;
      r(row, (e.v - 1) * d + j) = -diff;
    }
    ++row;
  }
  return r;
}

QMatrix rigidity_matrix(const Graph& g, const RealisationExact& p) {
  check_realisation(g, p, static_cast<std::size_t>(p.d));
  const int d = p.d;
  QMatrix r(g.edge_count(), std::vector<mpq_class>(d * g.n(), 0));
  std::size_t row = 0;
  for (const auto& e : g.edges()) {
    for (int j = 0; j < d; ++j) {
      mpq_class diff = p.coords[e.u - 1][j] - p.coords[e.v - 1][j];
      r[row][(e.u - 1) * d + j] = diff;
      r[row][(e.v - 1) * d + j] = -diff;
    }
    ++row;
  }
  return r;
}

RealisationExact random_integer_realisation(int n, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coord(-1000000, 1000000);
  RealisationExact p;
  p.d = d;
  p.coords.assign(n, std::vector<mpq_class>(d));
  for (auto& c : p.coords)
    for (auto& x : c) x = coord(rng);
  return p;
}

namespace {

std::size_t float_rank(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  const double cut = 1e-9 * s(0);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

RealisationReal to_real(const RealisationExact& p) {
  RealisationReal out;
  out.d = p.d;
  for (const auto& c : p.coords) {
    std::vector<double> row;
    for (const auto& x : c) row.push_back(x.get_d());
    out.coords.push_back(std::move(row));
  }
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RankReport generic_rank(const Graph& g, int d, int trials, std::uint64_t seed,
                        RankMode mode) {
  if (trials < 1) throw Error(Errc::precondition, "trials must be >= 1");
  RankReport rep;
  rep.d = d;
  rep.target_rigid_rank = rigid_rank_target(g.n(), d);
  const std::size_t ceiling = std::min(g.edge_count(), rep.target_rigid_rank);
  for (int t = 0; t < trials; ++t) {
    ++rep.trials;
    auto p = random_integer_realisation(g.n(), d, mix_seed(seed, t));
    const std::size_t r = mode == RankMode::exact
                              ? exact_rank(rigidity_matrix(g, p))
                              : float_rank(rigidity_matrix(g, to_real(p)));
    rep.rank = std::max(rep.rank, r);
    if (rep.rank >= ceiling) break;
  }
  return rep;
}

bool is_d_rigid(const Graph& g, int d, std::uint64_t seed) {
  if (g.n() <= d) return g.is_complete();
  auto rep = generic_rank(g, d, 3, seed);
  return rep.rank == rep.target_rigid_rank;
}

bool is_d_independent(const Graph& g, int d, std::uint64_t seed) {
  return generic_rank(g, d, 3, seed).rank == g.edge_count();
}

bool is_minimally_d_rigid(const Graph& g, int d, std::uint64_t seed) {
  return is_d_rigid(g, d, seed) && is_d_independent(g, d, seed);
}

EdgeSplit independent_spanning_rigid_subgraph(const Graph& g, int d,
                                              std::uint64_t seed) {
  if (!is_d_rigid(g, d, seed))
    throw Error(Errc::precondition,
                "independent_spanning_rigid_subgraph needs a d-rigid graph");
  // One generic sample is enough; a degenerate one would show up as a core
  // that is too small, which is checked below.
  auto p = random_integer_realisation(g.n(), d, mix_seed(seed, 99));
  const QMatrix full = rigidity_matrix(g, p);
  EdgeSplit split;
  QMatrix rows;
  std::size_t idx = 0;
  for (const auto& e : g.edges()) {
    rows.push_back(full[idx++]);
    if (exact_rank(rows) == rows.size()) {
      split.core.push_back(e);
    } else {
      rows.pop_back();
      split.surplus.push_back(e);
    }
  }
  if (split.core.size() != rigid_rank_target(g.n(), d))
    throw Error(Errc::unreliable_result,
                "non-generic sample while splitting edges");
  return split;
}

std::size_t spherical_differential_rank(const Graph& g,
                                        const RealisationExact& q) {
  const int d = q.d;
  const std::size_t width = static_cast<std::size_t>(d + 1);
  check_realisation(g, q, width);
  const int n = g.n();
  for (const auto& c : q.coords) {
    mpq_class norm = 0;
    for (const auto& x : c) norm += x * x;
    if (norm != 1)
      throw Error(Errc::precondition, "spherical realisation off the sphere");
  }
  // Rows: differentials of 1 - q_v.q_w for every edge, then q_v.q_v for every
  // vertex. The sphere rows are independent (disjoint blocks, q_v != 0) and
  // cut out the tangent space, so the restricted rank is rank - n.
  QMatrix m;
  for (const auto& e : g.edges()) {
    std::vector<mpq_class> row(width * n, 0);
    for (std::size_t j = 0; j < width; ++j) {
      row[(e.u - 1) * width + j] = -q.coords[e.v - 1][j];
      row[(e.v - 1) * width + j] = -q.coords[e.u - 1][j];
    }
    m.push_back(std::move(row));
  }
  for (int v = 1; v <= n; ++v) {
    std::vector<mpq_class> row(width * n, 0);
    for (std::size_t j = 0; j < width; ++j)
      row[(v - 1) * width + j] = q.coords[v - 1][j];
    m.push_back(std::move(row));
  }
  return exact_rank(m) - static_cast<std::size_t>(n);
}

const char* to_string(Sparsity s) {
  switch (s) {
    case Sparsity::tight: return "tight";
    case Sparsity::sparse_not_tight: return "sparse-not-tight";
    case Sparsity::not_sparse: return "not-sparse";
  }
  return "unknown";
}

Sparsity pebble_game_2_3(const Graph& g) {
  constexpr int k = 2;
  const int n = g.n();
  std::vector<int> pebbles(n + 1, k);
  std::vector<std::vector<Vertex>> out(n + 1);  // directed accepted edges
  std::vector<char> seen(n + 1);
  std::vector<Vertex> from(n + 1);

  // Move one pebble to `root` along a reversed directed path, never drawing
  // from `keep`.
  auto fetch = [&](Vertex root, Vertex keep) {
    std::fill(seen.begin(), seen.end(), 0);
    seen[root] = seen[keep] = 1;
    std::vector<Vertex> stack{root};
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      for (Vertex y : out[x]) {
        if (seen[y]) continue;
        seen[y] = 1;
        from[y] = x;
        if (pebbles[y] > 0) {
          --pebbles[y];
          ++pebbles[root];
          // Reverse the path y <- ... <- root.
          for (Vertex cur = y; cur != root;) {
            Vertex prev = from[cur];
            auto& edges = out[prev];
            edges.erase(std::find(edges.begin(), edges.end(), cur));
            out[cur].push_back(prev);
            cur = prev;
          }
          return true;
        }
        stack.push_back(y);
      }
    }
    return false;
  };

  bool rejected = false;
  for (const auto& e : g.edges()) {
    bool ok = true;
    while (ok && pebbles[e.u] < k) ok = fetch(e.u, e.v);
    while (ok && pebbles[e.v] < k) ok = fetch(e.v, e.u);
    // l + 1 = 4 pebbles on the endpoints means the edge is independent.
    if (!ok) {
      rejected = true;
      break;
    }
    --pebbles[e.u];
    out[e.u].push_back(e.v);
  }
  if (rejected) return Sparsity::not_sparse;
  const long target = n <= 1 ? 0 : 2L * n - 3;
  return static_cast<long>(g.edge_count()) == target
             ? Sparsity::tight
             : Sparsity::sparse_not_tight;
}

std::vector<GraphCode> enumerate_min_rigid(int n, int min_degree) {
  if (n > kEnumerateMaxVertices)
    throw Error(Errc::capacity, "enumerate_min_rigid supports n <= 7");
  if (n < 1) return {};
  const auto all = Graph::complete(n).edges();
  const int m = static_cast<int>(all.size());
  const int target = n == 1 ? 0 : 2 * n - 3;

  // Representatives bucketed by sorted degree sequence.
  std::map<std::vector<int>, std::vector<Graph>> classes;
  std::vector<int> choose(m, 0);
  std::fill(choose.end() - target, choose.end(), 1);
  do {
    std::vector<Edge> es;
    for (int i = 0; i < m; ++i)
      if (choose[i]) es.push_back(all[i]);
    Graph g(n, std::move(es));
    if (g.min_degree() < min_degree) continue;
    if (pebble_game_2_3(g) != Sparsity::tight) continue;
    std::vector<int> degs;
    for (Vertex v = 1; v <= n; ++v) degs.push_back(g.degree(v));
    std::sort(degs.begin(), degs.end());
    auto& bucket = classes[degs];
    if (std::none_of(bucket.begin(), bucket.end(),
                     [&](const Graph& h) { return are_isomorphic(g, h); }))
      bucket.push_back(std::move(g));
  } while (std::next_permutation(choose.begin(), choose.end()));

  std::vector<GraphCode> codes;
  for (const auto& [key, bucket] : classes)
    for (const auto& g : bucket) codes.push_back(canonical_form(g));
  std::sort(codes.begin(), codes.end(),
            [](const GraphCode& a, const GraphCode& b) {
              return a.value < b.value;
            });
  return codes;
}

}  // namespace rcount
