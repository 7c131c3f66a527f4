#include "rcount/polysys.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <random>
#include <tuple>

#include "rcount/error.hpp"

namespace rcount {

// ---------------------------------------------------------------------------
// Polynomial

void Polynomial::add_term(cplx coef, std::vector<int> exponents) {
  if (static_cast<int>(exponents.size()) != nvars_)
    throw Error(Errc::arity, "exponent vector length must equal variable count");
  auto it = std::find_if(terms_.begin(), terms_.end(), [&](const Term& t) {
    return t.exponents == exponents;
  });
  if (it == terms_.end()) {
    if (coef != cplx(0)) terms_.push_back({coef, std::move(exponents)});
    return;
  }
  it->coef += coef;
  if (it->coef == cplx(0)) terms_.erase(it);
}

void Polynomial::add_constant(cplx c) { add_term(c, std::vector<int>(nvars_, 0)); }

void Polynomial::add_quadratic(cplx coef, int i, int j) {
  std::vector<int> e(nvars_, 0);
  ++e.at(i);
  ++e.at(j);
  add_term(coef, std::move(e));
}

void Polynomial::add_linear(cplx coef, int i) {
  std::vector<int> e(nvars_, 0);
  ++e.at(i);
  add_term(coef, std::move(e));
}

int Polynomial::degree() const {
  int deg = 0;
  for (const auto& t : terms_) {
    int s = 0;
    for (int e : t.exponents) s += e;
    deg = std::max(deg, s);
  }
  return deg;
}

cplx Polynomial::evaluate(std::span<const cplx> x) const {
  if (static_cast<int>(x.size()) != nvars_)
    throw Error(Errc::arity, "point length must equal variable count");
  cplx sum = 0;
  for (const auto& t : terms_) {
    cplx m = t.coef;
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < t.exponents[i]; ++k) m *= x[i];
    sum += m;
  }
  return sum;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial out = *this;
  for (const auto& t : o.terms_) out.add_term(t.coef, t.exponents);
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial out(nvars_);
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      std::vector<int> e(nvars_);
      for (int i = 0; i < nvars_; ++i) e[i] = a.exponents[i] + b.exponents[i];
      out.add_term(a.coef * b.coef, std::move(e));
    }
  }
  return out;
}

Polynomial Polynomial::scaled(cplx s) const {
  Polynomial out(nvars_);
  for (const auto& t : terms_) out.add_term(t.coef * s, t.exponents);
  return out;
}

// ---------------------------------------------------------------------------
// Instances

const char* to_string(Model m) {
  return m == Model::euclidean ? "euclidean" : "spherical";
}

Model parse_model(const std::string& s) {
  if (s == "euclidean") return Model::euclidean;
  if (s == "spherical") return Model::spherical;
  throw Error(Errc::parse, "unknown model '" + s + "'");
}

PolySystem PolySystem::from_equations(std::vector<Polynomial> equations) {
  PolySystem sys;
  const int m = equations.empty() ? 0 : equations.front().variable_count();
  for (int i = 0; i < m; ++i) sys.variables.push_back({0, i});
  sys.equations = std::move(equations);
  return sys;
}

namespace {

std::vector<Vertex> greedy_pins(const Graph& g, int d) {
  std::vector<Vertex> pins;
  std::vector<bool> taken(g.n() + 1, false);
  for (int k = 0; k < d && k < g.n(); ++k) {
    Vertex best = 0;
    std::tuple<int, int> best_key{-1, -1};
    for (Vertex v = 1; v <= g.n(); ++v) {
      if (taken[v]) continue;
      int links = 0;
      for (Vertex p : pins) links += g.has_edge(p, v);
      std::tuple<int, int> key{links, g.degree(v)};
      if (key > best_key) {
        best_key = key;
        best = v;
      }
    }
    taken[best] = true;
    pins.push_back(best);
  }
  return pins;
}

// Upper bound on the ordered pin sequences searched by default_pins.
constexpr std::size_t kMaxPinSearch = 5000;

}  // namespace

std::size_t product_path_count(const Graph& g, int d,
                               const std::vector<Vertex>& pins) {
  if (static_cast<int>(pins.size()) != d || g.n() < d + 1)
    throw Error(Errc::arity, "need d pins and at least d+1 vertices");
  std::vector<int> quota(g.n() + 1, d);
  for (int k = 0; k < d; ++k) quota[pins[k]] = k;
  std::vector<Edge> free;
  for (const auto& e : g.edges()) {
    if (e.u == pins[0] || e.v == pins[0]) {
      if (--quota[e.u == pins[0] ? e.v : e.u] < 0) return 0;
    } else {
      free.push_back(e);
    }
  }
  int open = 0;
  for (Vertex v = 1; v <= g.n(); ++v) open += quota[v];
  if (open != static_cast<int>(free.size())) return 0;
  std::size_t count = 0;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == free.size()) {
      ++count;
      return;
    }
    for (Vertex w : {free[i].u, free[i].v}) {
      if (quota[w] == 0) continue;
      --quota[w];
      self(self, i + 1);
      ++quota[w];
    }
  };
  rec(rec, 0);
  return count << (g.n() - 1);
}

std::vector<Vertex> default_pins(const Graph& g, int d) {
  auto pins = greedy_pins(g, d);
  const int n = g.n();
  if (n < d + 1 || g.edge_count() != rigid_rank_target(n, d)) return pins;
  std::size_t sequences = 1;
  for (int k = 0; k < d; ++k) sequences *= static_cast<std::size_t>(n - k);
  if (sequences > kMaxPinSearch) return pins;

  std::size_t best = product_path_count(g, d, pins);
  std::vector<Vertex> cur;
  std::vector<bool> used(n + 1, false);
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(cur.size()) == d) {
      const std::size_t c = product_path_count(g, d, cur);
      if (c > 0 && (best == 0 || c < best)) {
        best = c;
        pins = cur;
      }
      return;
    }
    for (Vertex v = 1; v <= n; ++v) {
      if (used[v]) continue;
      used[v] = true;
      cur.push_back(v);
      self(self);
      cur.pop_back();
      used[v] = false;
    }
  };
  rec(rec);
  return pins;
}

InstanceSpec instance_from_realisation(const Graph& g, int d, Model model,
                                       const RealisationReal& p,
                                       std::optional<std::vector<Vertex>> pins) {
  const std::size_t width = model == Model::euclidean ? d : d + 1;
  if (p.coords.size() != static_cast<std::size_t>(g.n()))
    throw Error(Errc::arity, "realisation must cover every vertex");
  for (const auto& c : p.coords)
    if (c.size() != width)
      throw Error(Errc::arity, "realisation has wrong coordinate count");
  InstanceSpec inst;
  inst.graph = g;
  inst.d = d;
  inst.model = model;
  inst.pins = pins ? *pins : default_pins(g, d);
  if (static_cast<int>(inst.pins.size()) != std::min(d, g.n()))
    throw Error(Errc::arity, "pin list must have d vertices");
  {
    auto sorted = inst.pins;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(Errc::arity, "pin vertices must be distinct");
    for (Vertex v : sorted)
      if (v < 1 || v > g.n()) throw Error(Errc::arity, "pin out of range");
  }
  inst.source = p;
  for (const auto& e : g.edges()) {
    const auto& a = p.coords[e.u - 1];
    const auto& b = p.coords[e.v - 1];
    double val = 0;
    if (model == Model::euclidean) {
      for (std::size_t j = 0; j < width; ++j) val += (a[j] - b[j]) * (a[j] - b[j]);
      val *= 0.5;
    } else {
      double dot = 0;
      for (std::size_t j = 0; j < width; ++j) dot += a[j] * b[j];
      val = 1.0 - dot;
    }
    inst.lambda.emplace_back(val, 0.0);
  }
  return inst;
}

InstanceSpec sample_instance(const Graph& g, int d, Model model,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RealisationReal p;
  p.d = d;
  if (model == Model::euclidean) {
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::uniform_real_distribution<double> jitter(-1e-3, 1e-3);
    p.coords.assign(g.n(), std::vector<double>(d));
    for (auto& c : p.coords)
      for (auto& x : c) x = coord(rng) + jitter(rng);
  } else {
    std::normal_distribution<double> gauss(0.0, 1.0);
    p.coords.assign(g.n(), std::vector<double>(d + 1));
    for (auto& c : p.coords) {
      double norm = 0;
      do {
        norm = 0;
        for (auto& x : c) {
          x = gauss(rng);
          norm += x * x;
        }
      } while (norm < 1e-8);
      norm = std::sqrt(norm);
      for (auto& x : c) x /= norm;
    }
  }
  auto inst = instance_from_realisation(g, d, model, p);
  inst.seed = seed;
  return inst;
}

// ---------------------------------------------------------------------------
// Systems

namespace {

struct Layout {
  std::map<VarRef, int> var_index;
  std::map<VarRef, cplx> pinned;
  int width = 0;
  int nvars = 0;

  // |p_v|^2: the lifted variable when present, else expanded.
  Polynomial squared_norm(Vertex v) const {
    if (auto it = var_index.find({v, VarRef::kSquaredNorm}); it != var_index.end()) {
      Polynomial p(nvars);
      p.add_linear(1.0, it->second);
      return p;
    }
    Polynomial p(nvars);
    for (int j = 0; j < width; ++j) {
      Polynomial c = coord(v, j);
      p = p + c * c;
    }
    return p;
  }

  Polynomial coord(Vertex v, int j) const {
    Polynomial p(nvars);
    VarRef r{v, j};
    if (auto it = pinned.find(r); it != pinned.end()) {
      p.add_constant(it->second);
    } else {
      p.add_linear(1.0, var_index.at(r));
    }
    return p;
  }
};

Layout make_layout(const InstanceSpec& inst, PolySystem& sys,
                   bool lift_norms = false) {
  const auto& g = inst.graph;
  const int d = inst.d;
  Layout lay;
  lay.width = inst.model == Model::euclidean ? d : d + 1;
  // pin rank k (1-based) for pinned vertices
  std::map<Vertex, int> rank;
  for (std::size_t k = 0; k < inst.pins.size(); ++k)
    rank[inst.pins[k]] = static_cast<int>(k) + 1;
  for (Vertex v = 1; v <= g.n(); ++v) {
    for (int j = 1; j <= lay.width; ++j) {
      VarRef r{v, j - 1};
      auto it = rank.find(v);
      bool pinned = false;
      cplx value = 0;
      if (it != rank.end()) {
        const int k = it->second;
        if (inst.model == Model::euclidean) {
          pinned = j >= k;
        } else if (k == 1) {
          pinned = true;
          value = j == 1 ? 1.0 : 0.0;
        } else {
          pinned = j >= k + 1;
        }
      }
      if (pinned) {
        lay.pinned[r] = value;
        sys.pins.push_back({r, value});
      } else {
        lay.var_index[r] = static_cast<int>(sys.variables.size());
        sys.variables.push_back(r);
      }
    }
  }
  if (lift_norms) {
    std::vector<bool> has_free(g.n() + 1, false);
    for (const auto& r : sys.variables) has_free[r.vertex] = true;
    for (Vertex v = 1; v <= g.n(); ++v) {
      if (!has_free[v]) continue;
      VarRef r{v, VarRef::kSquaredNorm};
      lay.var_index[r] = static_cast<int>(sys.variables.size());
      sys.variables.push_back(r);
    }
  }
  lay.nvars = static_cast<int>(sys.variables.size());
  for (const auto& r : sys.variables) sys.groups.push_back(r.vertex);
  // Reflection axes: every euclidean coordinate; spherical coordinates 2..d+1.
  for (int j = inst.model == Model::euclidean ? 0 : 1; j < lay.width; ++j) {
    std::vector<int> flip;
    for (std::size_t i = 0; i < sys.variables.size(); ++i)
      if (sys.variables[i].coord == j) flip.push_back(static_cast<int>(i));
    sys.sign_flips.push_back(std::move(flip));
  }
  return lay;
}

void check_instance(const InstanceSpec& inst, Model expected) {
  if (inst.model != expected)
    throw Error(Errc::precondition, "instance model does not match system");
  if (inst.graph.n() < inst.d + 1)
    throw Error(Errc::precondition,
                "system needs at least d+1 vertices (use the small-graph path)");
  if (inst.lambda.size() != inst.graph.edge_count())
    throw Error(Errc::arity, "lambda must cover every edge");
}

// Splits edge indices into a square core and the surplus.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_edges(
    const InstanceSpec& inst) {
  const auto& g = inst.graph;
  const std::size_t target = rigid_rank_target(g.n(), inst.d);
  std::vector<std::size_t> core, surplus;
  if (g.edge_count() == target) {
    for (std::size_t i = 0; i < g.edge_count(); ++i) core.push_back(i);
    return {core, surplus};
  }
  if (g.edge_count() < target)
    throw Error(Errc::precondition, "graph has too few edges to be d-rigid");
  const auto split = independent_spanning_rigid_subgraph(g, inst.d, inst.seed);
  const auto& es = g.edges();
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (std::binary_search(split.core.begin(), split.core.end(), es[i]))
      core.push_back(i);
    else
      surplus.push_back(i);
  }
  return {core, surplus};
}

}  // namespace

PolySystem euclidean_system(const InstanceSpec& inst, bool lift_norms) {
  check_instance(inst, Model::euclidean);
  PolySystem sys;
  const Layout lay = make_layout(inst, sys, lift_norms);
  const auto& es = inst.graph.edges();
  auto edge_eq = [&](std::size_t i) {
    const auto& e = es[i];
    Polynomial eq(lay.nvars);
    if (lift_norms) {
      eq = (lay.squared_norm(e.u) + lay.squared_norm(e.v)).scaled(0.5);
      for (int j = 0; j < lay.width; ++j)
        eq = eq + (lay.coord(e.u, j) * lay.coord(e.v, j)).scaled(-1.0);
    } else {
      for (int j = 0; j < lay.width; ++j) {
        Polynomial diff = lay.coord(e.u, j) + lay.coord(e.v, j).scaled(-1.0);
        eq = eq + (diff * diff).scaled(0.5);
      }
    }
    eq.add_constant(-inst.lambda[i]);
    return eq;
  };
  auto [core, surplus] = split_edges(inst);
  for (auto i : core) sys.equations.push_back(edge_eq(i));
  for (auto i : surplus) sys.surplus.push_back(edge_eq(i));
  for (const auto& r : sys.variables) {
    if (r.coord != VarRef::kSquaredNorm) continue;
    Polynomial eq = lay.squared_norm(r.vertex);
    for (int j = 0; j < lay.width; ++j) {
      Polynomial c = lay.coord(r.vertex, j);
      eq = eq + (c * c).scaled(-1.0);
    }
    sys.equations.push_back(std::move(eq));
  }
  if (sys.equations.size() != sys.variables.size())
    throw Error(Errc::precondition, "euclidean core is not square");
  return sys;
}

PolySystem spherical_system(const InstanceSpec& inst) {
  check_instance(inst, Model::spherical);
  PolySystem sys;
  const Layout lay = make_layout(inst, sys);
  const auto& es = inst.graph.edges();
  for (Vertex v = 1; v <= inst.graph.n(); ++v) {
    if (v == inst.pins.front()) continue;
    Polynomial eq(lay.nvars);
    for (int j = 0; j < lay.width; ++j) {
      Polynomial c = lay.coord(v, j);
      eq = eq + c * c;
    }
    eq.add_constant(-1.0);
    sys.equations.push_back(std::move(eq));
  }
  auto edge_eq = [&](std::size_t i) {
    const auto& e = es[i];
    Polynomial eq(lay.nvars);
    eq.add_constant(1.0 - inst.lambda[i]);
    for (int j = 0; j < lay.width; ++j)
      eq = eq + (lay.coord(e.u, j) * lay.coord(e.v, j)).scaled(-1.0);
    return eq;
  };
  auto [core, surplus] = split_edges(inst);
  for (auto i : core) sys.equations.push_back(edge_eq(i));
  for (auto i : surplus) sys.surplus.push_back(edge_eq(i));
  if (sys.equations.size() != sys.variables.size())
    throw Error(Errc::precondition, "spherical core is not square");
  return sys;
}

PolySystem build_system(const InstanceSpec& inst, bool lift_norms) {
  return inst.model == Model::euclidean ? euclidean_system(inst, lift_norms)
                                        : spherical_system(inst);
}

namespace {

double max_abs(const std::vector<Polynomial>& eqs, std::span<const cplx> x) {
  double r = 0;
  for (const auto& p : eqs) r = std::max(r, std::abs(p.evaluate(x)));
  return r;
}

void check_point(const PolySystem& sys, std::span<const cplx> x) {
  if (x.size() != sys.variable_count())
    throw Error(Errc::arity, "point length must equal variable count");
}

}  // namespace

double residual(const PolySystem& sys, std::span<const cplx> point) {
  check_point(sys, point);
  return std::max(max_abs(sys.equations, point), max_abs(sys.surplus, point));
}

double core_residual(const PolySystem& sys, std::span<const cplx> point) {
  check_point(sys, point);
  return max_abs(sys.equations, point);
}

double surplus_residual(const PolySystem& sys, std::span<const cplx> point) {
  check_point(sys, point);
  return max_abs(sys.surplus, point);
}

std::vector<cplx> apply_sign_flips(const PolySystem& sys,
                                   std::span<const cplx> point,
                                   unsigned mask) {
  std::vector<cplx> out(point.begin(), point.end());
  for (std::size_t axis = 0; axis < sys.sign_flips.size(); ++axis)
    if (mask >> axis & 1u)
      for (int i : sys.sign_flips[axis]) out[i] = -out[i];
  return out;
}

void write_instance_audit(std::ostream& out, const InstanceSpec& inst) {
  out << "seed " << inst.seed << '\n'
      << "model " << to_string(inst.model) << '\n'
      << "d " << inst.d << '\n'
      << "pins";
  for (Vertex v : inst.pins) out << ' ' << v;
  out << '\n';
  const auto& es = inst.graph.edges();
  const auto old = out.precision(17);
  for (std::size_t i = 0; i < es.size(); ++i)
    out << es[i].u << ' ' << es[i].v << ' ' << inst.lambda[i].real() << ' '
        << inst.lambda[i].imag() << '\n';
  out.precision(old);
}

}  // namespace rcount
