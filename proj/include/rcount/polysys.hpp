#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rcount/graph.hpp"
#include "rcount/rigidity.hpp"

namespace rcount {

using cplx = std::complex<double>;

struct Term {
  cplx coef;
  std::vector<int> exponents;  // one entry per system variable
};

// Sparse polynomial over a fixed number of variables. Terms are kept with
// distinct exponent vectors and nonzero coefficients.
class Polynomial {
 public:
  explicit Polynomial(int variable_count = 0) : nvars_(variable_count) {}

  int variable_count() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }

  void add_term(cplx coef, std::vector<int> exponents);
  void add_constant(cplx c);
  // coef * x_i * x_j (i == j allowed), coef * x_i.
  void add_quadratic(cplx coef, int i, int j);
  void add_linear(cplx coef, int i);

  int degree() const;
  cplx evaluate(std::span<const cplx> x) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(cplx s) const;

 private:
  int nvars_;
  std::vector<Term> terms_;
};

enum class Model { euclidean, spherical };
const char* to_string(Model m);
Model parse_model(const std::string& s);

struct InstanceSpec {
  Graph graph;
  int d = 0;
  Model model = Model::euclidean;
  std::vector<Vertex> pins;     // (v_1, ..., v_d)
  std::vector<cplx> lambda;     // aligned with graph.edges()
  std::uint64_t seed = 0;
  RealisationReal source;       // d (euclidean) or d+1 (spherical) coords
};

// Coordinate `coord` (0-based) of vertex `vertex`, or its squared norm
// when coord == kSquaredNorm (lifted euclidean systems only).
struct VarRef {
  static constexpr int kSquaredNorm = -1;

  Vertex vertex;
  int coord;

  friend auto operator<=>(const VarRef&, const VarRef&) = default;
};

struct PinValue {
  VarRef var;
  cplx value;
};

struct PolySystem {
  std::vector<VarRef> variables;
  std::vector<Polynomial> equations;  // square core
  std::vector<Polynomial> surplus;    // filters only
  std::vector<PinValue> pins;
  // One entry per reflection axis: the variable indices negated by flipping
  // that coordinate on every vertex. Every solution set is closed under
  // these flips.
  std::vector<std::vector<int>> sign_flips;
  // Group label (the owning vertex) per variable; empty when unstructured.
  std::vector<int> groups;

  std::size_t variable_count() const { return variables.size(); }

  // Bare system with anonymous variables, for tests and ad-hoc solves.
  static PolySystem from_equations(std::vector<Polynomial> equations);
};

// Default pin sequence. For a minimally d-rigid graph: the sequence with the
// fewest linear-product start paths (first in label order among ties).
// Otherwise, and for large searches: v_1 of maximum degree, then vertices
// most adjacent to the pins already chosen (ties by degree, then label).
std::vector<Vertex> default_pins(const Graph& g, int d);

// Start paths of the vertex-grouped linear-product homotopy for the pinned
// system (spherical, or lifted euclidean) of g when every edge is a core
// edge: 2^(n-1) times the number of ways to hand each edge to one endpoint
// so that pin v_k receives k-1 edges, every other vertex d, and edges at
// v_1 go to their other endpoint. Equals 2^d times the realisation number
// on every benchmark graph.
std::size_t product_path_count(const Graph& g, int d,
                               const std::vector<Vertex>& pins);

// lambda_vw = 1/2 |p_v - p_w|^2 (euclidean) or 1 - p_v.p_w (spherical).
InstanceSpec instance_from_realisation(
    const Graph& g, int d, Model model, const RealisationReal& p,
    std::optional<std::vector<Vertex>> pins = std::nullopt);

InstanceSpec sample_instance(const Graph& g, int d, Model model,
                             std::uint64_t seed);

// With lift_norms, every vertex with a free coordinate gains a variable
// s_v = |p_v|^2 (equation s_v - |p_v|^2 = 0) and edge equations read
// s_u/2 + s_v/2 - p_u.p_v - lambda = 0, so that each equation has degree
// at most one in each vertex's variables apart from the norm equations.
PolySystem euclidean_system(const InstanceSpec& inst, bool lift_norms = false);
PolySystem spherical_system(const InstanceSpec& inst);
PolySystem build_system(const InstanceSpec& inst, bool lift_norms = false);

double residual(const PolySystem& sys, std::span<const cplx> point);
double core_residual(const PolySystem& sys, std::span<const cplx> point);
double surplus_residual(const PolySystem& sys, std::span<const cplx> point);

// Applies the flips selected by the bits of `mask` (bit j = axis j).
std::vector<cplx> apply_sign_flips(const PolySystem& sys,
                                   std::span<const cplx> point,
                                   unsigned mask);

// Audit text: header lines for seed/model/d/pins, then "u v re im" per edge.
void write_instance_audit(std::ostream& out, const InstanceSpec& inst);

}  // namespace rcount
