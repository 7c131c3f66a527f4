#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rcount/homotopy.hpp"
#include "rcount/polysys.hpp"

namespace rcount {

// Realisation number: a positive integer or infinity.
class CountValue {
 public:
  static CountValue finite(std::uint64_t k) { return CountValue(false, k); }
  static CountValue infinite() { return CountValue(true, 0); }

  bool is_finite() const { return !infinite_; }
  std::uint64_t value() const { return k_; }
  std::string str() const { return infinite_ ? "inf" : std::to_string(k_); }

  friend bool operator==(const CountValue&, const CountValue&) = default;

 private:
  CountValue(bool inf, std::uint64_t k) : infinite_(inf), k_(k) {}
  bool infinite_;
  std::uint64_t k_;
};

struct CountConfig {
  TrackerConfig tracker;
  int trials = 3;
  std::uint64_t seed = 1;
  // |surplus equation| / max(1, |x|^2) must stay below this.
  double surplus_tol = 1e-6;
};

struct CountResult {
  CountValue value = CountValue::infinite();
  Model model = Model::euclidean;
  int d = 0;
  std::size_t raw_count = 0;          // filtered fiber size, 0 on fast paths
  std::vector<std::size_t> trials;    // per-trial filtered fiber sizes
  std::size_t surplus_filtered = 0;   // removed by surplus equations (trial 0)
  std::string fast_path;              // empty when the solver ran
  bool unreliable = false;
  std::vector<std::string> flags;
  std::size_t paths_per_trial = 0;
  std::size_t paths_failed = 0;
  int gamma_retries = 0;
  double max_residual = 0;
  std::uint64_t seed = 0;
};

// Seed for trial `trial` of a count with base seed `seed`.
std::uint64_t trial_seed(std::uint64_t seed, int trial);

CountResult realisation_count(const Graph& g, int d, Model model,
                              const CountConfig& cfg = {});
// The solver path of realisation_count without its fast paths (c_1, small
// and non-rigid graphs). Requires a d-rigid graph with at least d+1
// vertices; used to cross-check the closed forms.
CountResult solver_count(const Graph& g, int d, Model model,
                         const CountConfig& cfg = {});

// 2^(k-1) for a connected graph with k biconnected components.
CountValue c1(const Graph& g);

// c*_d(G) = c_{d+1}(G*o); the same value for every further cone.
CountValue derived_count_cone(const Graph& g, int d, const CountResult& base);
CountValue derived_count_cone_chain(const CountValue& spherical_base,
                                    int cones);
CountValue derived_count_zero_ext(const CountValue& base);
CountValue derived_count_glue(const CountValue& base, int copies);

// Number of positions x in C^d with 1/2 |x - p_i|^2 = lambda_i for the d
// given anchor points: the fiber of a single 0-extension vertex.
std::size_t count_vertex_placements(const std::vector<std::vector<cplx>>& anchors,
                                    const std::vector<cplx>& lambda,
                                    const TrackerConfig& cfg = {});

enum class CheckStatus { pass, fail, skipped };
const char* to_string(CheckStatus s);

struct IdentityCheck {
  std::string name;
  CheckStatus status = CheckStatus::skipped;
  std::string detail;
};

struct IdentityReport {
  CountResult euclidean;
  CountResult spherical;
  std::vector<IdentityCheck> checks;

  bool all_passed() const;
};

// Computes c_d and c*_d of g and, for every system whose estimated path
// count is at most `max_paths`, the cone counts used by the cross-checks.
IdentityReport check_identities(const Graph& g, int d, std::size_t max_paths,
                                const CountConfig& cfg = {});

// Unknowns of the (unlifted) pinned system for a graph with n vertices.
int system_variable_count(int n, int d, Model model);

// Paths the solver would track for g (0 on the solver-free fast paths). For
// overdetermined graphs the linear-product count is only computed when the
// total-degree count exceeds `limit`; SIZE_MAX means "more than limit".
std::size_t estimated_path_count(const Graph& g, int d, Model model,
                                 StartSystem start,
                                 std::size_t limit = std::size_t{1} << 24);

}  // namespace rcount
