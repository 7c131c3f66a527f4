#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rcount/polysys.hpp"

namespace rcount {

using CVector = Eigen::VectorXcd;

// Start system family. The linear-product start uses the variable groups
// declared by the system (one group per vertex) and has one path per
// solution of a generic product of linear forms; systems without groups,
// or with equations of group-degree sum above 2, fall back to total degree.
enum class StartSystem { total_degree, linear_product };
const char* to_string(StartSystem s);

struct TrackerConfig {
  // Drawn from `seed` when unset; always normalized to |gamma| = 1.
  std::optional<cplx> gamma;
  double initial_step = 0.05;
  double max_step = 0.1;
  double min_step = 1e-8;
  double newton_tol = 1e-10;
  int max_corrector_iters = 5;
  // Largest first corrector update accepted after a predictor step,
  // relative to the projective point. Keeps paths in their own basin.
  double max_first_correction = 1e-3;
  double infinity_threshold = 1e5;
  double dedup_tol = 1e-6;
  int endpoint_refine_iters = 20;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency
  // Path budget: at most 2^max_variables paths.
  int max_variables = 24;
  StartSystem start_system = StartSystem::linear_product;
};

enum class EndpointStatus { finite_nonsingular, at_infinity, singular, tracking_failed };
const char* to_string(EndpointStatus s);

struct Endpoint {
  CVector point;  // affine coordinates (empty when no finite estimate)
  EndpointStatus status = EndpointStatus::tracking_failed;
  // max_i |F_i(x)| / max(1, |x|_inf)^deg_i after refinement
  double residual = 0;
  // Row-equilibrated condition of the Jacobian with columns scaled by
  // max(1, |x_k|)
  double jacobian_condition = 0;
  std::size_t path_index = 0;
  double t_reached = 1;
  int steps = 0;
  int rejections = 0;
};

struct SolveResult {
  std::vector<CVector> distinct_solutions;
  std::size_t raw_count = 0;
  std::vector<Endpoint> endpoints;
  std::size_t paths_failed = 0;
  std::size_t path_count = 0;
  int gamma_retries = 0;
  bool duplicate_endpoints = false;
  bool orbit_closed = true;
  TrackerConfig config_used;
};

// Homotopy H(x,t) = gamma*t*G(x) + (1-t)*F(x), tracked on a random affine
// chart of projective space so that diverging paths stay bounded. G is
// either the total-degree start G_i = x_i^{deg F_i} - c_i or a product of
// random linear forms, one per group-degree of F_i.
class Homotopy {
 public:
  Homotopy(const PolySystem& target, const TrackerConfig& cfg);

  std::size_t variable_count() const { return nvars_; }
  std::size_t path_count() const { return path_count_; }
  const std::vector<int>& degrees() const { return degrees_; }
  StartSystem start_system() const { return start_kind_; }
  cplx gamma() const { return gamma_; }

  // Affine start solution number `index` (mixed radix over the degrees).
  CVector start_point(std::size_t index) const;
  Endpoint track(const CVector& start, std::size_t index = 0) const;

  // Newton refinement on the target system at t = 0 (affine).
  struct Refined {
    CVector point;
    double residual;
    double condition;
    bool converged;
  };
  Refined refine(const CVector& x, int iters) const;

 private:
  struct Monomial {
    cplx coef;
    int a;  // homogeneous variable index, 0 = homogenizing coordinate
    int b;  // -1 for degree-one monomials
  };
  using Equation = std::vector<Monomial>;

  std::size_t nvars_;
  std::vector<int> degrees_;
  std::vector<Equation> target_;
  std::vector<Equation> start_;
  std::vector<cplx> start_consts_;
  // Linear-product start: factors_[i] lists the linear forms of G_i as
  // (group, coefficients over the group's variables then the constant);
  // choices_ holds one chosen factor per equation for every path.
  struct Factor {
    int group;
    std::vector<cplx> coef;
  };
  StartSystem start_kind_ = StartSystem::total_degree;
  std::vector<std::vector<int>> group_vars_;
  std::vector<std::vector<Factor>> factors_;
  std::vector<std::uint8_t> choices_;
  std::vector<cplx> patch_;
  cplx gamma_;
  std::size_t path_count_;
  TrackerConfig cfg_;

  friend struct TrackerWorkspace;
};

Endpoint track_path(const CVector& start_point, const PolySystem& sys,
                    const TrackerConfig& cfg);

// Greedy clustering at relative distance <= tol. The representative is the
// member with smallest residual; output sorted lexicographically by
// (re, im) of each coordinate.
std::vector<CVector> dedup(const std::vector<CVector>& points, double tol,
                           const std::vector<double>& residuals = {});

SolveResult solve(const PolySystem& sys, const TrackerConfig& cfg);

// True when every image of every solution under the sign flips is again a
// solution and each orbit has 2^axes distinct members.
bool sign_orbits_closed(const PolySystem& sys,
                        const std::vector<CVector>& solutions, double tol);

// "status residual condition re im re im ..." per endpoint.
void write_endpoint_dump(std::ostream& out, const SolveResult& res);

}  // namespace rcount
