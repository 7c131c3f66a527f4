#include "rcount/homotopy.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

#include "rcount/error.hpp"

namespace rcount {

const char* to_string(EndpointStatus s) {
  switch (s) {
    case EndpointStatus::finite_nonsingular: return "finite-nonsingular";
    case EndpointStatus::at_infinity: return "at-infinity";
    case EndpointStatus::singular: return "singular";
    case EndpointStatus::tracking_failed: return "tracking-failed";
  }
  return "unknown";
}

namespace {

constexpr int kMaxDim = 40;
using WVec = Eigen::Matrix<cplx, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using WMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

// Paths that stall below this t are treated as endgame casualties (heading
// to infinity or to a singular point) rather than tracking failures.
constexpr double kEndgameT = 1e-3;
constexpr double kSingularCondition = 1e10;
// Relative Newton updates this small that no longer contract are rounding
// noise; ill-conditioned regular solutions cannot get below it.
constexpr double kNoiseFloor = 1e-8;
constexpr int kMaxStepsPerPath = 200000;

cplx unit_circle(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  return std::polar(1.0, angle(rng));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double inf_norm(const WVec& v) {
  double m = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v(i)));
  return m;
}

// In-place LU with partial pivoting on the leading n x n block.
bool lu_factor(WMat& a, int n, std::array<int, kMaxDim>& piv) {
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::norm(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::norm(a(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    piv[k] = p;
    if (best == 0.0) return false;
    if (p != k)
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
    const cplx inv = 1.0 / a(k, k);
    for (int i = k + 1; i < n; ++i) a(i, k) *= inv;
    for (int j = k + 1; j < n; ++j) {
      const cplx akj = a(k, j);
      if (akj == cplx(0)) continue;
      for (int i = k + 1; i < n; ++i) a(i, j) -= a(i, k) * akj;
    }
  }
  return true;
}

WVec lu_solve(const WMat& a, int n, const std::array<int, kMaxDim>& piv,
              WVec b) {
  for (int k = 0; k < n; ++k)
    if (piv[k] != k) std::swap(b(k), b(piv[k]));
  for (int j = 0; j < n; ++j) {
    const cplx bj = b(j);
    for (int i = j + 1; i < n; ++i) b(i) -= a(i, j) * bj;
  }
  for (int j = n - 1; j >= 0; --j) {
    b(j) /= a(j, j);
    const cplx bj = b(j);
    for (int i = 0; i < j; ++i) b(i) -= a(i, j) * bj;
  }
  return b;
}

}  // namespace

const char* to_string(StartSystem s) {
  switch (s) {
    case StartSystem::total_degree: return "total-degree";
    case StartSystem::linear_product: return "linear-product";
  }
  return "unknown";
}

Homotopy::Homotopy(const PolySystem& target, const TrackerConfig& cfg)
    : nvars_(target.variable_count()), cfg_(cfg) {
  if (target.equations.size() != nvars_)
    throw Error(Errc::precondition, "homotopy needs a square system");
  if (static_cast<int>(nvars_) + 1 > kMaxDim)
    throw Error(Errc::capacity, "system too large for the tracker workspace");
  const std::size_t budget = std::size_t{1}
                             << std::clamp(cfg.max_variables, 0, 62);

  std::mt19937_64 rng(cfg.seed);
  gamma_ = cfg.gamma ? *cfg.gamma / std::abs(*cfg.gamma) : unit_circle(rng);

  // Group structure: per equation, the groups of its linear factors.
  std::vector<std::vector<int>> eq_groups(nvars_);
  bool product = cfg.start_system == StartSystem::linear_product &&
                 target.groups.size() == nvars_ && nvars_ > 0;
  if (product) {
    std::map<int, int> dense;
    std::vector<int> group_of(nvars_);
    for (std::size_t i = 0; i < nvars_; ++i) {
      auto [it, fresh] = dense.emplace(target.groups[i], static_cast<int>(dense.size()));
      if (fresh) group_vars_.emplace_back();
      group_of[i] = it->second;
      group_vars_[it->second].push_back(static_cast<int>(i));
    }
    for (std::size_t e = 0; e < nvars_ && product; ++e) {
      std::vector<int> deg(group_vars_.size(), 0);
      for (const auto& term : target.equations[e].terms()) {
        std::vector<int> local(group_vars_.size(), 0);
        for (std::size_t i = 0; i < nvars_; ++i) local[group_of[i]] += term.exponents[i];
        for (std::size_t g = 0; g < deg.size(); ++g) deg[g] = std::max(deg[g], local[g]);
      }
      for (std::size_t g = 0; g < deg.size(); ++g)
        for (int k = 0; k < deg[g]; ++k) eq_groups[e].push_back(static_cast<int>(g));
      if (eq_groups[e].empty() || eq_groups[e].size() > 2) product = false;
    }
    if (!product) group_vars_.clear();
  }

  for (std::size_t e = 0; e < nvars_; ++e) {
    const auto& poly = target.equations[e];
    const int deg = poly.degree();
    if (deg < 1 || deg > 2)
      throw Error(Errc::precondition, "equations must have degree 1 or 2");
    // Homogenize to the start degree, which may exceed deg F_e.
    const int hdeg = product ? static_cast<int>(eq_groups[e].size()) : deg;
    degrees_.push_back(hdeg);
    Equation eq;
    for (const auto& term : poly.terms()) {
      std::vector<int> factors;
      for (std::size_t i = 0; i < nvars_; ++i)
        for (int k = 0; k < term.exponents[i]; ++k)
          factors.push_back(static_cast<int>(i) + 1);
      while (static_cast<int>(factors.size()) < hdeg) factors.push_back(0);
      eq.push_back({term.coef, factors[0], hdeg == 2 ? factors[1] : -1});
    }
    target_.push_back(std::move(eq));
  }

  if (product) {
    start_kind_ = StartSystem::linear_product;
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_cplx = [&] { return cplx(gauss(rng), gauss(rng)); };
    for (std::size_t e = 0; e < nvars_; ++e) {
      std::vector<Factor> fs;
      for (int g : eq_groups[e]) {
        Factor f{g, {}};
        for (std::size_t k = 0; k <= group_vars_[g].size(); ++k)
          f.coef.push_back(random_cplx());
        fs.push_back(std::move(f));
      }
      // Expand the product of homogenized forms into monomials.
      auto terms = [&](const Factor& f) {
        std::vector<std::pair<int, cplx>> t;
        const auto& vars = group_vars_[f.group];
        for (std::size_t k = 0; k < vars.size(); ++k)
          t.emplace_back(vars[k] + 1, f.coef[k]);
        t.emplace_back(0, f.coef.back());
        return t;
      };
      Equation eq;
      if (fs.size() == 1) {
        for (auto [a, c] : terms(fs[0])) eq.push_back({c, a, -1});
      } else {
        std::map<std::pair<int, int>, cplx> merged;
        for (auto [a, ca] : terms(fs[0]))
          for (auto [b, cb] : terms(fs[1]))
            merged[{std::min(a, b), std::max(a, b)}] += ca * cb;
        for (const auto& [ab, c] : merged) eq.push_back({c, ab.first, ab.second});
      }
      start_.push_back(std::move(eq));
      factors_.push_back(std::move(fs));
    }

    // Depth-first enumeration of factor choices that give every group
    // exactly as many linear equations as it has variables.
    const std::size_t ngroups = group_vars_.size();
    std::vector<std::vector<int>> supply(nvars_ + 1, std::vector<int>(ngroups, 0));
    for (std::size_t e = nvars_; e-- > 0;) {
      supply[e] = supply[e + 1];
      std::vector<bool> seen(ngroups, false);
      for (const auto& f : factors_[e])
        if (!seen[f.group]) {
          seen[f.group] = true;
          ++supply[e][f.group];
        }
    }
    std::vector<int> quota(ngroups);
    for (std::size_t g = 0; g < ngroups; ++g)
      quota[g] = static_cast<int>(group_vars_[g].size());
    std::vector<std::uint8_t> cur(nvars_);
    std::size_t count = 0;
    auto feasible = [&](std::size_t e) {
      for (std::size_t g = 0; g < ngroups; ++g)
        if (quota[g] > supply[e][g]) return false;
      return true;
    };
    auto rec = [&](auto&& self, std::size_t e) -> void {
      if (e == nvars_) {
        if (++count > budget)
          throw Error(Errc::capacity, "path budget exceeded: more than " +
                                          std::to_string(budget) + " paths");
        choices_.insert(choices_.end(), cur.begin(), cur.end());
        return;
      }
      for (std::size_t k = 0; k < factors_[e].size(); ++k) {
        const int g = factors_[e][k].group;
        if (quota[g] == 0) continue;
        --quota[g];
        cur[e] = static_cast<std::uint8_t>(k);
        if (feasible(e + 1)) self(self, e + 1);
        ++quota[g];
      }
    };
    if (feasible(0)) rec(rec, 0);
    path_count_ = count;
  } else {
    path_count_ = 1;
    for (int deg : degrees_) {
      path_count_ *= static_cast<std::size_t>(deg);
      if (path_count_ > budget)
        throw Error(Errc::capacity, "path budget exceeded: more than " +
                                        std::to_string(budget) + " paths");
    }
    for (std::size_t i = 0; i < nvars_; ++i) {
      const cplx c = unit_circle(rng);
      start_consts_.push_back(c);
      const int xi = static_cast<int>(i) + 1;
      if (degrees_[i] == 2)
        start_.push_back({{1.0, xi, xi}, {-c, 0, 0}});
      else
        start_.push_back({{1.0, xi, -1}, {-c, 0, -1}});
    }
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i <= nvars_; ++i)
    patch_.emplace_back(gauss(rng), gauss(rng));
}

CVector Homotopy::start_point(std::size_t index) const {
  CVector x(static_cast<Eigen::Index>(nvars_));
  if (start_kind_ == StartSystem::linear_product) {
    const std::uint8_t* choice = choices_.data() + index * nvars_;
    for (std::size_t g = 0; g < group_vars_.size(); ++g) {
      const auto k = static_cast<Eigen::Index>(group_vars_[g].size());
      Eigen::MatrixXcd a(k, k);
      Eigen::VectorXcd b(k);
      Eigen::Index row = 0;
      for (std::size_t e = 0; e < nvars_; ++e) {
        const Factor& f = factors_[e][choice[e]];
        if (f.group != static_cast<int>(g)) continue;
        for (Eigen::Index j = 0; j < k; ++j) a(row, j) = f.coef[j];
        b(row) = -f.coef.back();
        ++row;
      }
      const Eigen::VectorXcd y = a.partialPivLu().solve(b);
      for (Eigen::Index j = 0; j < k; ++j) x(group_vars_[g][j]) = y(j);
    }
    return x;
  }
  for (std::size_t i = 0; i < nvars_; ++i) {
    const int deg = degrees_[i];
    const std::size_t k = index % static_cast<std::size_t>(deg);
    index /= static_cast<std::size_t>(deg);
    cplx root = deg == 2 ? std::sqrt(start_consts_[i]) : start_consts_[i];
    if (k == 1) root = -root;
    x(static_cast<Eigen::Index>(i)) = root;
  }
  return x;
}

// Per-thread scratch space for one path; fixed-capacity Eigen types keep
// the inner loop allocation-free.
struct TrackerWorkspace {
  const Homotopy& h;
  int dim;  // nvars + 1
  WMat jac;
  WVec val, ht;
  std::array<int, kMaxDim> piv{};
  bool factored = false;

  explicit TrackerWorkspace(const Homotopy& hom)
      : h(hom), dim(static_cast<int>(hom.nvars_) + 1) {
    jac.resize(dim, dim);
    val.resize(dim);
    ht.resize(dim);
  }

  // Returns the unscaled value of `eq` at x and adds scale * gradient to
  // row `row` of the Jacobian.
  cplx accumulate(const Homotopy::Equation& eq, const WVec& x, cplx scale,
                  int row) {
    cplx raw = 0;
    for (const auto& m : eq) {
      const cplx xa = x(m.a);
      if (m.b < 0) {
        raw += m.coef * xa;
        jac(row, m.a) += scale * m.coef;
      } else {
        const cplx xb = x(m.b);
        raw += m.coef * xa * xb;
        const cplx c = scale * m.coef;
        jac(row, m.a) += c * xb;
        jac(row, m.b) += c * xa;
      }
    }
    return raw;
  }

  // Fills val = H(x,t) (plus patch row), jac = dH/dx, ht = dH/dt.
  void evaluate(const WVec& x, double t) {
    const int m = dim - 1;
    jac.setZero();
    const cplx gt = h.gamma_ * t;
    const double ft = 1.0 - t;
    for (int i = 0; i < m; ++i) {
      const cplx g = accumulate(h.start_[i], x, gt, i);
      const cplx f = accumulate(h.target_[i], x, ft, i);
      val(i) = gt * g + ft * f;
      ht(i) = h.gamma_ * g - f;
    }
    cplx p = -1.0;
    for (int j = 0; j < dim; ++j) {
      p += h.patch_[j] * x(j);
      jac(m, j) = h.patch_[j];
    }
    val(m) = p;
    ht(m) = 0;
  }

  // Factors jac in place; afterwards jac holds the LU factors.
  bool factor() { return factored = lu_factor(jac, dim, piv); }
  WVec solve(const WVec& rhs) const { return lu_solve(jac, dim, piv, rhs); }

  WVec tangent(const WVec& x, double t) {
    evaluate(x, t);
    if (!factor()) {
      WVec bad(dim);
      bad.setConstant(cplx(NAN, NAN));
      return bad;
    }
    return -solve(ht);
  }

  // Tangent at the point of the last corrector factorization.
  WVec last_tangent() const { return -solve(ht); }

  // Newton at fixed t; returns true and updates x on acceptance.
  bool correct(WVec& x, double t, double& first) {
    const auto& cfg = h.cfg_;
    double prev = 0;
    first = 0;
    for (int it = 0; it < cfg.max_corrector_iters; ++it) {
      evaluate(x, t);
      if (!factor()) return false;
      WVec dx = -solve(val);
      const double scale = std::max(1.0, inf_norm(x));
      const double nd = inf_norm(dx) / scale;
      if (!std::isfinite(nd)) return false;
      if (it == 0) first = nd;
      if (it == 0 && nd > cfg.max_first_correction) return false;
      if (it > 0 && nd > 0.5 * prev && nd > cfg.newton_tol) {
        if (nd > kNoiseFloor) return false;
        x += dx;  // stagnating at the rounding floor
        return true;
      }
      x += dx;
      if (nd <= cfg.newton_tol) return true;
      prev = nd;
    }
    return false;
  }
};

Homotopy::Refined Homotopy::refine(const CVector& x0, int iters) const {
  const auto m = static_cast<Eigen::Index>(nvars_);
  Refined out{x0, 0, 0, false};
  Eigen::MatrixXcd jac(m, m);
  Eigen::VectorXcd val(m);
  auto eval = [&](const CVector& x) {
    jac.setZero();
    for (Eigen::Index i = 0; i < m; ++i) {
      cplx v = 0;
      for (const auto& mono : target_[i]) {
        // Homogenizing coordinate is 1 in affine space.
        const cplx xa = mono.a == 0 ? cplx(1) : x(mono.a - 1);
        if (mono.b < 0) {
          v += mono.coef * xa;
          if (mono.a > 0) jac(i, mono.a - 1) += mono.coef;
        } else {
          const cplx xb = mono.b == 0 ? cplx(1) : x(mono.b - 1);
          v += mono.coef * xa * xb;
          if (mono.a > 0) jac(i, mono.a - 1) += mono.coef * xb;
          if (mono.b > 0) jac(i, mono.b - 1) += mono.coef * xa;
        }
      }
      val(i) = v;
    }
  };
  CVector x = x0;
  double prev = HUGE_VAL;
  for (int it = 0; it < iters; ++it) {
    eval(x);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(jac);
    CVector dx = -lu.solve(val);
    if (!dx.allFinite()) break;
    x += dx;
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    const double nd = dx.cwiseAbs().maxCoeff() / scale;
    // Converged, or stagnating at the rounding floor of an
    // ill-conditioned (but regular) solution.
    if (nd <= 1e-11 || (nd <= kNoiseFloor && nd > 0.5 * prev)) {
      out.converged = true;
      break;
    }
    prev = nd;
  }
  eval(x);
  out.point = x;
  // Scaled like the Newton updates: rounding alone leaves |F_i| of order
  // eps * |x|^deg_i at an exact solution.
  const double xscale = std::max(1.0, m > 0 ? x.cwiseAbs().maxCoeff() : 0.0);
  out.residual = 0;
  for (Eigen::Index i = 0; i < m; ++i)
    out.residual = std::max(out.residual,
                            std::abs(val(i)) / std::pow(xscale, degrees_[i]));
  if (m > 0) {
    // Condition of the Jacobian with columns scaled by max(1, |x_k|) and
    // rows equilibrated: invariant under rescaling the unknowns, so large
    // but regular solutions of nearly degenerate instances are not
    // mistaken for singular ones.
    Eigen::MatrixXcd scaled = jac;
    for (Eigen::Index k = 0; k < m; ++k) scaled.col(k) *= std::max(1.0, std::abs(x(k)));
    for (Eigen::Index i = 0; i < m; ++i) {
      const double r = scaled.row(i).cwiseAbs().sum();
      if (r > 0) scaled.row(i) /= r;
    }
    auto row_norm = [](const Eigen::MatrixXcd& a) {
      return a.cwiseAbs().rowwise().sum().maxCoeff();
    };
    const Eigen::MatrixXcd inv = scaled.partialPivLu().inverse();
    out.condition = row_norm(scaled) * row_norm(inv);
    if (!std::isfinite(out.condition)) out.condition = HUGE_VAL;
  }
  if (!x.allFinite()) out.converged = false;
  return out;
}

Endpoint Homotopy::track(const CVector& start, std::size_t index) const {
  TrackerWorkspace ws(*this);
  const int dim = ws.dim;
  Endpoint ep;
  ep.path_index = index;

  WVec x(dim);
  x(0) = 1.0;
  for (int i = 1; i < dim; ++i) x(i) = start(i - 1);
  cplx s = 0;
  for (int j = 0; j < dim; ++j) s += patch_[j] * x(j);
  x /= s;

  auto affine_norm = [&](const WVec& v) {
    const double x0 = std::abs(v(0));
    double m = 0;
    for (int i = 1; i < dim; ++i) m = std::max(m, std::abs(v(i)));
    return x0 == 0 ? HUGE_VAL : m / x0;
  };

  double t = 1.0;
  double step = cfg_.initial_step;
  bool diverged = false;
  WVec k1(dim);
  bool have_k1 = false;
  while (t > 0 && ep.steps < kMaxStepsPerPath) {
    ++ep.steps;
    const double dt = std::min(step, t);
    const double t1 = dt >= t ? 0.0 : t - dt;
    // RK4 on dx/dt, integrating towards t = 0.
    if (!have_k1) {
      k1 = ws.tangent(x, t);
      have_k1 = true;
    }
    const WVec k2 = ws.tangent(x - 0.5 * dt * k1, t - 0.5 * dt);
    const WVec k3 = ws.tangent(x - 0.5 * dt * k2, t - 0.5 * dt);
    const WVec k4 = ws.tangent(x - dt * k3, t1);
    WVec pred = x - (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    double first = 0;
    if (pred.allFinite() && ws.correct(pred, t1, first)) {
      x = pred;
      t = t1;
      // The corrector's last factorization is at x up to its final update.
      k1 = ws.last_tangent();
      // The first corrector update measures the RK4 local error, O(h^5).
      const double grow =
          first > 0 ? 0.8 * std::pow(cfg_.max_first_correction / first, 0.2)
                    : 2.0;
      step = std::min(dt * std::clamp(grow, 0.5, 2.0), cfg_.max_step);
      // Jump to t = 0 only with a comfortable error margin; otherwise keep
      // halving t, which is the natural pace near singular endpoints.
      if (step >= t && grow < 4.0) step = 0.5 * t;
      if (t < 0.1 && affine_norm(x) > cfg_.infinity_threshold) {
        diverged = true;
        break;
      }
    } else {
      ++ep.rejections;
      step = 0.5 * dt;
      if (step < cfg_.min_step * std::min(1.0, t)) break;
    }
  }
  ep.t_reached = t;

  const double anorm = affine_norm(x);
  if (diverged) {
    ep.status = EndpointStatus::at_infinity;
    return ep;
  }
  if (t > kEndgameT) {
    ep.status = EndpointStatus::tracking_failed;
    return ep;
  }
  if (t > 0 || !std::isfinite(anorm) || anorm > cfg_.infinity_threshold) {
    // Stalled in the endgame: nonsingular finite endpoints are reached
    // without stalling, so this path ends at infinity or at a singularity.
    ep.status = !std::isfinite(anorm) || anorm > 1e3
                    ? EndpointStatus::at_infinity
                    : EndpointStatus::singular;
    return ep;
  }
  CVector affine(dim - 1);
  for (int i = 1; i < dim; ++i) affine(i - 1) = x(i) / x(0);
  const Refined r = refine(affine, cfg_.endpoint_refine_iters);
  ep.point = r.point;
  ep.residual = r.residual;
  ep.jacobian_condition = r.condition;
  const double drift = (r.point - affine).cwiseAbs().maxCoeff() /
                       std::max(1.0, affine.cwiseAbs().maxCoeff());
  if (r.converged && drift < 1e-6 && r.condition < kSingularCondition &&
      r.residual <= 10 * cfg_.newton_tol) {
    ep.status = EndpointStatus::finite_nonsingular;
  } else {
    ep.status = EndpointStatus::singular;
  }
  return ep;
}

Endpoint track_path(const CVector& start_point, const PolySystem& sys,
                    const TrackerConfig& cfg) {
  return Homotopy(sys, cfg).track(start_point);
}

namespace {

bool lex_less(const CVector& a, const CVector& b) {
  for (Eigen::Index i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return a.size() < b.size();
}

bool close(const CVector& a, const CVector& b, double tol) {
  if (a.size() != b.size()) return false;
  const double scale =
      std::max({1.0, a.size() ? a.cwiseAbs().maxCoeff() : 0.0,
                b.size() ? b.cwiseAbs().maxCoeff() : 0.0});
  return (a - b).cwiseAbs().maxCoeff() <= tol * scale;
}

}  // namespace

std::vector<CVector> dedup(const std::vector<CVector>& points, double tol,
                           const std::vector<double>& residuals) {
  if (tol <= 0) throw Error(Errc::precondition, "dedup tolerance must be > 0");
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (residuals.size() == points.size())
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      return residuals[a] < residuals[b];
    });
  std::vector<CVector> reps;
  for (auto i : order) {
    const auto& p = points[i];
    if (std::none_of(reps.begin(), reps.end(),
                     [&](const CVector& r) { return close(p, r, tol); }))
      reps.push_back(p);
  }
  std::sort(reps.begin(), reps.end(), lex_less);
  return reps;
}

bool sign_orbits_closed(const PolySystem& sys,
                        const std::vector<CVector>& solutions, double tol) {
  const std::size_t axes = sys.sign_flips.size();
  if (axes == 0) return true;
  for (const auto& s : solutions) {
    std::vector<cplx> pt(s.data(), s.data() + s.size());
    for (unsigned mask = 1; mask < (1u << axes); ++mask) {
      auto f = apply_sign_flips(sys, pt, mask);
      CVector fv = Eigen::Map<CVector>(f.data(), static_cast<Eigen::Index>(f.size()));
      if (close(fv, s, tol)) return false;  // orbit not of full size
      if (std::none_of(solutions.begin(), solutions.end(),
                       [&](const CVector& o) { return close(fv, o, tol); }))
        return false;
    }
  }
  return true;
}

namespace {

struct Run {
  std::vector<Endpoint> endpoints;
  std::size_t failed = 0;
  std::vector<CVector> finite;
  std::vector<double> finite_residuals;
};

Run run_paths(const Homotopy& hom, int threads) {
  Run run;
  const std::size_t total = hom.path_count();
  run.endpoints.resize(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++)
      run.endpoints[i] = hom.track(hom.start_point(i), i);
  };
  const int n = std::max(1, threads);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& ep : run.endpoints) {
    if (ep.status == EndpointStatus::tracking_failed) ++run.failed;
    if (ep.status == EndpointStatus::finite_nonsingular) {
      run.finite.push_back(ep.point);
      run.finite_residuals.push_back(ep.residual);
    }
  }
  return run;
}

}  // namespace

SolveResult solve(const PolySystem& sys, const TrackerConfig& cfg) {
  SolveResult res;
  res.config_used = cfg;
  if (sys.variable_count() == 0) return res;
  int threads = cfg.threads;
  if (threads <= 0)
    threads = std::max(1u, std::thread::hardware_concurrency());

  Homotopy hom(sys, cfg);
  res.config_used.gamma = hom.gamma();
  res.path_count = hom.path_count();
  Run run = run_paths(hom, threads);
  res.paths_failed = run.failed;
  std::vector<CVector> finite = run.finite;
  std::vector<double> residuals = run.finite_residuals;
  res.distinct_solutions = dedup(finite, cfg.dedup_tol, residuals);
  res.duplicate_endpoints = res.distinct_solutions.size() < finite.size();
  res.orbit_closed =
      sign_orbits_closed(sys, res.distinct_solutions, cfg.dedup_tol);
  res.endpoints = std::move(run.endpoints);

  const bool suspicious = run.failed * 1000 > res.path_count ||
                          res.duplicate_endpoints || !res.orbit_closed;
  if (suspicious) {
    TrackerConfig retry = cfg;
    retry.gamma.reset();
    retry.seed = derive_seed(cfg.seed, 0x51u);
    Homotopy hom2(sys, retry);
    Run run2 = run_paths(hom2, threads);
    ++res.gamma_retries;
    if (run2.failed * 20 > hom2.path_count())
      throw Error(Errc::unreliable_result,
                  std::to_string(run2.failed) + " of " +
                      std::to_string(hom2.path_count()) +
                      " paths failed after a gamma retry");
    finite.insert(finite.end(), run2.finite.begin(), run2.finite.end());
    residuals.insert(residuals.end(), run2.finite_residuals.begin(),
                     run2.finite_residuals.end());
    res.distinct_solutions = dedup(finite, cfg.dedup_tol, residuals);
    res.paths_failed = run2.failed;
    res.orbit_closed =
        sign_orbits_closed(sys, res.distinct_solutions, cfg.dedup_tol);
    res.endpoints.insert(res.endpoints.end(),
                         std::make_move_iterator(run2.endpoints.begin()),
                         std::make_move_iterator(run2.endpoints.end()));
  }
  res.raw_count = res.distinct_solutions.size();
  return res;
}

void write_endpoint_dump(std::ostream& out, const SolveResult& res) {
  const auto old = out.precision(17);
  for (const auto& ep : res.endpoints) {
    out << to_string(ep.status) << ' ' << ep.residual << ' '
        << ep.jacobian_condition;
    for (Eigen::Index i = 0; i < ep.point.size(); ++i)
      out << ' ' << ep.point(i).real() << ' ' << ep.point(i).imag();
    out << '\n';
  }
  out.precision(old);
}

}  // namespace rcount
