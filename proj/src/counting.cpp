#include "rcount/counting.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "rcount/error.hpp"
#include "rcount/rigidity.hpp"

namespace rcount {

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  std::uint64_t z = seed * 0x100000001b3ULL + 0x9e3779b97f4a7c15ULL *
                                                  static_cast<std::uint64_t>(trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int system_variable_count(int n, int d, Model model) {
  if (model == Model::euclidean) return d * n - d * (d + 1) / 2;
  return (d + 1) * n - (d + 1) - d * (d - 1) / 2;
}

std::size_t estimated_path_count(const Graph& g, int d, Model model,
                                 StartSystem start, std::size_t limit) {
  if (g.n() <= d || d == 1) return 0;
  if (start == StartSystem::linear_product &&
      g.edge_count() == rigid_rank_target(g.n(), d))
    return product_path_count(g, d, default_pins(g, d));
  const int m = system_variable_count(g.n(), d, model);
  const std::size_t total = m >= 63 ? SIZE_MAX : std::size_t{1} << m;
  if (start == StartSystem::total_degree || total <= limit) return total;
  // Overdetermined: the start depends on the core split, so build the
  // system and let the homotopy count its start solutions.
  if (g.edge_count() < rigid_rank_target(g.n(), d)) return total;
  TrackerConfig cfg;
  cfg.start_system = start;
  cfg.max_variables = static_cast<int>(std::bit_width(limit));
  try {
    const Homotopy h(build_system(sample_instance(g, d, model, 1), true), cfg);
    return h.path_count();
  } catch (const Error& e) {
    if (e.code() != Errc::capacity) throw;
    return SIZE_MAX;
  }
}

CountValue c1(const Graph& g) {
  if (!g.is_connected()) return CountValue::infinite();
  if (g.n() <= 1) return CountValue::finite(1);
  const auto k = biconnected_components(g).size();
  return CountValue::finite(std::uint64_t{1} << (k - 1));
}

namespace {

double scaled_surplus(const PolySystem& sys, const CVector& x) {
  std::vector<cplx> pt(x.data(), x.data() + x.size());
  const double scale = std::max(1.0, x.size() ? x.cwiseAbs().maxCoeff() : 0.0);
  return surplus_residual(sys, pt) / (scale * scale);
}

}  // namespace

CountResult realisation_count(const Graph& g, int d, Model model,
                              const CountConfig& cfg) {
  if (d < 1) throw Error(Errc::domain, "dimension must be >= 1");
  if (cfg.trials < 1) throw Error(Errc::precondition, "trials must be >= 1");
  CountResult res;
  res.model = model;
  res.d = d;
  res.seed = cfg.seed;

  if (g.n() <= d) {
    res.fast_path = "small";
    res.value = g.is_complete() ? CountValue::finite(1) : CountValue::infinite();
    return res;
  }
  if (d == 1) {
    // c*_1 = c_1
    res.fast_path = "c1";
    res.value = c1(g);
    return res;
  }
  if (!is_d_rigid(g, d, cfg.seed)) {
    res.fast_path = "not-rigid";
    res.value = CountValue::infinite();
    return res;
  }
  return solver_count(g, d, model, cfg);
}

CountResult solver_count(const Graph& g, int d, Model model,
                         const CountConfig& cfg) {
  if (d < 1) throw Error(Errc::domain, "dimension must be >= 1");
  if (cfg.trials < 1) throw Error(Errc::precondition, "trials must be >= 1");
  CountResult res;
  res.model = model;
  res.d = d;
  res.seed = cfg.seed;

  const std::size_t orbit = std::size_t{1} << d;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    const std::uint64_t seed = trial_seed(cfg.seed, trial);
    const InstanceSpec inst = sample_instance(g, d, model, seed);
    const PolySystem sys = build_system(
        inst, cfg.tracker.start_system == StartSystem::linear_product);
    TrackerConfig tcfg = cfg.tracker;
    tcfg.seed = trial_seed(seed, 1000);
    tcfg.gamma.reset();
    const SolveResult sol = solve(sys, tcfg);

    std::size_t kept = 0;
    for (const auto& x : sol.distinct_solutions) {
      std::vector<cplx> pt(x.data(), x.data() + x.size());
      res.max_residual = std::max(res.max_residual, core_residual(sys, pt));
      if (sys.surplus.empty() || scaled_surplus(sys, x) <= cfg.surplus_tol)
        ++kept;
    }
    if (trial == 0) {
      res.surplus_filtered = sol.raw_count - kept;
      res.paths_per_trial = sol.path_count;
    }
    res.paths_failed += sol.paths_failed;
    res.gamma_retries += sol.gamma_retries;
    if (!sol.orbit_closed) res.flags.push_back("orbit-open");
    if (kept % orbit != 0) res.flags.push_back("raw-not-divisible");
    res.trials.push_back(kept);
  }

  const auto [lo, hi] = std::minmax_element(res.trials.begin(), res.trials.end());
  if (*lo != *hi) res.flags.push_back("trial-disagreement");
  res.raw_count = *hi;
  res.unreliable = !res.flags.empty();
  if (res.raw_count == 0) {
    // A rigid graph always has a nonempty fiber at a realisable instance.
    res.flags.push_back("empty-fiber");
    res.unreliable = true;
    res.value = CountValue::finite(1);
    return res;
  }
  res.value = CountValue::finite((res.raw_count + orbit - 1) / orbit);
  return res;
}

CountValue derived_count_cone(const Graph& g, int d, const CountResult& base) {
  (void)g;
  if (base.model != Model::spherical || base.d != d)
    throw Error(Errc::precondition,
                "cone prediction needs the spherical count in dimension d");
  return base.value;
}

CountValue derived_count_cone_chain(const CountValue& spherical_base,
                                    int cones) {
  if (cones < 1) throw Error(Errc::precondition, "need at least one cone");
  return spherical_base;
}

CountValue derived_count_zero_ext(const CountValue& base) {
  if (!base.is_finite()) return base;
  return CountValue::finite(2 * base.value());
}

CountValue derived_count_glue(const CountValue& base, int copies) {
  if (copies < 1) throw Error(Errc::precondition, "copies must be >= 1");
  if (!base.is_finite()) return base;
  std::uint64_t out = 1;
  for (int i = 0; i < copies; ++i) {
    if (out > UINT64_MAX / base.value())
      throw Error(Errc::capacity, "glued count overflows 64 bits");
    out *= base.value();
  }
  return CountValue::finite(out);
}

std::size_t count_vertex_placements(
    const std::vector<std::vector<cplx>>& anchors,
    const std::vector<cplx>& lambda, const TrackerConfig& cfg) {
  const int d = static_cast<int>(anchors.size());
  if (static_cast<int>(lambda.size()) != d)
    throw Error(Errc::arity, "need one lambda per anchor");
  std::vector<Polynomial> eqs;
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(anchors[i].size()) != d)
      throw Error(Errc::arity, "anchor must have d coordinates");
    Polynomial eq(d);
    for (int j = 0; j < d; ++j) {
      Polynomial diff(d);
      diff.add_linear(1.0, j);
      diff.add_constant(-anchors[i][j]);
      eq = eq + (diff * diff).scaled(0.5);
    }
    eq.add_constant(-lambda[i]);
    eqs.push_back(std::move(eq));
  }
  return solve(PolySystem::from_equations(std::move(eqs)), cfg).raw_count;
}

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
  }
  return "unknown";
}

bool IdentityReport::all_passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const IdentityCheck& c) {
    return c.status == CheckStatus::fail;
  });
}

IdentityReport check_identities(const Graph& g, int d, std::size_t max_paths,
                                const CountConfig& cfg) {
  IdentityReport rep;
  auto fits = [&](const Graph& h, int dim, Model m) {
    return estimated_path_count(h, dim, m, cfg.tracker.start_system, max_paths) <= max_paths;
  };
  auto compare = [](const std::string& name, const CountValue& a,
                    const CountValue& b, bool equality) {
    IdentityCheck c{name, CheckStatus::pass, a.str() + (equality ? " = " : " <= ") + b.str()};
    bool ok;
    if (equality) {
      ok = a == b;
    } else {
      ok = !b.is_finite() || (a.is_finite() && a.value() <= b.value());
    }
    if (!ok) c.status = CheckStatus::fail;
    return c;
  };
  auto skipped = [](const std::string& name) {
    return IdentityCheck{name, CheckStatus::skipped, "over path budget"};
  };

  const bool base_fits =
      fits(g, d, Model::euclidean) && fits(g, d, Model::spherical);
  if (base_fits) {
    rep.euclidean = realisation_count(g, d, Model::euclidean, cfg);
    rep.spherical = realisation_count(g, d, Model::spherical, cfg);
    rep.checks.push_back(compare("c_d <= c*_d", rep.euclidean.value,
                                 rep.spherical.value, false));
  } else {
    rep.checks.push_back(skipped("c_d <= c*_d"));
  }

  const Graph coned = cone(g);
  if (base_fits && fits(coned, d + 1, Model::euclidean)) {
    auto up = realisation_count(coned, d + 1, Model::euclidean, cfg);
    rep.checks.push_back(compare("c*_d(G) = c_{d+1}(G*o)", rep.spherical.value,
                                 up.value, true));
  } else {
    rep.checks.push_back(skipped("c*_d(G) = c_{d+1}(G*o)"));
  }

  if (fits(coned, d, Model::euclidean) && fits(coned, d, Model::spherical)) {
    auto ce = realisation_count(coned, d, Model::euclidean, cfg);
    auto cs = realisation_count(coned, d, Model::spherical, cfg);
    rep.checks.push_back(
        compare("c_d(G*o) = c*_d(G*o)", ce.value, cs.value, true));
  } else {
    rep.checks.push_back(skipped("c_d(G*o) = c*_d(G*o)"));
  }
  return rep;
}

}  // namespace rcount
