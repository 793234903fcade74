#pragma once

// Checks of the finite-dimensional identities: deterministic (quadrature,
// exact calculus) and statistical (two-sample permutation tests against
// independently generated samples).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "branching.hpp"
#include "chamber.hpp"
#include "diffusion.hpp"
#include "ensembles.hpp"
#include "generator.hpp"
#include "kernels.hpp"
#include "matrix_model.hpp"
#include "quadrature.hpp"
#include "random.hpp"
#include "stats.hpp"

namespace interlace {

struct VerifyOptions {
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::size_t n_perm = 999;
  double level = kDefaultLevel;
  /// Sensitivity controls pass when their p-value falls below this.
  double control_level = 1e-3;
  /// Multiplies default sample sizes in the suites.
  double scale = 1.0;
};

/// FNV-1a, used to give each named check its own seed stream.
inline std::uint64_t name_hash(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace detail {

inline std::string fmt_point(const OrderedPoint& x) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < x.dim(); ++i) {
    std::snprintf(buf, sizeof buf, "%.9g", x[i]);
    if (i) out += ',';
    out += buf;
  }
  return out;
}

using PathFn = std::function<OrderedPoint(RandomStream&)>;

/// Draws n samples from each path with disjoint seed streams and compares them.
inline TestReport two_path_test(std::string name, std::size_t n, const VerifyOptions& opt, const PathFn& path_a,
                                const PathFn& path_b) {
  const auto a = monte_carlo<OrderedPoint>(n, derive_seed(opt.seed, StreamTag::PathA), opt.threads,
                                           [&](RandomStream& rng, std::size_t) { return path_a(rng); });
  const auto b = monte_carlo<OrderedPoint>(n, derive_seed(opt.seed, StreamTag::PathB), opt.threads,
                                           [&](RandomStream& rng, std::size_t) { return path_b(rng); });
  EnergyTestOptions eo;
  eo.n_perm = opt.n_perm;
  eo.threads = opt.threads;
  eo.level = opt.level;
  TestReport r = energy_perm_test(a, b, derive_seed(opt.seed, StreamTag::Permutation), eo, std::move(name));
  r.meta["seed"] = std::to_string(opt.seed);
  r.meta["n_samples"] = static_cast<long long>(n);
  return r;
}

/// Controls need p below 1e-3, unreachable with fewer than 1999 permutations.
inline VerifyOptions control_options(VerifyOptions o) {
  o.n_perm = std::max<std::size_t>(o.n_perm, 1999);
  return o;
}

inline TestReport as_control(TestReport r, double level) {
  r.threshold = level;
  r.passed = r.p_value.has_value() && *r.p_value < level;
  r.meta["control"] = true;
  return r;
}

inline void add_sde_meta(TestReport& r, double t, double dt) {
  r.meta["t"] = t;
  r.meta["dt"] = dt;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Deterministic kernel checks

enum class KernelKind { L, LambdaEq, LambdaPlus };

inline const char* kernel_name(KernelKind k) {
  switch (k) {
    case KernelKind::L: return "L";
    case KernelKind::LambdaEq: return "lambda-eq";
    case KernelKind::LambdaPlus: return "lambda-plus";
  }
  return "?";
}

/// Total mass of the kernel density over its interlacing cell.
inline double kernel_mass(KernelKind kind, double alpha, const OrderedPoint& x, double tol = 1e-10) {
  const KernelParams kp(alpha);
  std::vector<CellAxis> axes;
  const std::vector<double> cuts = x.vec();
  std::function<double(std::span<const double>)> dens;
  switch (kind) {
    case KernelKind::L:
      for (std::size_t k = 0; k + 1 < x.dim(); ++k) axes.push_back({x[k], x[k + 1], {}});
      dens = [&](std::span<const double> y) {
        return density_L(x, OrderedPoint(std::vector<double>(y.begin(), y.end()), x.domain()));
      };
      break;
    case KernelKind::LambdaEq:
      for (std::size_t k = 0; k < x.dim(); ++k) axes.push_back({k == 0 ? 0.0 : x[k - 1], x[k], {}});
      dens = [&](std::span<const double> y) {
        return density_lambda_eq(kp, x, OrderedPoint(std::vector<double>(y.begin(), y.end())));
      };
      break;
    case KernelKind::LambdaPlus:
      for (std::size_t k = 0; k + 1 < x.dim(); ++k) axes.push_back({k == 0 ? 0.0 : x[k - 1], x[k + 1], cuts});
      dens = [&](std::span<const double> y) {
        return density_lambda_plus(kp, x, OrderedPoint(std::vector<double>(y.begin(), y.end())));
      };
      break;
  }
  return quad_cell(dens, axes, tol, true).value;
}

inline TestReport check_kernel_normalization(KernelKind kind, double alpha, const OrderedPoint& x,
                                             double threshold = 1e-6) {
  const double mass = kernel_mass(kind, alpha, x);
  TestReport r = TestReport::deterministic(std::string("normalization-") + kernel_name(kind), std::abs(mass - 1.0),
                                           threshold);
  r.meta["alpha"] = alpha;
  r.meta["x"] = detail::fmt_point(x);
  r.meta["mass"] = mass;
  return r;
}

/// LambdaPlus(x, y) against ∫ L(x, z) LambdaEq(z, y) dz at a grid of y.
inline TestReport check_decomposition(double alpha, const OrderedPoint& x, int n_points = 20,
                                      double threshold = 1e-6) {
  if (x.dim() != 2 && x.dim() != 3) throw std::invalid_argument("check_decomposition: need N = 1 or 2");
  const KernelParams kp(alpha);
  const std::size_t n = x.dim() - 1;
  std::vector<OrderedPoint> ys;
  if (n == 1) {
    for (int j = 0; j < n_points; ++j) ys.emplace_back(std::vector<double>{(j + 0.5) / n_points * x[1]});
  } else {
    // Points of the open support {y_1 < x_2, x_1 < y_2, y_1 < y_2 ≤ x_3}.
    RandomStream rng(name_hash("decomposition-grid"));
    while (ys.size() < static_cast<std::size_t>(n_points)) {
      const double y1 = rng.uniform(0.0, x[1]);
      const double y2 = rng.uniform(x[0], x[2]);
      if (y1 < y2) ys.emplace_back(std::vector<double>{y1, y2});
    }
  }
  double worst = 0.0;
  for (const auto& y : ys) {
    const double direct = density_lambda_plus(kp, x, y);
    std::vector<CellAxis> axes;
    for (std::size_t k = 0; k < n; ++k) axes.push_back({x[k], x[k + 1], y.vec()});
    auto integrand = [&](std::span<const double> z) {
      const OrderedPoint zp(std::vector<double>(z.begin(), z.end()));
      if (!zp.strictly_interior() || !(zp[0] > 0.0)) return 0.0;
      return density_L(x, zp) * density_lambda_eq(kp, zp, y);
    };
    const double composed = quad_cell(integrand, axes, 1e-11, false).value;
    worst = std::max(worst, std::abs(direct - composed) / std::max(std::abs(direct), 1e-12));
  }
  TestReport r = TestReport::deterministic("decomposition", worst, threshold);
  r.meta["alpha"] = alpha;
  r.meta["x"] = detail::fmt_point(x);
  r.meta["points"] = static_cast<long long>(ys.size());
  return r;
}

/// CDF of LambdaPlus(x, ·) for dim x = 2; closed form when α = 0.
inline double lambda_plus_cdf_1(double alpha, const OrderedPoint& x, double y) {
  if (x.dim() != 2) throw std::invalid_argument("lambda_plus_cdf_1: need dim(x) = 2");
  const double x1 = x[0], x2 = x[1];
  if (y <= 0.0) return 0.0;
  if (y >= x2) return 1.0;
  if (alpha == 0.0) {
    if (y <= x1) return y * std::log(x2 / x1) / (x2 - x1);
    return (y * std::log(x2 / y) + y - x1) / (x2 - x1);
  }
  const KernelParams kp(alpha);
  auto f = [&](double v) { return density_lambda_plus(kp, x, OrderedPoint(std::vector<double>{v})); };
  const double cut[1] = {x1};
  return quad_1d(f, 0.0, y, 1e-12, cut);
}

// ---------------------------------------------------------------------------
// Samplers

inline TestReport check_lambda_plus_ks(double alpha, const OrderedPoint& x, std::size_t n, const VerifyOptions& opt) {
  const KernelParams kp(alpha);
  const auto ys = monte_carlo<double>(n, derive_seed(opt.seed, StreamTag::Kernel), opt.threads,
                                      [&](RandomStream& rng, std::size_t) { return sample_lambda_plus(kp, x, rng)[0]; });
  TestReport r = ks_test(ys, [&](double y) { return lambda_plus_cdf_1(alpha, x, y); }, "ks-lambda-plus", opt.level);
  r.meta["alpha"] = alpha;
  r.meta["x"] = detail::fmt_point(x);
  r.meta["seed"] = std::to_string(opt.seed);
  return r;
}

/// Density-based sampler against the Haar-matrix construction.
inline TestReport check_matrix_cross(KernelKind kind, int alpha, const OrderedPoint& x, std::size_t n,
                                     const VerifyOptions& opt) {
  const KernelParams kp(alpha);
  detail::PathFn a, b;
  if (kind == KernelKind::LambdaPlus) {
    a = [&](RandomStream& rng) { return sample_lambda_plus(kp, x, rng); };
    b = [&](RandomStream& rng) { return sample_lambda_plus_via_matrices(alpha, x, rng); };
  } else if (kind == KernelKind::LambdaEq) {
    a = [&](RandomStream& rng) { return sample_lambda_eq(kp, x, rng); };
    b = [&](RandomStream& rng) { return sample_lambda_eq_via_matrices(alpha, x, rng); };
  } else {
    throw std::invalid_argument("check_matrix_cross: no matrix model for L");
  }
  TestReport r = detail::two_path_test(std::string("matrix-cross-") + kernel_name(kind), n, opt, a, b);
  r.meta["alpha"] = static_cast<long long>(alpha);
  r.meta["x"] = detail::fmt_point(x);
  return r;
}

// ---------------------------------------------------------------------------
// Intertwining

/// T^{N+1}_t Λ = Λ T^N_t for the Laguerre semigroups. alpha_b replaces α on
/// path B (sensitivity control).
inline TestReport check_intertwine_laguerre(double alpha, const OrderedPoint& x, double t, std::size_t n, double dt,
                                            const VerifyOptions& opt, std::optional<double> alpha_b = {}) {
  const double ab = alpha_b.value_or(alpha);
  const KernelParams ka(alpha), kb(ab);
  const SdeConfig cfg(dt, t);
  auto a = [&](RandomStream& rng) { return sample_lambda_plus(ka, simulate_laguerre(alpha, x, cfg, rng), rng); };
  auto b = [&](RandomStream& rng) { return simulate_laguerre(ab, sample_lambda_plus(kb, x, rng), cfg, rng); };
  TestReport r = detail::two_path_test("intertwine-laguerre", n, alpha_b ? detail::control_options(opt) : opt, a, b);
  detail::add_sde_meta(r, t, dt);
  r.meta["alpha"] = alpha;
  r.meta["N"] = static_cast<long long>(x.dim() - 1);
  r.meta["x"] = detail::fmt_point(x);
  if (alpha_b) {
    r.meta["alpha_path_b"] = ab;
    r = detail::as_control(std::move(r), opt.control_level);
    r.name += "-control";
  }
  return r;
}

/// T^{N+1}_{s,α,t} Λ = Λ T^N_{s,α,t}. s_b replaces s on path B (control).
inline TestReport check_intertwine_pickrell(double s, double alpha, const OrderedPoint& x, double t, std::size_t n,
                                            double dt, const VerifyOptions& opt, std::optional<double> s_b = {}) {
  const int N = static_cast<int>(x.dim()) - 1;
  const PickrellParams pa(s, alpha, N + 1), pb(s_b.value_or(s), alpha, N);
  const KernelParams kp(alpha);
  const SdeConfig cfg(dt, t);
  auto a = [&](RandomStream& rng) { return sample_lambda_plus(kp, simulate_pickrell_particles(pa, x, cfg, rng), rng); };
  auto b = [&](RandomStream& rng) { return simulate_pickrell_particles(pb, sample_lambda_plus(kp, x, rng), cfg, rng); };
  TestReport r = detail::two_path_test("intertwine-pickrell", n, s_b ? detail::control_options(opt) : opt, a, b);
  detail::add_sde_meta(r, t, dt);
  r.meta["s"] = s;
  r.meta["alpha"] = alpha;
  r.meta["N"] = static_cast<long long>(N);
  r.meta["x"] = detail::fmt_point(x);
  if (s_b) {
    r.meta["s_path_b"] = *s_b;
    r = detail::as_control(std::move(r), opt.control_level);
    r.name += "-control";
  }
  return r;
}

/// kind L: T^{N+1}_{s,α} L = L T^N_{s,α+1}   (x of dim N+1)
/// kind LambdaEq: T^N_{s,α+1} Λ^{N,N}_α = Λ^{N,N}_α T^N_{s,α}   (x of dim N)
/// shift_b replaces the +1 shift on path B (control when ≠ 1).
inline TestReport check_shifted_intertwine(KernelKind kind, double s, double alpha, const OrderedPoint& x, double t,
                                           std::size_t n, double dt, const VerifyOptions& opt,
                                           std::optional<double> shift_b = {}) {
  const SdeConfig cfg(dt, t);
  const KernelParams kp(alpha);
  const double shift = shift_b.value_or(1.0);
  const int d = static_cast<int>(x.dim());
  detail::PathFn a, b;
  std::string name;
  if (kind == KernelKind::L) {
    name = "shifted-intertwine-L";
    const PickrellParams pa(s, alpha, d), pb(s, alpha + shift, d - 1);
    a = [=, &x](RandomStream& rng) { return sample_L(simulate_pickrell_particles(pa, x, cfg, rng), rng); };
    b = [=, &x](RandomStream& rng) { return simulate_pickrell_particles(pb, sample_L(x, rng), cfg, rng); };
  } else if (kind == KernelKind::LambdaEq) {
    name = "shifted-intertwine-lambda-eq";
    const PickrellParams pa(s, alpha + 1.0, d), pb(s, alpha + 1.0 - shift, d);
    a = [=, &x](RandomStream& rng) { return sample_lambda_eq(kp, simulate_pickrell_particles(pa, x, cfg, rng), rng); };
    b = [=, &x](RandomStream& rng) { return simulate_pickrell_particles(pb, sample_lambda_eq(kp, x, rng), cfg, rng); };
  } else {
    throw std::invalid_argument("check_shifted_intertwine: kind must be L or LambdaEq");
  }
  TestReport r = detail::two_path_test(name, n, shift_b ? detail::control_options(opt) : opt, a, b);
  detail::add_sde_meta(r, t, dt);
  r.meta["s"] = s;
  r.meta["alpha"] = alpha;
  r.meta["x"] = detail::fmt_point(x);
  if (shift_b) {
    r.meta["shift_path_b"] = shift;
    r = detail::as_control(std::move(r), opt.control_level);
    r.name += "-control";
  }
  return r;
}

// ---------------------------------------------------------------------------
// Pickrell ensemble

inline std::vector<OrderedPoint> draw_pickrell(const EnsembleParams& p, std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed);
  McmcOptions mo;
  mo.thin = 50;
  mo.chains = 8;
  return sample_pickrell(p, n, rng, mo, EnsembleMethod::Auto).points;
}

/// Evolved ensemble samples against fresh ones. s_evolve replaces s in the
/// dynamics (control).
inline TestReport check_invariance_pickrell(double s, double alpha, int N, double t, std::size_t n, double dt,
                                            const VerifyOptions& opt, std::optional<double> s_evolve = {}) {
  const EnsembleParams ep(s, alpha, N);
  const PickrellParams pp(s_evolve.value_or(s), alpha, N);
  const SdeConfig cfg(dt, t);
  const auto start = draw_pickrell(ep, n, derive_seed(opt.seed, StreamTag::Ensemble));
  const auto fresh = draw_pickrell(ep, n, derive_seed(opt.seed, StreamTag::Fresh));
  const auto evolved = monte_carlo<OrderedPoint>(n, derive_seed(opt.seed, StreamTag::Evolve), opt.threads,
                                                 [&](RandomStream& rng, std::size_t i) {
                                                   return simulate_pickrell_particles(pp, start[i], cfg, rng);
                                                 });
  EnergyTestOptions eo{s_evolve ? detail::control_options(opt).n_perm : opt.n_perm, opt.threads, opt.level};
  TestReport r = energy_perm_test(evolved, fresh, derive_seed(opt.seed, StreamTag::Permutation), eo, "invariance-pickrell");
  detail::add_sde_meta(r, t, dt);
  r.meta["s"] = s;
  r.meta["alpha"] = alpha;
  r.meta["N"] = static_cast<long long>(N);
  r.meta["seed"] = std::to_string(opt.seed);
  if (s_evolve) {
    r.meta["s_evolve"] = *s_evolve;
    r = detail::as_control(std::move(r), opt.control_level);
    r.name += "-control";
  }
  return r;
}

enum class Consistency { Eq49a, Eq49b, Eq49c };

inline const char* consistency_name(Consistency c) {
  switch (c) {
    case Consistency::Eq49a: return "49a";
    case Consistency::Eq49b: return "49b";
    case Consistency::Eq49c: return "49c";
  }
  return "?";
}

/// 49a: m^{N+1}_{s,α} Λ^{N,N+1}_α = m^N_{s,α}
/// 49b: m^{N+1}_{s,α} L^{N+1}_N = m^N_{s,α+1}
/// 49c: m^N_{s,α+1} Λ^{N,N}_α = m^N_{s,α}
inline TestReport check_consistency(Consistency which, double s, double alpha, int N, std::size_t n,
                                    const VerifyOptions& opt) {
  const KernelParams kp(alpha);
  std::vector<OrderedPoint> source, target;
  const std::uint64_t src_seed = derive_seed(opt.seed, StreamTag::Ensemble);
  const std::uint64_t tgt_seed = derive_seed(opt.seed, StreamTag::Fresh);
  std::function<OrderedPoint(const OrderedPoint&, RandomStream&)> push;
  switch (which) {
    case Consistency::Eq49a:
      source = draw_pickrell(EnsembleParams(s, alpha, N + 1), n, src_seed);
      target = draw_pickrell(EnsembleParams(s, alpha, N), n, tgt_seed);
      push = [&](const OrderedPoint& x, RandomStream& rng) { return sample_lambda_plus(kp, x, rng); };
      break;
    case Consistency::Eq49b:
      source = draw_pickrell(EnsembleParams(s, alpha, N + 1), n, src_seed);
      target = draw_pickrell(EnsembleParams(s, alpha + 1.0, N), n, tgt_seed);
      push = [](const OrderedPoint& x, RandomStream& rng) { return sample_L(x, rng); };
      break;
    case Consistency::Eq49c:
      source = draw_pickrell(EnsembleParams(s, alpha + 1.0, N), n, src_seed);
      target = draw_pickrell(EnsembleParams(s, alpha, N), n, tgt_seed);
      push = [&](const OrderedPoint& x, RandomStream& rng) { return sample_lambda_eq(kp, x, rng); };
      break;
  }
  const auto pushed = monte_carlo<OrderedPoint>(n, derive_seed(opt.seed, StreamTag::Kernel), opt.threads,
                                                [&](RandomStream& rng, std::size_t i) { return push(source[i], rng); });
  EnergyTestOptions eo{opt.n_perm, opt.threads, opt.level};
  TestReport r = energy_perm_test(pushed, target, derive_seed(opt.seed, StreamTag::Permutation), eo,
                                  std::string("consistency-") + consistency_name(which));
  r.meta["s"] = s;
  r.meta["alpha"] = alpha;
  r.meta["N"] = static_cast<long long>(N);
  r.meta["seed"] = std::to_string(opt.seed);
  return r;
}

// ---------------------------------------------------------------------------
// Boundary flow

/// Deterministic start with x_N = α_1 N² and the other N−1 particles evenly
/// spaced (c, 2c, ...) carrying the rest of γ N².
inline OrderedPoint flow_start(int N, double alpha1, double gamma0) {
  if (N < 2) throw std::invalid_argument("flow_start: need N >= 2");
  const double n2 = static_cast<double>(N) * N;
  const double rest = (gamma0 - alpha1) * n2;
  if (!(rest > 0.0)) throw std::invalid_argument("flow_start: need gamma(0) > alpha_1(0)");
  const double c = 2.0 * rest / (static_cast<double>(N) * (N - 1));
  std::vector<double> x(static_cast<std::size_t>(N));
  for (int i = 0; i < N - 1; ++i) x[static_cast<std::size_t>(i)] = c * (i + 1);
  x.back() = alpha1 * n2;
  if (!(x[x.size() - 2] < x.back())) throw std::invalid_argument("flow_start: alpha_1 too small to be the top particle");
  return OrderedPoint(std::move(x));
}

struct FlowStatistics {
  std::vector<double> t;
  std::vector<double> mean_gamma, mean_alpha1, var_gamma;
  std::vector<double> flow_gamma, flow_alpha1;
};

inline FlowStatistics simulate_flow_statistics(double alpha, int N, double alpha1, double gamma0,
                                               const std::vector<double>& t_grid, std::size_t n_paths, double dt,
                                               std::uint64_t seed, unsigned threads) {
  std::vector<double> grid = t_grid;
  std::sort(grid.begin(), grid.end());
  const OrderedPoint x0 = flow_start(N, alpha1, gamma0);
  const double n2 = static_cast<double>(N) * N;
  struct PathRecord {
    std::vector<double> gamma, alpha1;
  };
  const auto paths = monte_carlo<PathRecord>(n_paths, seed, threads, [&](RandomStream& rng, std::size_t) {
    PathRecord rec;
    OrderedPoint x = x0;
    double now = 0.0;
    for (double t : grid) {
      if (t > now) x = simulate_laguerre(alpha, x, SdeConfig(std::min(dt, t - now), t - now), rng);
      now = t;
      rec.gamma.push_back(x.sum() / n2);
      rec.alpha1.push_back(x[x.dim() - 1] / n2);
    }
    return rec;
  });
  FlowStatistics st;
  st.t = grid;
  const BoundaryPoint w0({alpha1}, gamma0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double mg = 0.0, ma = 0.0;
    for (const auto& p : paths) {
      mg += p.gamma[k];
      ma += p.alpha1[k];
    }
    mg /= static_cast<double>(n_paths);
    ma /= static_cast<double>(n_paths);
    double vg = 0.0;
    for (const auto& p : paths) vg += (p.gamma[k] - mg) * (p.gamma[k] - mg);
    vg /= static_cast<double>(n_paths > 1 ? n_paths - 1 : 1);
    const BoundaryPoint w = boundary_flow(w0, grid[k]);
    st.mean_gamma.push_back(mg);
    st.mean_alpha1.push_back(ma);
    st.var_gamma.push_back(vg);
    st.flow_gamma.push_back(w.gamma());
    st.flow_alpha1.push_back(w.alphas()[0]);
  }
  return st;
}

/// max over the grid of |E γ(X_t) − γ(t)| + |E α_1(X_t) − α_1(t)|.
inline TestReport check_flow_convergence(double alpha, int N, double alpha1, double gamma0,
                                         const std::vector<double>& t_grid, std::size_t n_paths, double dt,
                                         const VerifyOptions& opt, double threshold = 0.15) {
  const auto st = simulate_flow_statistics(alpha, N, alpha1, gamma0, t_grid, n_paths, dt,
                                           derive_seed(opt.seed, StreamTag::Evolve), opt.threads);
  double worst = 0.0;
  for (std::size_t k = 0; k < st.t.size(); ++k) {
    worst = std::max(worst, std::abs(st.mean_gamma[k] - st.flow_gamma[k]) + std::abs(st.mean_alpha1[k] - st.flow_alpha1[k]));
  }
  TestReport r = TestReport::deterministic("flow-convergence", worst, threshold);
  r.meta["alpha"] = alpha;
  r.meta["N"] = static_cast<long long>(N);
  r.meta["alpha1_0"] = alpha1;
  r.meta["gamma_0"] = gamma0;
  r.meta["n_paths"] = static_cast<long long>(n_paths);
  r.meta["dt"] = dt;
  r.meta["seed"] = std::to_string(opt.seed);
  for (std::size_t k = 0; k < st.t.size(); ++k) {
    char key[64];
    std::snprintf(key, sizeof key, "mean_gamma@%.9g", st.t[k]);
    r.meta[key] = st.mean_gamma[k];
    std::snprintf(key, sizeof key, "mean_alpha1@%.9g", st.t[k]);
    r.meta[key] = st.mean_alpha1[k];
  }
  return r;
}

/// Var γ(X_t^{N_small}) / Var γ(X_t^{N_large}), expected ≈ (N_large/N_small)².
inline TestReport check_flow_fluctuations(double alpha, int n_small, int n_large, double alpha1, double gamma0, double t,
                                          std::size_t n_paths, double dt, const VerifyOptions& opt, double lo = 2.5,
                                          double hi = 6.5) {
  const std::vector<double> grid{t};
  const auto a = simulate_flow_statistics(alpha, n_small, alpha1, gamma0, grid, n_paths, dt,
                                          derive_seed(opt.seed, StreamTag::PathA), opt.threads);
  const auto b = simulate_flow_statistics(alpha, n_large, alpha1, gamma0, grid, n_paths, dt,
                                          derive_seed(opt.seed, StreamTag::PathB), opt.threads);
  const double ratio = a.var_gamma[0] / b.var_gamma[0];
  TestReport r;
  r.name = "flow-fluctuations";
  r.statistic = ratio;
  r.threshold = hi;
  r.passed = ratio >= lo && ratio <= hi;
  r.meta["lower"] = lo;
  r.meta["upper"] = hi;
  r.meta["N_small"] = static_cast<long long>(n_small);
  r.meta["N_large"] = static_cast<long long>(n_large);
  r.meta["var_small"] = a.var_gamma[0];
  r.meta["var_large"] = b.var_gamma[0];
  r.meta["t"] = t;
  r.meta["seed"] = std::to_string(opt.seed);
  return r;
}

// ---------------------------------------------------------------------------
// Boundary kernels

/// Λ^Ω_{α,N+1} Λ^{N,N+1}_α = Λ^Ω_{α,N}.
inline TestReport check_omega_coherence_plus(int alpha, int N, const BoundaryPoint& omega, std::size_t n,
                                             const VerifyOptions& opt) {
  const KernelParams kp(alpha);
  auto a = [&](RandomStream& rng) { return sample_lambda_plus(kp, sample_lambda_omega(alpha, N + 1, omega, rng), rng); };
  auto b = [&](RandomStream& rng) { return sample_lambda_omega(alpha, N, omega, rng); };
  TestReport r = detail::two_path_test("omega-coherence-plus", n, opt, a, b);
  r.meta["alpha"] = static_cast<long long>(alpha);
  r.meta["N"] = static_cast<long long>(N);
  r.meta["gamma"] = omega.gamma();
  return r;
}

/// Λ^Ω_{α+1,N} Λ^{N,N}_α = Λ^Ω_{α,N}.
inline TestReport check_omega_coherence_eq(int alpha, int N, const BoundaryPoint& omega, std::size_t n,
                                           const VerifyOptions& opt) {
  const KernelParams kp(alpha);
  auto a = [&](RandomStream& rng) { return sample_lambda_eq(kp, sample_lambda_omega(alpha + 1, N, omega, rng), rng); };
  auto b = [&](RandomStream& rng) { return sample_lambda_omega(alpha, N, omega, rng); };
  TestReport r = detail::two_path_test("omega-coherence-eq", n, opt, a, b);
  r.meta["alpha"] = static_cast<long long>(alpha);
  r.meta["N"] = static_cast<long long>(N);
  r.meta["gamma"] = omega.gamma();
  return r;
}

/// Empirical E cos(r Re X_11) against F_ω(r); statistic is the largest
/// deviation in standard errors.
inline TestReport check_omega_charfn(const BoundaryPoint& omega, const std::vector<double>& freqs, std::size_t n,
                                     const VerifyOptions& opt, double threshold = 3.0) {
  const auto re = monte_carlo<double>(n, derive_seed(opt.seed, StreamTag::Misc), opt.threads,
                                      [&](RandomStream& rng, std::size_t) { return sample_P_omega_corner(omega, 1, 1, rng)(0, 0).real(); });
  double worst = 0.0;
  TestReport r;
  for (double f : freqs) {
    double m = 0.0, m2 = 0.0;
    for (double v : re) {
      const double c = std::cos(f * v);
      m += c;
      m2 += c * c;
    }
    m /= static_cast<double>(n);
    const double var = std::max(m2 / static_cast<double>(n) - m * m, 1e-300);
    const double se = std::sqrt(var / static_cast<double>(n));
    const double z = std::abs(m - char_F_omega(omega, f)) / se;
    worst = std::max(worst, z);
    char key[48];
    std::snprintf(key, sizeof key, "empirical@%.9g", f);
    r.meta[key] = m;
  }
  r.name = "omega-charfn";
  r.statistic = worst;
  r.threshold = threshold;
  r.passed = worst <= threshold;
  r.meta["n"] = static_cast<long long>(n);
  r.meta["gamma"] = omega.gamma();
  r.meta["seed"] = std::to_string(opt.seed);
  return r;
}

// ---------------------------------------------------------------------------
// Branching

/// All partitions with at most `len` parts and weight ≤ max_weight.
inline std::vector<Partition> partitions_up_to(int max_weight, std::size_t len) {
  std::vector<Partition> out;
  std::vector<int> cur(len, 0);
  std::function<void(std::size_t, int, int)> rec = [&](std::size_t i, int left, int cap) {
    if (i == len) {
      out.emplace_back(cur);
      return;
    }
    for (int v = 0; v <= std::min(left, cap); ++v) {
      cur[i] = v;
      rec(i + 1, left - v, v);
    }
  };
  rec(0, max_weight, max_weight);
  return out;
}

inline TestReport check_branching_row_sums(const JacobiParams& p, int max_weight = 6, std::size_t max_N = 2,
                                           double threshold = 1e-10) {
  double worst = 0.0, min_weight = INFINITY;
  long rows = 0;
  for (std::size_t N = 1; N <= max_N; ++N) {
    for (const auto& lambda : partitions_up_to(max_weight, N + 1)) {
      double total = 0.0;
      for (const auto& [nu, w] : discrete_kernel_row(lambda, N, p)) {
        total += w;
        min_weight = std::min(min_weight, w);
      }
      worst = std::max(worst, std::abs(total - 1.0));
      ++rows;
    }
  }
  TestReport r = TestReport::deterministic("branching-row-sums", worst, threshold);
  r.passed = r.passed && min_weight >= 0.0;
  r.meta["alpha"] = p.alpha;
  r.meta["beta"] = p.beta;
  r.meta["rows"] = rows;
  r.meta["min_weight"] = min_weight;
  return r;
}

/// Neville extrapolation to ε = 0 of f(ε_k).
inline double extrapolate_to_zero(const std::vector<double>& eps, std::vector<double> f) {
  const std::size_t m = eps.size();
  for (std::size_t level = 1; level < m; ++level) {
    for (std::size_t i = m - 1; i >= level; --i) {
      f[i] = (eps[i - level] * f[i] - eps[i] * f[i - 1]) / (eps[i - level] - eps[i]);
      if (i == level) break;
    }
  }
  return f[m - 1];
}

/// 𝔓_λ(1 − ε·(0, 1, …, n−1)) extrapolated to ε → 0.
inline double mv_jacobi_limit_at_one(const Partition& lambda, std::size_t n, const JacobiParams& p) {
  const std::size_t m = static_cast<std::size_t>(lambda.weight()) + 3;
  std::vector<double> eps(m), f(m);
  for (std::size_t k = 0; k < m; ++k) {
    eps[k] = 0.2 * std::ldexp(1.0, -static_cast<int>(k));
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = 1.0 - eps[k] * static_cast<double>(i);
    f[k] = mv_jacobi(lambda, xs, p);
  }
  return extrapolate_to_zero(eps, f);
}

inline TestReport check_mv_jacobi_at_one(const JacobiParams& p, int max_weight = 4, std::size_t max_n = 3,
                                         double threshold = 1e-6) {
  double worst = 0.0;
  long count = 0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    for (const auto& lambda : partitions_up_to(max_weight, n)) {
      const double closed = mv_jacobi_at_one(lambda, n, p);
      const double limit = mv_jacobi_limit_at_one(lambda, n, p);
      worst = std::max(worst, std::abs(closed - limit) / std::abs(closed));
      ++count;
    }
  }
  TestReport r = TestReport::deterministic("mv-jacobi-at-one", worst, threshold);
  r.meta["alpha"] = p.alpha;
  r.meta["beta"] = p.beta;
  r.meta["partitions"] = count;
  return r;
}

/// Discrepancy at κ_large below `threshold` and below the one at κ_small.
inline TestReport check_scaling_limit(const Partition& lambda, long kappa_small, long kappa_large,
                                      const JacobiParams& p, double threshold = 0.05) {
  const auto small = compare_scaling_limit(lambda, kappa_small, p.alpha, p);
  const auto large = compare_scaling_limit(lambda, kappa_large, p.alpha, p);
  TestReport r = TestReport::deterministic("branching-scaling-limit", large.discrepancy, threshold);
  r.passed = r.passed && large.discrepancy < small.discrepancy;
  r.meta["kappa_small"] = static_cast<long long>(kappa_small);
  r.meta["kappa_large"] = static_cast<long long>(kappa_large);
  r.meta["discrepancy_small"] = small.discrepancy;
  r.meta["row_mass_large"] = large.row_mass;
  r.meta["alpha"] = p.alpha;
  r.meta["beta"] = p.beta;
  return r;
}

// ---------------------------------------------------------------------------
// Suites

enum class Suite { Identities, Samplers, Intertwine, Invariance, Consistency, Flow, Boundary, BranchingLimit, All };

inline std::optional<Suite> parse_suite(std::string_view s) {
  if (s == "identities") return Suite::Identities;
  if (s == "samplers") return Suite::Samplers;
  if (s == "intertwine") return Suite::Intertwine;
  if (s == "invariance") return Suite::Invariance;
  if (s == "consistency") return Suite::Consistency;
  if (s == "flow") return Suite::Flow;
  if (s == "boundary") return Suite::Boundary;
  if (s == "branching-limit") return Suite::BranchingLimit;
  if (s == "all") return Suite::All;
  return std::nullopt;
}

inline VerifyOptions with_seed_for(const VerifyOptions& opt, std::string_view check) {
  VerifyOptions o = opt;
  o.seed = derive_seed(opt.seed, name_hash(check));
  return o;
}

inline std::size_t scaled(std::size_t n, const VerifyOptions& opt) {
  return std::max<std::size_t>(100, static_cast<std::size_t>(std::llround(static_cast<double>(n) * opt.scale)));
}

inline std::vector<TestReport> run_suite(Suite suite, const VerifyOptions& opt) {
  std::vector<TestReport> out;
  const bool all = suite == Suite::All;
  const OrderedPoint x12({1.0, 2.0});
  const OrderedPoint x123({1.0, 2.0, 3.0});
  const OrderedPoint x1({1.0});
  const OrderedPoint x12eq({1.0, 2.0});

  if (all || suite == Suite::Identities) {
    RandomStream rng(derive_seed(opt.seed, name_hash("identities")));
    for (int N : {1, 2, 3, 5}) {
      std::vector<OrderedPoint> pts;
      for (int k = 0; k < 100; ++k) {
        std::vector<double> v(static_cast<std::size_t>(N));
        for (double& c : v) c = rng.uniform(0.1, 5.0);
        pts.push_back(OrderedPoint::from_unsorted(v));
      }
      const double s = rng.uniform(-0.5, 3.0), a = rng.uniform(-0.5, 3.0);
      out.push_back(check_vandermonde_eigen(s, a, pts));
      out.push_back(check_drift_identity(PickrellParams(s, a, N), pts));
      std::vector<double> xs;
      for (int k = 0; k < 100; ++k) xs.push_back(rng.uniform(0.1, 5.0));
      out.push_back(check_h_transform_identities(s, a, N, xs));
    }
    out.push_back(check_constants_identity(rng));
    for (double a : {0.0, 0.5, 2.0}) {
      out.push_back(check_kernel_normalization(KernelKind::L, a, x12));
      out.push_back(check_kernel_normalization(KernelKind::L, a, x123));
      out.push_back(check_kernel_normalization(KernelKind::LambdaEq, a, x1));
      out.push_back(check_kernel_normalization(KernelKind::LambdaEq, a, x12eq));
      out.push_back(check_kernel_normalization(KernelKind::LambdaPlus, a, x12));
      out.push_back(check_kernel_normalization(KernelKind::LambdaPlus, a, x123));
    }
    for (double a : {0.0, 1.0}) out.push_back(check_decomposition(a, x12));
    for (double a : {0.0, 1.0}) {
      for (double b : {0.0, 1.0}) out.push_back(check_branching_row_sums(JacobiParams(a, b)));
    }
    out.push_back(check_mv_jacobi_at_one(JacobiParams(0.0, 0.0)));
    out.push_back(check_mv_jacobi_at_one(JacobiParams(1.0, 0.5)));
  }
  if (all || suite == Suite::Samplers) {
    out.push_back(check_lambda_plus_ks(0.0, x12, scaled(100000, opt), with_seed_for(opt, "ks-lambda-plus")));
    out.push_back(check_matrix_cross(KernelKind::LambdaPlus, 0, x12, scaled(20000, opt), with_seed_for(opt, "cross-1-0")));
    out.push_back(check_matrix_cross(KernelKind::LambdaPlus, 1, x123, scaled(20000, opt), with_seed_for(opt, "cross-2-1")));
    out.push_back(check_matrix_cross(KernelKind::LambdaEq, 1, x12eq, scaled(20000, opt), with_seed_for(opt, "cross-eq")));
  }
  if (all || suite == Suite::Intertwine) {
    const std::size_t n = scaled(20000, opt);
    out.push_back(check_intertwine_laguerre(0.0, x12, 0.5, n, 1e-3, with_seed_for(opt, "laguerre-1-0")));
    out.push_back(check_intertwine_laguerre(1.0, x123, 0.5, n, 1e-3, with_seed_for(opt, "laguerre-2-1")));
    out.push_back(check_intertwine_laguerre(0.0, x12, 0.5, n, 1e-3, with_seed_for(opt, "laguerre-control"), 2.0));
    out.push_back(check_intertwine_pickrell(1.0, 0.0, x12, 0.5, n, 1e-3, with_seed_for(opt, "pickrell-1-1-0")));
    out.push_back(check_intertwine_pickrell(1.0, 0.5, x123, 0.5, n, 1e-3, with_seed_for(opt, "pickrell-2-1-0.5")));
    out.push_back(check_intertwine_pickrell(1.0, 0.0, x12, 0.5, n, 1e-3, with_seed_for(opt, "pickrell-control"), 3.0));
    out.push_back(check_shifted_intertwine(KernelKind::L, 1.0, 0.0, x12, 0.5, n, 1e-3, with_seed_for(opt, "shift-L-1")));
    out.push_back(check_shifted_intertwine(KernelKind::L, 1.0, 0.5, x123, 0.5, n, 1e-3, with_seed_for(opt, "shift-L-2")));
    out.push_back(check_shifted_intertwine(KernelKind::LambdaEq, 1.0, 0.0, x1, 0.5, n, 1e-3, with_seed_for(opt, "shift-eq-1")));
    out.push_back(check_shifted_intertwine(KernelKind::LambdaEq, 1.0, 0.5, x12eq, 0.5, n, 1e-3, with_seed_for(opt, "shift-eq-2")));
  }
  if (all || suite == Suite::Invariance) {
    const std::size_t n = scaled(10000, opt);
    for (int N : {1, 2}) {
      for (double a : {0.0, 1.0}) {
        out.push_back(check_invariance_pickrell(1.0, a, N, 0.5, n, 1e-3,
                                                with_seed_for(opt, "invariance-" + std::to_string(N) + "-" + std::to_string(a))));
      }
    }
    out.push_back(check_invariance_pickrell(1.0, 0.0, 1, 0.5, n, 1e-3, with_seed_for(opt, "invariance-control"), 3.0));
  }
  if (all || suite == Suite::Consistency) {
    const std::size_t n = scaled(10000, opt);
    for (auto which : {Consistency::Eq49a, Consistency::Eq49b, Consistency::Eq49c}) {
      for (int N : {1, 2}) {
        for (double a : {0.0, 1.0}) {
          out.push_back(check_consistency(which, 1.0, a, N, n,
                                          with_seed_for(opt, std::string("consistency-") + consistency_name(which) +
                                                                 std::to_string(N) + std::to_string(a))));
        }
      }
    }
  }
  if (all || suite == Suite::Flow) {
    const std::size_t paths = scaled(500, opt);
    out.push_back(check_flow_convergence(0.0, 50, 0.5, 3.0, {0.25, 0.5, 1.0}, paths, 1e-3, with_seed_for(opt, "flow")));
    out.push_back(check_flow_fluctuations(0.0, 25, 50, 0.5, 3.0, 1.0, paths, 1e-3, with_seed_for(opt, "flow-var")));
  }
  if (all || suite == Suite::Boundary) {
    const BoundaryPoint omega({0.5}, 1.0);
    const std::size_t n = scaled(20000, opt);
    out.push_back(check_omega_coherence_plus(0, 1, omega, n, with_seed_for(opt, "omega-plus")));
    out.push_back(check_omega_coherence_eq(0, 1, omega, n, with_seed_for(opt, "omega-eq")));
    const std::vector<double> freqs{0.1, 0.3, 0.5, 1.0, 2.0};
    for (const auto& w : {BoundaryPoint({}, 1.0), BoundaryPoint({0.5}, 0.5), BoundaryPoint({0.5, 0.2}, 1.0)}) {
      out.push_back(check_omega_charfn(w, freqs, scaled(100000, opt), with_seed_for(opt, "charfn")));
    }
  }
  if (all || suite == Suite::BranchingLimit) {
    out.push_back(check_scaling_limit(Partition({2, 1}), 50, 500, JacobiParams(0.0, 0.0)));
    out.push_back(check_scaling_limit(Partition({2, 1}), 50, 500, JacobiParams(1.0, 1.0)));
  }
  return out;
}

}  // namespace interlace
