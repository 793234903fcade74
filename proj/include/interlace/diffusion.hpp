#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chamber.hpp"
#include "matrix_model.hpp"
#include "parallel.hpp"
#include "random.hpp"

namespace interlace {

enum class Scheme { EulerGuarded, MatrixLift };

struct SdeConfig {
  double dt = 1e-3;
  double t = 0.0;
  Scheme scheme = Scheme::EulerGuarded;

  SdeConfig(double dt_, double t_, Scheme scheme_ = Scheme::EulerGuarded) : dt(dt_), t(t_), scheme(scheme_) {
    if (!(dt > 0.0)) throw std::invalid_argument("SdeConfig: dt must be positive");
    if (!(t >= 0.0)) throw std::invalid_argument("SdeConfig: horizon must be non-negative");
    if (t > 0.0 && dt > t) throw std::invalid_argument("SdeConfig: dt must not exceed the horizon");
  }

  /// Number of steps; the actual step t/steps() never exceeds dt.
  long steps() const {
    if (t == 0.0) return 0;
    return std::max(1L, static_cast<long>(std::ceil(t / dt - 1e-9)));
  }
  double step() const { return steps() == 0 ? 0.0 : t / static_cast<double>(steps()); }
};

struct PickrellParams {
  double s = 0.0;
  double alpha = 0.0;
  int n = 1;

  PickrellParams(double s_, double alpha_, int n_) : s(s_), alpha(alpha_), n(n_) {
    if (!(alpha > -1.0)) throw std::invalid_argument("PickrellParams: alpha must exceed -1");
    if (n < 1) throw std::invalid_argument("PickrellParams: N must be positive");
  }
};

/// Counters for the repairs applied by the guarded Euler scheme.
struct GuardStats {
  long steps = 0;
  long guarded_steps = 0;
  long reflections = 0;
  long nudges = 0;
  /// Bisections of a step (Brownian-bridge refinements).
  long refinements = 0;

  GuardStats& operator+=(const GuardStats& o) {
    steps += o.steps;
    guarded_steps += o.guarded_steps;
    reflections += o.reflections;
    nudges += o.nudges;
    refinements += o.refinements;
    return *this;
  }
  double guarded_fraction() const { return steps == 0 ? 0.0 : static_cast<double>(guarded_steps) / steps; }
};

namespace detail {

inline void require_distinct(std::span<const double> x, const char* who) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      if (x[i] == x[j]) throw std::invalid_argument(std::string(who) + ": coincident coordinates");
    }
  }
}

inline void laguerre_drift_into(double alpha, std::span<const double> x, std::span<double> out) {
  const std::size_t n = x.size();
  const double base = alpha + static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = -x[i] + base;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double term = (x[i] + x[j]) / (x[i] - x[j]);
      out[i] += term;
      out[j] -= term;
    }
  }
}

/// Symmetrized form: −s x_i + N + α + Σ (2x_i x_j + x_i + x_j)/(x_i − x_j).
inline void pickrell_drift_into(double s, double alpha, std::span<const double> x, std::span<double> out) {
  const std::size_t n = x.size();
  const double base = static_cast<double>(n) + alpha;
  for (std::size_t i = 0; i < n; ++i) out[i] = -s * x[i] + base;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double term = (2.0 * x[i] * x[j] + x[i] + x[j]) / (x[i] - x[j]);
      out[i] += term;
      out[j] -= term;
    }
  }
}

/// Reflect negatives, sort, and push apart exact coincidences (and exact zeros).
inline bool guard_state(std::vector<double>& x, GuardStats& stats) {
  bool touched = false;
  for (double& v : x) {
    if (v < 0.0) {
      v = -v;
      ++stats.reflections;
      touched = true;
    }
  }
  std::sort(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double floor_v = i == 0 ? 0.0 : x[i - 1];
    if (x[i] <= floor_v) {
      x[i] = floor_v + 1e-12 * (1.0 + std::abs(floor_v));
      ++stats.nudges;
      touched = true;
    }
  }
  return touched;
}

/// A step may move a particle by at most this fraction of its distance to the
/// nearest neighbour (or to 0); otherwise it is bisected.
inline constexpr double kMaxMoveFraction = 0.5;
inline constexpr int kMaxRefineDepth = 30;

/// Euler–Maruyama with adaptive bisection on a Brownian tree: a rejected step
/// of size h with increment dW is split into two halves whose increments are
/// drawn from the Brownian bridge. Past kMaxRefineDepth the step is accepted
/// and repaired by guard_state.
template <class Drift, class Sigma>
OrderedPoint euler_guarded(const OrderedPoint& x0, const SdeConfig& cfg, RandomStream& rng, GuardStats* stats,
                           Drift&& drift, Sigma&& sigma, const char* who) {
  if (cfg.scheme != Scheme::EulerGuarded) throw std::invalid_argument(std::string(who) + ": needs EulerGuarded scheme");
  if (x0.domain() != Domain::NonNegative) throw std::invalid_argument(std::string(who) + ": start must be non-negative");
  const long steps = cfg.steps();
  if (steps == 0) return x0;
  const double h = cfg.step();
  const double sqrt_h = std::sqrt(h);
  const std::size_t n = x0.dim();
  std::vector<double> x = x0.vec();
  std::vector<double> b(n), trial(n), dw(n);
  GuardStats local;
  // A start on the boundary of the chamber gets the same repair as a step would.
  guard_state(x, local);

  auto attempt = [&](const std::vector<double>& from, double hh, const std::vector<double>& inc) {
    drift(std::span<const double>(from), std::span<double>(b));
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      trial[i] = from[i] + b[i] * hh + sigma(std::max(from[i], 0.0)) * inc[i];
      const double below = i == 0 ? from[0] : from[i] - from[i - 1];
      const double above = i + 1 < n ? from[i + 1] - from[i] : INFINITY;
      if (!(std::abs(trial[i] - from[i]) <= kMaxMoveFraction * std::min(below, above))) ok = false;
    }
    return ok;
  };

  std::function<void(std::vector<double>&, double, const std::vector<double>&, int)> advance =
      [&](std::vector<double>& state, double hh, const std::vector<double>& inc, int depth) {
        if (attempt(state, hh, inc) || depth >= kMaxRefineDepth) {
          const bool forced = depth >= kMaxRefineDepth;
          state = trial;
          for (double v : state) {
            if (!std::isfinite(v)) throw std::runtime_error(std::string(who) + ": non-finite state");
          }
          if (guard_state(state, local) || forced) ++local.guarded_steps;
          return;
        }
        ++local.refinements;
        const double half = 0.5 * hh;
        const double bridge_sd = 0.5 * std::sqrt(hh);
        std::vector<double> first(n), second(n);
        for (std::size_t i = 0; i < n; ++i) {
          first[i] = 0.5 * inc[i] + bridge_sd * rng.normal();
          second[i] = inc[i] - first[i];
        }
        advance(state, half, first, depth + 1);
        advance(state, half, second, depth + 1);
      };

  for (long k = 0; k < steps; ++k) {
    for (std::size_t i = 0; i < n; ++i) dw[i] = sqrt_h * rng.normal();
    advance(x, h, dw, 0);
    ++local.steps;
  }
  if (stats) *stats += local;
  return OrderedPoint(std::move(x));
}

}  // namespace detail

inline std::vector<double> laguerre_drift(double alpha, const OrderedPoint& x) {
  detail::require_distinct(x.coords(), "laguerre_drift");
  std::vector<double> out(x.dim());
  detail::laguerre_drift_into(alpha, x.coords(), out);
  return out;
}

enum class PickrellForm {
  /// (2 − 2N − s) x_i + α + 1 + Σ 2x_i(1 + x_i)/(x_i − x_j)
  Standard,
  /// −s x_i + N + α + Σ (2x_i x_j + x_i + x_j)/(x_i − x_j)
  Symmetrized,
};

inline std::vector<double> pickrell_drift(const PickrellParams& p, const OrderedPoint& x,
                                          PickrellForm form = PickrellForm::Standard) {
  detail::require_distinct(x.coords(), "pickrell_drift");
  const std::size_t n = x.dim();
  std::vector<double> out(n);
  if (form == PickrellForm::Symmetrized) {
    detail::pickrell_drift_into(p.s, p.alpha, x.coords(), out);
    return out;
  }
  const double lin = 2.0 - 2.0 * static_cast<double>(n) - p.s;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = lin * x[i] + p.alpha + 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) acc += 2.0 * x[i] * (1.0 + x[i]) / (x[i] - x[j]);
    }
    out[i] = acc;
  }
  return out;
}

/// Laguerre (OU) particle system, dX = √(2X) dB + (−X + α + N + Σ (X_i+X_j)/(X_i−X_j)) dt.
inline OrderedPoint simulate_laguerre(double alpha, const OrderedPoint& x0, const SdeConfig& cfg, RandomStream& rng,
                                      GuardStats* stats = nullptr) {
  if (!(alpha > -1.0)) throw std::invalid_argument("simulate_laguerre: alpha must exceed -1");
  return detail::euler_guarded(
      x0, cfg, rng, stats, [alpha](std::span<const double> x, std::span<double> b) { detail::laguerre_drift_into(alpha, x, b); },
      [](double v) { return std::sqrt(2.0 * v); }, "simulate_laguerre");
}

/// Pickrell particle system via the symmetrized drift, diffusion √(2X(1+X)).
inline OrderedPoint simulate_pickrell_particles(const PickrellParams& p, const OrderedPoint& x0, const SdeConfig& cfg,
                                                RandomStream& rng, GuardStats* stats = nullptr) {
  if (static_cast<std::size_t>(p.n) != x0.dim()) throw std::invalid_argument("simulate_pickrell_particles: dim(x0) != N");
  return detail::euler_guarded(
      x0, cfg, rng, stats,
      [&p](std::span<const double> x, std::span<double> b) { detail::pickrell_drift_into(p.s, p.alpha, x, b); },
      [](double v) { return std::sqrt(2.0 * v * (1.0 + v)); }, "simulate_pickrell_particles");
}

/// Entrywise complex OU, dH = dβ − H/2 dt with E|dβ|² = dt, advanced by its
/// exact Gaussian transition over each step.
inline void evolve_ou_matrix(ComplexMatrix& h, const SdeConfig& cfg, RandomStream& rng) {
  const long steps = cfg.steps();
  if (steps == 0) return;
  const double dt = cfg.step();
  const double decay = std::exp(-0.5 * dt);
  const double noise = std::sqrt(-std::expm1(-dt));
  for (long k = 0; k < steps; ++k) h = decay * h + noise * sample_ginibre(h.rows(), h.cols(), rng);
}

/// Laguerre process as the radial part of an (N+α)×N matrix OU started at [diag(√x0); 0].
inline OrderedPoint simulate_laguerre_matrix(int alpha, const OrderedPoint& x0, const SdeConfig& cfg, RandomStream& rng) {
  if (cfg.scheme != Scheme::MatrixLift) throw std::invalid_argument("simulate_laguerre_matrix: needs MatrixLift scheme");
  if (alpha < 0) throw std::invalid_argument("simulate_laguerre_matrix: alpha must be a non-negative integer");
  const Eigen::Index n = static_cast<Eigen::Index>(x0.dim());
  ComplexMatrix h = ComplexMatrix::Zero(n + alpha, n);
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = std::sqrt(x0[static_cast<std::size_t>(i)]);
  evolve_ou_matrix(h, cfg, rng);
  return radial_part(h);
}

/// Euler scheme for dX = √(X/2) dW √(I+X) + √(I+X) dW* √(X/2) + (−sX + (N+α)I) dt,
/// with E|dW_jk|² = 2dt, Hermitian symmetrization and projection onto X ≥ 0.
inline OrderedPoint simulate_pickrell_matrix(const PickrellParams& p, const OrderedPoint& x0, const SdeConfig& cfg,
                                             RandomStream& rng) {
  if (cfg.scheme != Scheme::MatrixLift) throw std::invalid_argument("simulate_pickrell_matrix: needs MatrixLift scheme");
  if (x0.domain() != Domain::NonNegative) throw std::invalid_argument("simulate_pickrell_matrix: start must be non-negative");
  const Eigen::Index n = static_cast<Eigen::Index>(x0.dim());
  if (n != p.n) throw std::invalid_argument("simulate_pickrell_matrix: dim(x0) != N");
  using Mat = Eigen::MatrixXcd;
  Mat x = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) x(i, i) = x0[static_cast<std::size_t>(i)];
  const long steps = cfg.steps();
  const double h = cfg.step();
  // Real and imaginary parts of dW each have variance h.
  const double dw_scale = std::sqrt(2.0 * h);
  Eigen::SelfAdjointEigenSolver<Mat> eig;
  for (long k = 0; k < steps; ++k) {
    eig.compute(x);
    if (eig.info() != Eigen::Success) throw std::runtime_error("simulate_pickrell_matrix: eigendecomposition failed at step " + std::to_string(k));
    const Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
    const Mat& v = eig.eigenvectors();
    const Mat a = v * (lam / 2.0).cwiseSqrt().asDiagonal() * v.adjoint();
    const Mat b = v * (lam.array() + 1.0).sqrt().matrix().asDiagonal() * v.adjoint();
    const Mat dw = dw_scale * sample_ginibre(n, n, rng);
    const Mat x_psd = v * lam.asDiagonal() * v.adjoint();
    Mat next = x_psd + a * dw * b + b * dw.adjoint() * a +
               (-p.s * x_psd + (static_cast<double>(n) + p.alpha) * Mat::Identity(n, n)) * h;
    x = 0.5 * (next + next.adjoint());
    if (!x.allFinite()) throw std::runtime_error("simulate_pickrell_matrix: non-finite state at step " + std::to_string(k));
  }
  eig.compute(x, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw std::runtime_error("simulate_pickrell_matrix: final eigendecomposition failed");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::max(0.0, eig.eigenvalues()(i));
  return OrderedPoint::from_unsorted(std::move(out));
}

/// The deterministic boundary flow α_i(t) = α_i(0) e^{−t}, γ(t) = 1 + (γ(0) − 1) e^{−t}.
inline BoundaryPoint boundary_flow(const BoundaryPoint& omega0, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("boundary_flow: t must be non-negative");
  const double decay = std::exp(-t);
  std::vector<double> alphas = omega0.alphas();
  for (double& a : alphas) a *= decay;
  const double gamma = 1.0 + (omega0.gamma() - 1.0) * decay;
  // Σα(t) ≤ γ(t) holds exactly in real arithmetic; absorb rounding.
  double total = 0.0;
  for (double a : alphas) total += a;
  return BoundaryPoint(std::move(alphas), std::max(gamma, total));
}

/// Runs fn(rng, i) for each path with rng derived from (seed, i) only,
/// so results do not depend on the worker count.
template <class T, class Fn>
std::vector<T> monte_carlo(std::size_t n_paths, std::uint64_t seed, unsigned threads, Fn&& fn) {
  return parallel_map<T>(n_paths, threads, [&](std::size_t i) {
    RandomStream rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    return fn(rng, i);
  });
}

}  // namespace interlace
