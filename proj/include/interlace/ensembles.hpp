#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "chamber.hpp"
#include "matrix_model.hpp"
#include "parallel.hpp"
#include "random.hpp"

namespace interlace {

struct EnsembleParams {
  double s = 0.0;
  double alpha = 0.0;
  int n = 1;

  EnsembleParams(double s_, double alpha_, int n_) : s(s_), alpha(alpha_), n(n_) {
    if (!(alpha > -1.0)) throw std::invalid_argument("EnsembleParams: alpha must exceed -1");
    if (n < 1) throw std::invalid_argument("EnsembleParams: N must be positive");
  }
};

/// log of Δ_N²(x) ∏ x_k^α (1+x_k)^{−2N−α−s}; −inf where the density vanishes.
inline double pickrell_log_density_unnorm(const EnsembleParams& p, std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double tail = -2.0 * n - p.alpha - p.s;
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0)) return -INFINITY;
    acc += p.alpha * std::log(x[i]) + tail * std::log1p(x[i]);
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double d = x[j] - x[i];
      if (d == 0.0) return -INFINITY;
      acc += 2.0 * std::log(std::abs(d));
    }
  }
  return acc;
}

inline double pickrell_density_unnorm(const EnsembleParams& p, const OrderedPoint& x) {
  if (x.dim() != static_cast<std::size_t>(p.n)) throw std::invalid_argument("pickrell_density_unnorm: dim(x) != N");
  if (x.dim() > 0 && x[0] < 0.0) return 0.0;
  return std::exp(pickrell_log_density_unnorm(p, x.coords()));
}

/// Δ_N²(x) ∏ x_k^α e^{−x_k}.
inline double laguerre_density_unnorm(double alpha, const OrderedPoint& x) {
  if (x.dim() > 0 && x[0] < 0.0) return 0.0;
  double r = 1.0;
  for (std::size_t i = 0; i < x.dim(); ++i) r *= std::pow(x[i], alpha) * std::exp(-x[i]);
  const double v = vandermonde(x);
  return r * v * v;
}

struct McmcOptions {
  long burn_in = 10'000;
  long thin = 10;
  double step = 0.5;
  /// Independent chains; samples are split evenly (in chain order).
  int chains = 1;
  unsigned threads = 0;
};

enum class EnsembleMethod { Auto, Mcmc, Exact };

struct EnsembleSample {
  std::vector<OrderedPoint> points;
  /// NaN when an exact sampler was used.
  double acceptance_rate = NAN;
  McmcOptions options;
  bool exact = false;
  std::string method;
};

namespace detail {

struct ChainResult {
  std::vector<OrderedPoint> points;
  long accepted = 0;
  long proposed = 0;
};

inline ChainResult pickrell_chain(const EnsembleParams& p, std::size_t count, const McmcOptions& opt, RandomStream rng) {
  const std::size_t n = static_cast<std::size_t>(p.n);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i + 1);
  auto log_target = [&](const std::vector<double>& v) {
    // Random walk on log-coordinates: include the Jacobian ∏ x_i.
    double acc = pickrell_log_density_unnorm(p, v);
    for (double c : v) acc += std::log(c);
    return acc;
  };
  double cur = log_target(x);
  ChainResult out;
  out.points.reserve(count);
  const long total = opt.burn_in + static_cast<long>(count) * opt.thin;
  for (long it = 0; it < total; ++it) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] * std::exp(opt.step * rng.normal());
    std::sort(y.begin(), y.end());
    const double prop = log_target(y);
    ++out.proposed;
    if (std::log(rng.uniform()) < prop - cur) {
      x.swap(y);
      cur = prop;
      ++out.accepted;
    }
    if (it >= opt.burn_in && (it - opt.burn_in + 1) % opt.thin == 0) out.points.emplace_back(x);
  }
  return out;
}

}  // namespace detail

inline bool is_nonneg_integer(double v) { return v >= 0.0 && v == std::floor(v) && v < 1e6; }

/// Exact draw for integer α, s ≥ 0: eigenvalues of W_2^{−1}W_1 with W_1 = A*A,
/// W_2 = B*B, A ~ Ginibre (N+α)×N, B ~ Ginibre (N+s)×N.
inline OrderedPoint sample_pickrell_matrix_model(const EnsembleParams& p, RandomStream& rng) {
  if (!is_nonneg_integer(p.alpha) || !is_nonneg_integer(p.s)) {
    throw std::invalid_argument("sample_pickrell_matrix_model: alpha and s must be non-negative integers");
  }
  const Eigen::Index n = p.n;
  const ComplexMatrix a = sample_ginibre(n + static_cast<Eigen::Index>(p.alpha), n, rng);
  const ComplexMatrix b = sample_ginibre(n + static_cast<Eigen::Index>(p.s), n, rng);
  const ComplexMatrix w1 = a.adjoint() * a;
  const ComplexMatrix w2 = b.adjoint() * b;
  Eigen::LLT<ComplexMatrix> llt(w2);
  if (llt.info() != Eigen::Success) throw std::runtime_error("sample_pickrell_matrix_model: Cholesky failed");
  const ComplexMatrix l_inv = llt.matrixL().solve(ComplexMatrix::Identity(n, n));
  ComplexMatrix c = l_inv * w1 * l_inv.adjoint();
  c = 0.5 * (c + c.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(c, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw std::runtime_error("sample_pickrell_matrix_model: eigensolver failed");
  std::vector<double> x(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = std::max(0.0, eig.eigenvalues()(i));
  return OrderedPoint::from_unsorted(std::move(x));
}

inline bool pickrell_exact_available(const EnsembleParams& p) {
  return p.n == 1 || (is_nonneg_integer(p.alpha) && is_nonneg_integer(p.s));
}

/// Samples of the Pickrell ensemble m^N_{s,α}.
///   Exact: N = 1 via x = u/(1−u), u ~ Beta(α+1, s+1) (inverse CDF when α = 0);
///          integer α, s ≥ 0 via the Wishart-ratio model.
///   Mcmc:  random-walk Metropolis on log-coordinates.
/// Auto picks Exact when available.
inline EnsembleSample sample_pickrell(const EnsembleParams& p, std::size_t n_samples, RandomStream& rng,
                                      McmcOptions opt = {}, EnsembleMethod method = EnsembleMethod::Mcmc) {
  if (!(p.s > -1.0)) throw std::invalid_argument("sample_pickrell: s must exceed -1 (otherwise the mass is infinite)");
  if (opt.thin < 1 || opt.burn_in < 0 || opt.chains < 1 || !(opt.step > 0.0)) {
    throw std::invalid_argument("sample_pickrell: invalid MCMC options");
  }
  EnsembleSample result;
  result.options = opt;
  const bool exact_ok = pickrell_exact_available(p);
  if (method == EnsembleMethod::Exact && !exact_ok) {
    throw std::invalid_argument("sample_pickrell: no exact sampler for these parameters");
  }
  const bool use_exact = method == EnsembleMethod::Exact || (method == EnsembleMethod::Auto && exact_ok) ||
                         (p.n == 1 && p.alpha == 0.0);
  if (use_exact) {
    result.exact = true;
    result.points.reserve(n_samples);
    if (p.n == 1 && p.alpha == 0.0) {
      result.method = "inverse-cdf";
      for (std::size_t k = 0; k < n_samples; ++k) {
        const double u = rng.uniform();
        result.points.emplace_back(std::vector<double>{std::expm1(-std::log(u) / (1.0 + p.s))});
      }
    } else if (p.n == 1) {
      result.method = "beta";
      std::gamma_distribution<double> ga(p.alpha + 1.0, 1.0), gb(p.s + 1.0, 1.0);
      for (std::size_t k = 0; k < n_samples; ++k) {
        const double g1 = ga(rng.engine());
        const double g2 = gb(rng.engine());
        result.points.emplace_back(std::vector<double>{g1 / g2});
      }
    } else {
      result.method = "wishart-ratio";
      for (std::size_t k = 0; k < n_samples; ++k) result.points.push_back(sample_pickrell_matrix_model(p, rng));
    }
    return result;
  }
  result.method = "mcmc";
  const std::size_t chains = static_cast<std::size_t>(opt.chains);
  const std::uint64_t base = rng.next_u64();
  auto parts = parallel_map<detail::ChainResult>(chains, opt.threads, [&](std::size_t c) {
    const std::size_t count = n_samples / chains + (c < n_samples % chains ? 1 : 0);
    return detail::pickrell_chain(p, count, opt, RandomStream(derive_seed(base, c)));
  });
  long accepted = 0, proposed = 0;
  result.points.reserve(n_samples);
  for (auto& part : parts) {
    accepted += part.accepted;
    proposed += part.proposed;
    for (auto& pt : part.points) result.points.push_back(std::move(pt));
  }
  result.acceptance_rate = proposed == 0 ? NAN : static_cast<double>(accepted) / static_cast<double>(proposed);
  return result;
}

/// Radial part of an (N+α)×N Ginibre matrix: the Laguerre ensemble with integer α.
inline OrderedPoint sample_laguerre(int alpha, int n, RandomStream& rng) {
  if (alpha < 0 || n < 1) throw std::invalid_argument("sample_laguerre: need alpha >= 0 and N >= 1");
  return radial_part(sample_ginibre(n + alpha, n, rng));
}

/// u_i = x_i/(1+x_i).
inline OrderedPoint jacobi_map(const OrderedPoint& x) {
  std::vector<double> u(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) u[i] = x[i] / (1.0 + x[i]);
  return OrderedPoint(std::move(u));
}

/// x_i = u_i/(1−u_i).
inline OrderedPoint jacobi_map_inverse(const OrderedPoint& u) {
  std::vector<double> x(u.dim());
  for (std::size_t i = 0; i < u.dim(); ++i) {
    if (!(u[i] < 1.0)) throw std::domain_error("jacobi_map_inverse: u_i must be < 1");
    x[i] = u[i] / (1.0 - u[i]);
  }
  return OrderedPoint(std::move(x));
}

/// Δ_N²(u) ∏ u_k^α (1−u_k)^β on [0,1]^N.
inline double jacobi_ensemble_density_unnorm(double alpha, double beta, const OrderedPoint& u) {
  double r = 1.0;
  for (std::size_t i = 0; i < u.dim(); ++i) {
    if (u[i] < 0.0 || u[i] > 1.0) return 0.0;
    r *= std::pow(u[i], alpha) * std::pow(1.0 - u[i], beta);
  }
  const double v = vandermonde(u);
  return r * v * v;
}

}  // namespace interlace
