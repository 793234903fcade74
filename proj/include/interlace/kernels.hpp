#pragma once

// Interlacing Markov kernels on Weyl chambers:
//   L      : W^{N+1}  -> W^N      (uniform-type link, N! Δ_N(y)/Δ_{N+1}(x))
//   LambdaEq  : W_≥^N -> W_≥^N    (α-weighted link between equal dimensions)
//   LambdaPlus: W_≥^{N+1} -> W_≥^N (composition L ∘ LambdaEq)
// Densities are defined for strictly interior x only; samplers are exact
// rejection samplers with product envelopes.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "chamber.hpp"
#include "random.hpp"
#include "special.hpp"

namespace interlace {

struct KernelParams {
  double alpha = 0.0;

  explicit KernelParams(double a) : alpha(a) {
    if (!(a > -1.0)) throw std::invalid_argument("KernelParams: alpha must exceed -1");
  }
};

inline constexpr long kRejectionCap = 10'000'000;

/// Below this |α| the inner integral uses its logarithmic branch.
inline constexpr double kLogBranchAlpha = 1e-10;

namespace detail {

inline double factorial(std::size_t n) {
  double r = 1.0;
  for (std::size_t k = 2; k <= n; ++k) r *= static_cast<double>(k);
  return r;
}

inline void require_strict(const OrderedPoint& x, bool positive, const char* who) {
  for (std::size_t i = 0; i + 1 < x.dim(); ++i) {
    if (!(x[i] < x[i + 1])) throw std::invalid_argument(std::string(who) + ": x must be strictly increasing");
  }
  if (positive && x.dim() > 0 && !(x[0] > 0.0)) {
    throw std::invalid_argument(std::string(who) + ": x_1 must be positive");
  }
}

[[noreturn]] inline void rejection_cap(const char* who, std::size_t n) {
  throw std::runtime_error(std::string(who) + ": rejection cap of 1e7 proposals reached (N=" + std::to_string(n) + ")");
}

}  // namespace detail

/// ∫_a^b y^α z^{−α−1} dz for 0 < a < b, with a stable small-α form.
inline double lambda_inner_integral(double alpha, double y, double a, double b) {
  if (!(a < b)) return 0.0;
  if (std::abs(alpha) < kLogBranchAlpha) return std::log(b / a);
  // y^α a^{−α} (1 − (a/b)^α) / α
  const double ratio = -std::expm1(alpha * std::log(a / b)) / alpha;
  return std::pow(y / a, alpha) * ratio;
}

inline double density_L(const OrderedPoint& x, const OrderedPoint& y) {
  if (x.dim() != y.dim() + 1) throw std::invalid_argument("density_L: need dim(x) = dim(y) + 1");
  detail::require_strict(x, false, "density_L");
  if (!interlace_plus(x, y)) return 0.0;
  return detail::factorial(y.dim()) * vandermonde(y) / vandermonde(x);
}

inline double density_lambda_eq(const KernelParams& p, const OrderedPoint& x, const OrderedPoint& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("density_lambda_eq: dimension mismatch");
  detail::require_strict(x, true, "density_lambda_eq");
  if (!interlace_eq(x, y)) return 0.0;
  const std::size_t n = x.dim();
  double r = shifted_factorial(p.alpha + 1.0, static_cast<int>(n));
  for (std::size_t k = 0; k < n; ++k) r *= std::pow(y[k], p.alpha) / std::pow(x[k], p.alpha + 1.0);
  return r * vandermonde(y) / vandermonde(x);
}

inline double density_lambda_plus(const KernelParams& p, const OrderedPoint& x, const OrderedPoint& y) {
  if (x.dim() != y.dim() + 1) throw std::invalid_argument("density_lambda_plus: need dim(x) = dim(y) + 1");
  detail::require_strict(x, true, "density_lambda_plus");
  const std::size_t n = y.dim();
  double prod = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double lo = k == 0 ? 0.0 : x[k - 1];
    if (!(lo <= y[k] && y[k] <= x[k + 1])) return 0.0;
    const double a = std::max(x[k], y[k]);
    const double b = k + 1 < n ? std::min(x[k + 1], y[k + 1]) : x[k + 1];
    if (!(a < b)) return 0.0;
    prod *= lambda_inner_integral(p.alpha, y[k], a, b);
  }
  return detail::factorial(n) * shifted_factorial(p.alpha + 1.0, static_cast<int>(n)) * vandermonde(y) /
         vandermonde(x) * prod;
}

inline OrderedPoint sample_L(const OrderedPoint& x, RandomStream& rng) {
  detail::require_strict(x, false, "sample_L");
  const std::size_t n = x.dim() - 1;
  double envelope = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) envelope *= x[j + 1] - x[i];
  }
  std::vector<double> y(n);
  for (long attempt = 0; attempt < kRejectionCap; ++attempt) {
    for (std::size_t k = 0; k < n; ++k) y[k] = rng.uniform(x[k], x[k + 1]);
    if (rng.uniform() * envelope <= vandermonde(y)) return OrderedPoint::from_unsorted(y, x.domain());
  }
  detail::rejection_cap("sample_L", n);
}

inline OrderedPoint sample_lambda_eq(const KernelParams& p, const OrderedPoint& x, RandomStream& rng) {
  detail::require_strict(x, true, "sample_lambda_eq");
  const std::size_t n = x.dim();
  const double e = p.alpha + 1.0;
  std::vector<double> lo_pow(n), hi_pow(n);
  double envelope = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double lo = k == 0 ? 0.0 : x[k - 1];
    lo_pow[k] = std::pow(lo, e);
    hi_pow[k] = std::pow(x[k], e);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double lo_i = i == 0 ? 0.0 : x[i - 1];
    for (std::size_t j = i + 1; j < n; ++j) envelope *= x[j] - lo_i;
  }
  std::vector<double> y(n);
  for (long attempt = 0; attempt < kRejectionCap; ++attempt) {
    for (std::size_t k = 0; k < n; ++k) {
      const double u = rng.uniform();
      y[k] = std::pow(u * (hi_pow[k] - lo_pow[k]) + lo_pow[k], 1.0 / e);
    }
    if (rng.uniform() * envelope <= vandermonde(y)) return OrderedPoint::from_unsorted(y);
  }
  detail::rejection_cap("sample_lambda_eq", n);
}

/// Draws z ~ L(x, ·) then y ~ LambdaEq(z, ·).
inline OrderedPoint sample_lambda_plus(const KernelParams& p, const OrderedPoint& x, RandomStream& rng) {
  detail::require_strict(x, true, "sample_lambda_plus");
  for (long attempt = 0; attempt < kRejectionCap; ++attempt) {
    OrderedPoint z = sample_L(x, rng);
    if (z.strictly_interior()) return sample_lambda_eq(p, z, rng);
  }
  detail::rejection_cap("sample_lambda_plus", x.dim() - 1);
}

}  // namespace interlace
