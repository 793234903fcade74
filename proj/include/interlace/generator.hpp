#pragma once

// One-particle generators x(1+x)d²/dx² + (p·x + q)d/dx acting on finite sums
// of power terms c·x^a(1+x)^b, differentiated exactly.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "chamber.hpp"
#include "diffusion.hpp"
#include "random.hpp"
#include "stats.hpp"

namespace interlace {

struct PowerTerm {
  double c = 0.0;
  double a = 0.0;  // exponent of x
  double b = 0.0;  // exponent of (1+x)
};

using PowerExpr = std::vector<PowerTerm>;

inline double evaluate(const PowerExpr& e, double x) {
  double acc = 0.0;
  for (const auto& t : e) {
    if (t.c == 0.0) continue;
    acc += t.c * std::pow(x, t.a) * std::pow(1.0 + x, t.b);
  }
  return acc;
}

inline PowerExpr derivative(const PowerExpr& e) {
  PowerExpr out;
  for (const auto& t : e) {
    if (t.c == 0.0) continue;
    if (t.a != 0.0) out.push_back({t.c * t.a, t.a - 1.0, t.b});
    if (t.b != 0.0) out.push_back({t.c * t.b, t.a, t.b - 1.0});
  }
  return out;
}

inline PowerExpr multiply(const PowerExpr& e, const PowerTerm& m) {
  PowerExpr out;
  out.reserve(e.size());
  for (const auto& t : e) out.push_back({t.c * m.c, t.a + m.a, t.b + m.b});
  return out;
}

inline PowerExpr polynomial(std::span<const double> coeffs) {
  PowerExpr out;
  for (std::size_t k = 0; k < coeffs.size(); ++k) out.push_back({coeffs[k], static_cast<double>(k), 0.0});
  return out;
}

/// x(1+x) f'' + (slope·x + intercept) f'.
struct OneParticleOperator {
  double slope = 0.0;
  double intercept = 0.0;

  PowerExpr apply(const PowerExpr& f) const {
    const PowerExpr d1 = derivative(f);
    const PowerExpr d2 = derivative(d1);
    PowerExpr out = multiply(d2, {1.0, 1.0, 1.0});
    for (const auto& t : multiply(d1, {slope, 1.0, 0.0})) out.push_back(t);
    for (const auto& t : multiply(d1, {intercept, 0.0, 0.0})) out.push_back(t);
    return out;
  }
};

/// L_{s,α}^{(N)} = x(1+x)d² + ((2−2N−s)x + α+1)d.
inline OneParticleOperator pickrell_generator(double s, double alpha, int n) {
  return {2.0 - 2.0 * n - s, alpha + 1.0};
}

/// Dual L̂_{s,α}^{(N)} = x(1+x)d² + ((2N+s)x − α)d.
inline OneParticleOperator pickrell_dual_generator(double s, double alpha, int n) {
  return {2.0 * n + s, -alpha};
}

inline double apply_generator_1d(double s, double alpha, int n, std::span<const double> coeffs, double x) {
  return evaluate(pickrell_generator(s, alpha, n).apply(polynomial(coeffs)), x);
}

/// c_s^{N+1} = −2N − s.
inline double h_constant_c(double s, int n) { return -2.0 * n - s; }

/// d_{s,α}^{N+1} = −α(2N + s + α − 1).
inline double h_constant_d(double s, double alpha, int n) { return -alpha * (2.0 * n + s + alpha - 1.0); }

/// N(N−1)(−4N+2−3s)/6.
inline double vandermonde_eigenvalue(double s, int n) {
  return n * (n - 1.0) * (-4.0 * n + 2.0 - 3.0 * s) / 6.0;
}

namespace detail {

inline double rel_residual(double lhs, double rhs, double scale) {
  return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), scale, 1e-300});
}

}  // namespace detail

/// Σ_i L_{s,α,x_i}^{(N)} Δ_N against λ_s^N Δ_N, with the exact partial derivatives
/// ∂_iΔ = Δ Σ_{j≠i} 1/(x_i−x_j), ∂_i²Δ = Δ Σ_{j≠k≠i} 1/((x_i−x_j)(x_i−x_k)).
inline TestReport check_vandermonde_eigen(double s, double alpha, const std::vector<OrderedPoint>& points,
                                          double threshold = 1e-8) {
  double worst = 0.0;
  int n_dim = 0;
  for (const auto& x : points) {
    const std::size_t n = x.dim();
    n_dim = static_cast<int>(n);
    const auto op = pickrell_generator(s, alpha, static_cast<int>(n));
    const double delta = vandermonde(x);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double first = 0.0, second = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        first += 1.0 / (x[i] - x[j]);
        for (std::size_t k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          second += 1.0 / ((x[i] - x[j]) * (x[i] - x[k]));
        }
      }
      total += x[i] * (1.0 + x[i]) * second * delta + (op.slope * x[i] + op.intercept) * first * delta;
    }
    const double expect = vandermonde_eigenvalue(s, static_cast<int>(n)) * delta;
    worst = std::max(worst, detail::rel_residual(total, expect, std::abs(delta)));
  }
  TestReport r = TestReport::deterministic("vandermonde-eigen", worst, threshold);
  r.meta["s"] = s;
  r.meta["alpha"] = alpha;
  r.meta["N"] = static_cast<long long>(n_dim);
  r.meta["points"] = static_cast<long long>(points.size());
  return r;
}

/// (i) L̂_{s,α}^{(N+1)}(m̂⁻¹g) = c·m̂⁻¹g + m̂⁻¹L_{s,α+1}^{(N)}g with m̂⁻¹ = x^{α+1}(1+x)^{−2N−s−α−1};
/// (ii) L_{s+2α−2,−α}^{(N+1)}(x^α g) = d·x^α g + x^α L_{s,α}^{(N)}g; for g ∈ {1, x, x², x³}.
inline TestReport check_h_transform_identities(double s, double alpha, int n, std::span<const double> points,
                                               double threshold = 1e-8) {
  const PowerTerm m_inv{1.0, alpha + 1.0, -2.0 * n - s - alpha - 1.0};
  const PowerTerm x_pow{1.0, alpha, 0.0};
  const double c = h_constant_c(s, n);
  const double d = h_constant_d(s, alpha, n);
  double worst = 0.0;
  for (int deg = 0; deg <= 3; ++deg) {
    std::vector<double> coeffs(static_cast<std::size_t>(deg) + 1, 0.0);
    coeffs.back() = 1.0;
    const PowerExpr g = polynomial(coeffs);

    const PowerExpr lhs1 = pickrell_dual_generator(s, alpha, n + 1).apply(multiply(g, m_inv));
    PowerExpr rhs1 = multiply(g, {c * m_inv.c, m_inv.a, m_inv.b});
    for (const auto& t : multiply(pickrell_generator(s, alpha + 1.0, n).apply(g), m_inv)) rhs1.push_back(t);

    const PowerExpr lhs2 = pickrell_generator(s + 2.0 * alpha - 2.0, -alpha, n + 1).apply(multiply(g, x_pow));
    PowerExpr rhs2 = multiply(g, {d, alpha, 0.0});
    for (const auto& t : multiply(pickrell_generator(s, alpha, n).apply(g), x_pow)) rhs2.push_back(t);

    for (double x : points) {
      const double scale1 = std::abs(evaluate(multiply(g, m_inv), x));
      const double scale2 = std::abs(evaluate(multiply(g, x_pow), x));
      worst = std::max(worst, detail::rel_residual(evaluate(lhs1, x), evaluate(rhs1, x), scale1));
      worst = std::max(worst, detail::rel_residual(evaluate(lhs2, x), evaluate(rhs2, x), scale2));
    }
  }
  TestReport r = TestReport::deterministic("h-transform", worst, threshold);
  r.meta["s"] = s;
  r.meta["alpha"] = alpha;
  r.meta["N"] = static_cast<long long>(n);
  r.meta["points"] = static_cast<long long>(points.size());
  return r;
}

/// d_{s,α+1}^{N+1} − c_{s+2α}^{N+1} = d_{s,α}^{N+1} at random (s, α, N).
inline TestReport check_constants_identity(RandomStream& rng, int count = 100, double threshold = 1e-12) {
  double worst = 0.0;
  for (int k = 0; k < count; ++k) {
    const double s = rng.uniform(-0.9, 5.0);
    const double alpha = rng.uniform(-0.9, 5.0);
    const int n = 1 + static_cast<int>(rng.below(10));
    const double lhs = h_constant_d(s, alpha + 1.0, n) - h_constant_c(s + 2.0 * alpha, n);
    const double rhs = h_constant_d(s, alpha, n);
    worst = std::max(worst, detail::rel_residual(lhs, rhs, 1.0));
  }
  TestReport r = TestReport::deterministic("constants-identity", worst, threshold);
  r.meta["points"] = static_cast<long long>(count);
  return r;
}

/// The two written forms of the Pickrell drift agree.
inline TestReport check_drift_identity(const PickrellParams& p, const std::vector<OrderedPoint>& points,
                                       double threshold = 1e-8) {
  double worst = 0.0;
  for (const auto& x : points) {
    const auto a = pickrell_drift(p, x, PickrellForm::Standard);
    const auto b = pickrell_drift(p, x, PickrellForm::Symmetrized);
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, detail::rel_residual(a[i], b[i], scale));
  }
  TestReport r = TestReport::deterministic("drift-identity", worst, threshold);
  r.meta["s"] = p.s;
  r.meta["alpha"] = p.alpha;
  r.meta["N"] = static_cast<long long>(p.n);
  r.meta["points"] = static_cast<long long>(points.size());
  return r;
}

}  // namespace interlace
