#pragma once

// Jacobi polynomials in one and several variables, the two-step branching
// coefficients, the discrete link L_N^{N+1} on partitions and its diffusive
// scaling limit.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chamber.hpp"
#include "kernels.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace interlace {

struct JacobiParams {
  double alpha = 0.0;
  double beta = 0.0;
  double sigma = 0.5;

  JacobiParams(double a, double b) : alpha(a), beta(b), sigma((a + b + 1.0) / 2.0) {
    if (!(a > -1.0) || !(b > -1.0)) throw std::invalid_argument("JacobiParams: alpha and beta must exceed -1");
  }
};

/// p_n^{(α,β)}(x) by the three-term recurrence; p_n(1) = (α+1)_n / n!.
inline double jacobi_p(int n, const JacobiParams& p, double x) {
  if (n < 0) throw std::invalid_argument("jacobi_p: degree must be non-negative");
  const double a = p.alpha, b = p.beta;
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
  for (int k = 2; k <= n; ++k) {
    const double c = 2.0 * k + a + b;
    const double a1 = 2.0 * k * (k + a + b) * (c - 2.0);
    const double a2 = (c - 1.0) * (c * (c - 2.0) * x + a * a - b * b);
    const double a3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
    const double next = (a2 * cur - a3 * prev) / a1;
    prev = cur;
    cur = next;
  }
  return cur;
}

inline double jacobi_p_at_one(int n, const JacobiParams& p) {
  if (n < 0) throw std::invalid_argument("jacobi_p_at_one: degree must be non-negative");
  return std::exp(std::lgamma(n + p.alpha + 1.0) - std::lgamma(n + 1.0) - std::lgamma(p.alpha + 1.0));
}

/// Leading coefficient 2^{−n} Γ(2n+2σ)/(Γ(n+2σ) n!).
inline double leading_k(int n, const JacobiParams& p) {
  if (n < 0) throw std::invalid_argument("leading_k: degree must be non-negative");
  if (n == 0) return 1.0;
  SignedLog r = gamma_signed(2.0 * n + 2.0 * p.sigma);
  r /= gamma_signed(n + 2.0 * p.sigma);
  r /= gamma_signed(n + 1.0);
  r.log_abs -= n * std::log(2.0);
  return r.value();
}

inline constexpr double kMvJacobiMinGap = 1e-6;

/// det[p_{λ_i+n−i}(x_j)] / ∏_{i<j}(x_i − x_j).
inline double mv_jacobi(const Partition& lambda, std::span<const double> xs, const JacobiParams& p) {
  const std::size_t n = xs.size();
  if (n == 0) throw std::invalid_argument("mv_jacobi: need at least one variable");
  if (lambda.length() > n) throw std::invalid_argument("mv_jacobi: length(lambda) exceeds the number of variables");
  double denom = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = xs[i] - xs[j];
      if (std::abs(d) < kMvJacobiMinGap) {
        throw std::invalid_argument("mv_jacobi: arguments closer than 1e-6 (use mv_jacobi_at_one)");
      }
      denom *= d;
    }
  }
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const int deg = lambda[i] + static_cast<int>(n - 1 - i);
    for (std::size_t j = 0; j < n; ++j) m(i, j) = jacobi_p(deg, p, xs[j]);
  }
  return m.determinant() / denom;
}

/// log of the closed-form value of the multivariate polynomial at 1_n (always positive).
inline double log_mv_jacobi_at_one(const Partition& lambda, std::size_t n, const JacobiParams& p) {
  if (lambda.length() > n) throw std::invalid_argument("mv_jacobi_at_one: length(lambda) exceeds n");
  const double nn = static_cast<double>(n);
  double acc = -nn * (nn - 1.0) / 2.0 * std::log(2.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double li = lambda[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double lj = lambda[j];
      acc += std::log(li - lj + static_cast<double>(j - i));
      acc += std::log(li + lj + 2.0 * nn - static_cast<double>(i + j) - 2.0 + 2.0 * p.sigma);
    }
    const double k = static_cast<double>(n - i);  // n − i in 1-based terms
    acc += std::lgamma(li + k + p.alpha) - std::lgamma(li + k) - std::lgamma(k + p.alpha) -
           std::lgamma(static_cast<double>(i + 1));
  }
  return acc;
}

inline double mv_jacobi_at_one(const Partition& lambda, std::size_t n, const JacobiParams& p) {
  return std::exp(log_mv_jacobi_at_one(lambda, n, p));
}

/// log B(m, l); B is positive for α, β > −1 and 0 ≤ l.
inline double log_coef_B(int m, int l, const JacobiParams& p) {
  if (m < 0 || l < 0) throw std::invalid_argument("coef_B: indices must be non-negative");
  const double a = p.alpha, b = p.beta;
  // (2l+α+β+1)Γ(l+α+β+1) at l = 0 is Γ(α+β+2).
  const double l_part = l == 0 ? std::lgamma(a + b + 2.0)
                               : std::log(2.0 * l + a + b + 1.0) + std::lgamma(l + a + b + 1.0);
  return std::log(2.0 * m + a + b + 2.0) + std::lgamma(m + b + 1.0) + std::lgamma(m + 1.0) + l_part +
         std::lgamma(l + a + 1.0) - std::log(2.0) - std::lgamma(m + a + b + 2.0) - std::lgamma(m + a + 2.0) -
         std::lgamma(l + b + 1.0) - std::lgamma(l + 1.0);
}

inline double coef_B(int m, int l, const JacobiParams& p) { return std::exp(log_coef_B(m, l, p)); }

/// ∏_{i=1}^{n−1} B(μ_i+n−i−1, ν_i+n−i−1).
inline double coef_A(const Partition& mu, const Partition& nu, std::size_t n, const JacobiParams& p) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const int shift = static_cast<int>(n - 2 - i);
    acc += log_coef_B(mu[i] + shift, nu[i] + shift, p);
  }
  return std::exp(acc);
}

inline double log_coef_c(const Partition& lambda, std::size_t n, double alpha) {
  if (lambda.length() > n) throw std::invalid_argument("coef_c: length(lambda) exceeds n");
  double acc = static_cast<double>(n) * std::lgamma(alpha + 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = lambda[i] + static_cast<double>(n - i);
    acc += std::lgamma(k) - std::lgamma(k + alpha);
  }
  return acc;
}

inline double coef_c(const Partition& lambda, std::size_t n, double alpha) {
  return std::exp(log_coef_c(lambda, n, alpha));
}

namespace detail {

/// log B over a square index range, for the inner loops of the kernel.
class LogBTable {
 public:
  LogBTable(int size, const JacobiParams& p) : size_(size), v_(static_cast<std::size_t>(size) * size, -INFINITY) {
    for (int m = 0; m < size; ++m) {
      for (int l = 0; l <= m; ++l) v_[static_cast<std::size_t>(m) * size + l] = log_coef_B(m, l, p);
    }
  }
  double operator()(int m, int l) const { return v_[static_cast<std::size_t>(m) * size_ + l]; }

 private:
  int size_;
  std::vector<double> v_;
};

/// Σ_μ ∏_i B(μ_i+N−1−i, ν_i+N−1−i) over μ with μ ≺ λ and ν ≺ μ∪0.
inline double branching_mu_sum(const Partition& lambda, const Partition& nu, std::size_t N, const LogBTable& table) {
  std::vector<int> lo(N), hi(N);
  for (std::size_t i = 0; i < N; ++i) {
    lo[i] = std::max(lambda[i + 1], nu[i]);
    hi[i] = lambda[i];
    if (i > 0) hi[i] = std::min(hi[i], nu[i - 1]);
    if (lo[i] > hi[i]) return 0.0;
  }
  double total = 0.0;
  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double log_acc) {
    if (i == N) {
      total += std::exp(log_acc);
      return;
    }
    const int shift = static_cast<int>(N - 1 - i);
    for (int m = lo[i]; m <= hi[i]; ++m) rec(i + 1, log_acc + table(m + shift, nu[i] + shift));
  };
  rec(0, 0.0);
  return total;
}

inline void require_kernel_shapes(const Partition& lambda, std::size_t N) {
  if (N < 1) throw std::invalid_argument("discrete kernel: N must be positive");
  if (lambda.length() > N + 1) throw std::invalid_argument("discrete kernel: length(lambda) exceeds N+1");
}

}  // namespace detail

/// L_{N,α,β}^{N+1}(λ, ν) for ℓ(λ) ≤ N+1, ℓ(ν) ≤ N.
inline double discrete_kernel(const Partition& lambda, const Partition& nu, std::size_t N, const JacobiParams& p) {
  detail::require_kernel_shapes(lambda, N);
  if (nu.length() > N) throw std::invalid_argument("discrete_kernel: length(nu) exceeds N");
  const detail::LogBTable table(lambda[0] + static_cast<int>(N) + 1, p);
  const double s = detail::branching_mu_sum(lambda, nu, N, table);
  if (s == 0.0) return 0.0;
  const double log_ratio = log_coef_c(nu, N, p.alpha) + log_mv_jacobi_at_one(nu, N, p) -
                           log_coef_c(lambda, N + 1, p.alpha) - log_mv_jacobi_at_one(lambda, N + 1, p);
  return s * std::exp(log_ratio);
}

/// Whole row ν ↦ L(λ, ν), keyed by the parts of ν (length N, non-increasing).
inline std::map<std::vector<int>, double> discrete_kernel_row(const Partition& lambda, std::size_t N,
                                                              const JacobiParams& p) {
  detail::require_kernel_shapes(lambda, N);
  const detail::LogBTable table(lambda[0] + static_cast<int>(N) + 1, p);
  const double log_lambda = log_coef_c(lambda, N + 1, p.alpha) + log_mv_jacobi_at_one(lambda, N + 1, p);
  std::map<std::vector<int>, double> row;
  std::vector<int> nu(N);
  // ν_i ranges over [λ_{i+2}, λ_i], non-increasing.
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == N) {
      const Partition part(nu);
      const double s = detail::branching_mu_sum(lambda, part, N, table);
      if (s == 0.0) return;
      const double log_nu = log_coef_c(part, N, p.alpha) + log_mv_jacobi_at_one(part, N, p);
      row[nu] = s * std::exp(log_nu - log_lambda);
      return;
    }
    int hi = lambda[i];
    if (i > 0) hi = std::min(hi, nu[i - 1]);
    for (int v = lambda[i + 2]; v <= hi; ++v) {
      nu[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return row;
}

struct ScalingLimitResult {
  double discrepancy = 0.0;
  double row_mass = 0.0;
  std::size_t support_size = 0;
  long kappa = 0;
};

/// Sup distance between the CDF of κ^{−1}Z_{κλ} (Z drawn from the discrete
/// row) and the CDF of √Y, Y ~ LambdaPlus(x = λ², ·). N = 1 compares at every
/// atom (both one-sided limits); N = 2 compares joint CDFs on a grid.
inline ScalingLimitResult compare_scaling_limit(const Partition& lambda, long kappa, double alpha_link,
                                                const JacobiParams& p, int grid = 30) {
  const std::size_t n1 = lambda.size();
  if (n1 != 2 && n1 != 3) throw std::invalid_argument("compare_scaling_limit: need N = 1 or 2 (lambda of length N+1)");
  if (kappa < 1) throw std::invalid_argument("compare_scaling_limit: kappa must be positive");
  for (std::size_t i = 0; i < n1; ++i) {
    if (lambda[i] <= 0 || (i + 1 < n1 && lambda[i] == lambda[i + 1])) {
      throw std::invalid_argument("compare_scaling_limit: lambda needs distinct positive parts");
    }
    if (static_cast<double>(lambda[i]) * static_cast<double>(kappa) > 1e6) {
      throw std::invalid_argument("compare_scaling_limit: kappa*lambda too large");
    }
  }
  const std::size_t N = n1 - 1;
  std::vector<int> scaled(n1);
  for (std::size_t i = 0; i < n1; ++i) scaled[i] = static_cast<int>(lambda[i] * kappa);
  const auto row = discrete_kernel_row(Partition(scaled), N, p);

  ScalingLimitResult out;
  out.kappa = kappa;
  out.support_size = row.size();
  for (const auto& [nu, w] : row) out.row_mass += w;

  std::vector<double> xs(n1);
  for (std::size_t i = 0; i < n1; ++i) xs[i] = static_cast<double>(lambda[n1 - 1 - i]) * lambda[n1 - 1 - i];
  const OrderedPoint x(xs);
  const KernelParams kp(alpha_link);
  std::vector<double> roots(n1);
  for (std::size_t i = 0; i < n1; ++i) roots[i] = static_cast<double>(lambda[i]);
  const double k = static_cast<double>(kappa);

  if (N == 1) {
    // density of ν = √y: f(ν²)·2ν
    auto g = [&](double v) { return density_lambda_plus(kp, x, OrderedPoint(std::vector<double>{v * v})) * 2.0 * v; };
    const int top = scaled[0];
    std::vector<double> mass(static_cast<std::size_t>(top) + 1, 0.0);
    for (const auto& [nu, w] : row) mass[static_cast<std::size_t>(nu[0])] += w;
    double cont = 0.0, disc = 0.0, prev_t = 0.0;
    for (int j = 0; j <= top; ++j) {
      const double t = j / k;
      if (t > prev_t) cont += quad_1d(g, prev_t, t, 1e-10, std::span<const double>(roots));
      prev_t = t;
      out.discrepancy = std::max(out.discrepancy, std::abs(disc - cont));
      disc += mass[static_cast<std::size_t>(j)];
      out.discrepancy = std::max(out.discrepancy, std::abs(disc - cont));
    }
    return out;
  }

  // N = 2: ascending coordinates (ν_2, ν_1)/κ against (√y_1, √y_2).
  const double top = roots[0];
  const double h = top / grid;
  auto dens = [&](std::span<const double> v) {
    if (!(v[0] < v[1])) return 0.0;
    return density_lambda_plus(kp, x, OrderedPoint(std::vector<double>{v[0] * v[0], v[1] * v[1]})) * 4.0 * v[0] *
           v[1];
  };
  std::vector<double> cell(static_cast<std::size_t>(grid * grid), 0.0);
  for (int a = 0; a < grid; ++a) {
    for (int b = a; b < grid; ++b) {
      std::vector<CellAxis> axes{{a * h, (a + 1) * h, roots}, {b * h, (b + 1) * h, roots}};
      cell[static_cast<std::size_t>(a * grid + b)] = quad_cell(dens, axes, 1e-8, true).value;
    }
  }
  // Cumulative sums on the grid nodes (a+1)h, (b+1)h.
  std::vector<double> cdf_c(cell.size(), 0.0), cdf_d(cell.size(), 0.0);
  for (const auto& [nu, w] : row) {
    const double u0 = nu[1] / k, u1 = nu[0] / k;
    const int a = std::max(0, static_cast<int>(std::ceil(u0 / h - 1e-12)) - 1);
    const int b = std::max(0, static_cast<int>(std::ceil(u1 / h - 1e-12)) - 1);
    cdf_d[static_cast<std::size_t>(std::min(a, grid - 1) * grid + std::min(b, grid - 1))] += w;
  }
  for (int a = 0; a < grid; ++a) {
    for (int b = 0; b < grid; ++b) {
      const std::size_t idx = static_cast<std::size_t>(a * grid + b);
      double c = cell[idx], d = cdf_d[idx];
      if (a > 0) {
        c += cdf_c[idx - grid];
        d += cdf_d[idx - grid];
      }
      if (b > 0) {
        c += cdf_c[idx - 1];
        d += cdf_d[idx - 1];
      }
      if (a > 0 && b > 0) {
        c -= cdf_c[idx - grid - 1];
        d -= cdf_d[idx - grid - 1];
      }
      cdf_c[idx] = c;
      cdf_d[idx] = d;
      out.discrepancy = std::max(out.discrepancy, std::abs(c - d));
    }
  }
  return out;
}

}  // namespace interlace
