#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "chamber.hpp"
#include "random.hpp"

namespace interlace {

using ComplexMatrix = Eigen::MatrixXcd;

/// i.i.d. standard complex Gaussian entries, E|X_jk|² = 1.
inline ComplexMatrix sample_ginibre(Eigen::Index m, Eigen::Index n, RandomStream& rng) {
  if (m < 1 || n < 1) throw std::invalid_argument("sample_ginibre: dimensions must be positive");
  ComplexMatrix x(m, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) x(i, j) = rng.complex_normal();
  }
  return x;
}

/// Haar unitary from the QR factorization of a Ginibre matrix; Q is
/// rescaled column-wise so that R has a positive diagonal.
inline ComplexMatrix sample_haar(Eigen::Index n, RandomStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_haar: n must be positive");
  for (;;) {
    const ComplexMatrix g = sample_ginibre(n, n, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix& r = qr.matrixQR();
    bool degenerate = false;
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::complex<double> d = r(j, j);
      const double mod = std::abs(d);
      if (mod == 0.0) {
        degenerate = true;
        break;
      }
      q.col(j) *= d / mod;
    }
    if (!degenerate) return q;
  }
}

/// Upper-left rows × cols block.
inline ComplexMatrix corner(const ComplexMatrix& x, Eigen::Index rows, Eigen::Index cols) {
  if (rows < 0 || cols < 0 || rows > x.rows() || cols > x.cols()) {
    throw std::invalid_argument("corner: requested block exceeds the matrix");
  }
  return x.topLeftCorner(rows, cols);
}

/// Ascending eigenvalues of X*X (squared singular values), clamped at 0.
inline OrderedPoint radial_part(const ComplexMatrix& x) {
  if (x.rows() < x.cols()) throw std::invalid_argument("radial_part: need rows >= cols");
  if (!x.allFinite()) throw std::invalid_argument("radial_part: non-finite matrix entries");
  const Eigen::Index n = x.cols();
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = x.col(0).squaredNorm();
    return OrderedPoint(std::move(out));
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(x);
  if (svd.info() != Eigen::Success) throw std::runtime_error("radial_part: SVD failed");
  const auto& sv = svd.singularValues();
  for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::max(0.0, sv(i) * sv(i));
  return OrderedPoint::from_unsorted(std::move(out));
}

namespace detail {
inline void require_nonnegative(const OrderedPoint& x, const char* who) {
  if (x.dim() > 0 && x[0] < 0.0) throw std::invalid_argument(std::string(who) + ": point must be non-negative");
}
}  // namespace detail

/// radial part of the (N+α)×N corner of V·[diag(√x); 0]·U.
inline OrderedPoint sample_lambda_plus_via_matrices(int alpha, const OrderedPoint& x, RandomStream& rng) {
  if (alpha < 0) throw std::invalid_argument("sample_lambda_plus_via_matrices: alpha must be a non-negative integer");
  detail::require_nonnegative(x, "sample_lambda_plus_via_matrices");
  const Eigen::Index n1 = static_cast<Eigen::Index>(x.dim());
  if (n1 < 2) throw std::invalid_argument("sample_lambda_plus_via_matrices: need dim(x) >= 2");
  const Eigen::Index rows = n1 + alpha;
  ComplexMatrix d = ComplexMatrix::Zero(rows, n1);
  for (Eigen::Index i = 0; i < n1; ++i) d(i, i) = std::sqrt(x[static_cast<std::size_t>(i)]);
  const ComplexMatrix v = sample_haar(rows, rng);
  const ComplexMatrix u = sample_haar(n1, rng);
  const ComplexMatrix m = v * d * u;
  return radial_part(corner(m, rows - 1, n1 - 1));
}

/// radial part of π_{N+α,N}(V_{N+α+1}) · diag(√z).
inline OrderedPoint sample_lambda_eq_via_matrices(int alpha, const OrderedPoint& z, RandomStream& rng) {
  if (alpha < 0) throw std::invalid_argument("sample_lambda_eq_via_matrices: alpha must be a non-negative integer");
  detail::require_nonnegative(z, "sample_lambda_eq_via_matrices");
  const Eigen::Index n = static_cast<Eigen::Index>(z.dim());
  if (n < 1) throw std::invalid_argument("sample_lambda_eq_via_matrices: empty point");
  const ComplexMatrix v = sample_haar(n + alpha + 1, rng);
  ComplexMatrix m = corner(v, n + alpha, n);
  for (Eigen::Index j = 0; j < n; ++j) m.col(j) *= std::sqrt(z[static_cast<std::size_t>(j)]);
  return radial_part(m);
}

/// F_ω(λ) = exp(−4 γ̄ λ²) ∏ 1/(1 + 4 α_i λ²).
inline double char_F_omega(const BoundaryPoint& omega, double lambda) {
  const double l2 = lambda * lambda;
  double r = std::exp(-4.0 * std::max(0.0, gamma_bar(omega)) * l2);
  for (double a : omega.alphas()) r /= 1.0 + 4.0 * a * l2;
  return r;
}

/// Scale of both the Gaussian and the rank-one parts of the P_ω model;
/// fixed by matching one-entry characteristic functions to F_ω.
inline constexpr double kOmegaGaussianScale = 4.0;
inline constexpr double kOmegaRankOneScale = 4.0;

/// m×n corner of X = 4√γ̄·G + 4·Σ_i √α_i ξ_i η_i^*, a sample of P_ω.
inline ComplexMatrix sample_P_omega_corner(const BoundaryPoint& omega, Eigen::Index m, Eigen::Index n,
                                           RandomStream& rng) {
  double gb = gamma_bar(omega);
  if (gb < -1e-12 * std::max(1.0, omega.gamma())) {
    throw std::invalid_argument("sample_P_omega_corner: gamma_bar(omega) is negative");
  }
  gb = std::max(0.0, gb);
  ComplexMatrix x = ComplexMatrix::Zero(m, n);
  if (gb > 0.0) x += kOmegaGaussianScale * std::sqrt(gb) * sample_ginibre(m, n, rng);
  for (double a : omega.alphas()) {
    if (a == 0.0) continue;
    const ComplexMatrix xi = sample_ginibre(m, 1, rng);
    const ComplexMatrix eta = sample_ginibre(n, 1, rng);
    x += kOmegaRankOneScale * std::sqrt(a) * xi * eta.adjoint();
  }
  return x;
}

/// Boundary kernel: radial part of the (N+α)×N corner of a P_ω sample.
inline OrderedPoint sample_lambda_omega(int alpha, int n, const BoundaryPoint& omega, RandomStream& rng) {
  if (alpha < 0 || n < 1) throw std::invalid_argument("sample_lambda_omega: need alpha >= 0 and N >= 1");
  return radial_part(sample_P_omega_corner(omega, n + alpha, n, rng));
}

}  // namespace interlace
