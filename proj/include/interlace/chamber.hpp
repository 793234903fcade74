#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace interlace {

enum class Domain { WholeLine, NonNegative };

/// A point of the closed Weyl chamber: coordinates in non-decreasing order.
class OrderedPoint {
 public:
  OrderedPoint() = default;

  explicit OrderedPoint(std::vector<double> coords, Domain domain = Domain::NonNegative)
      : coords_(std::move(coords)), domain_(domain) {
    for (double c : coords_) {
      if (!std::isfinite(c)) throw std::invalid_argument("OrderedPoint: non-finite coordinate");
    }
    if (!std::is_sorted(coords_.begin(), coords_.end())) {
      throw std::invalid_argument("OrderedPoint: coordinates must be non-decreasing");
    }
    if (domain_ == Domain::NonNegative && !coords_.empty() && coords_.front() < 0.0) {
      throw std::invalid_argument("OrderedPoint: negative coordinate in non-negative chamber");
    }
  }

  /// Sorts first; the entry point for samplers.
  static OrderedPoint from_unsorted(std::vector<double> coords, Domain domain = Domain::NonNegative) {
    std::sort(coords.begin(), coords.end());
    return OrderedPoint(std::move(coords), domain);
  }

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }
  const std::vector<double>& vec() const noexcept { return coords_; }
  Domain domain() const noexcept { return domain_; }

  double sum() const { return std::accumulate(coords_.begin(), coords_.end(), 0.0); }

  /// Strict interior of the chamber (and of [0, inf) for NonNegative).
  bool strictly_interior() const {
    for (std::size_t i = 0; i + 1 < coords_.size(); ++i) {
      if (!(coords_[i] < coords_[i + 1])) return false;
    }
    if (domain_ == Domain::NonNegative && !coords_.empty() && !(coords_.front() > 0.0)) return false;
    return true;
  }

  bool operator==(const OrderedPoint& other) const = default;

 private:
  std::vector<double> coords_;
  Domain domain_ = Domain::NonNegative;
};

/// ω = (alphas, gamma) with alphas non-increasing, non-negative, and sum(alphas) ≤ gamma.
class BoundaryPoint {
 public:
  BoundaryPoint() = default;

  BoundaryPoint(std::vector<double> alphas, double gamma) : alphas_(std::move(alphas)), gamma_(gamma) {
    if (!std::isfinite(gamma_)) throw std::invalid_argument("BoundaryPoint: non-finite gamma");
    for (std::size_t i = 0; i < alphas_.size(); ++i) {
      if (!std::isfinite(alphas_[i]) || alphas_[i] < 0.0) {
        throw std::invalid_argument("BoundaryPoint: alphas must be finite and non-negative");
      }
      if (i + 1 < alphas_.size() && alphas_[i] < alphas_[i + 1]) {
        throw std::invalid_argument("BoundaryPoint: alphas must be non-increasing");
      }
    }
    const double total = std::accumulate(alphas_.begin(), alphas_.end(), 0.0);
    // Sums built from the same numbers in another order may exceed gamma by an ulp or so.
    if (total > gamma_ + 1e-12 * std::max(1.0, std::abs(gamma_))) {
      throw std::invalid_argument("BoundaryPoint: sum(alphas) exceeds gamma");
    }
  }

  const std::vector<double>& alphas() const noexcept { return alphas_; }
  double gamma() const noexcept { return gamma_; }

 private:
  std::vector<double> alphas_;
  double gamma_ = 0.0;
};

/// Non-increasing vector of non-negative integers. Trailing zeros are kept
/// because the ambient length matters for multivariate Jacobi indices.
class Partition {
 public:
  Partition() = default;

  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] < 0) throw std::invalid_argument("Partition: negative part");
      if (i + 1 < parts_.size() && parts_[i] < parts_[i + 1]) {
        throw std::invalid_argument("Partition: parts must be non-increasing");
      }
    }
  }

  /// Builds from the ascending listing used at the I/O boundary.
  static Partition from_ascending(std::vector<int> parts) {
    std::reverse(parts.begin(), parts.end());
    return Partition(std::move(parts));
  }

  std::size_t size() const noexcept { return parts_.size(); }
  int operator[](std::size_t i) const { return i < parts_.size() ? parts_[i] : 0; }
  const std::vector<int>& parts() const noexcept { return parts_; }

  std::size_t length() const {
    return static_cast<std::size_t>(std::count_if(parts_.begin(), parts_.end(), [](int p) { return p > 0; }));
  }

  long weight() const { return std::accumulate(parts_.begin(), parts_.end(), 0L); }

  /// Copy padded with zeros (or trimmed of zeros) to exactly n parts.
  Partition resized(std::size_t n) const {
    if (length() > n) throw std::invalid_argument("Partition: length exceeds requested size");
    std::vector<int> p(n, 0);
    for (std::size_t i = 0; i < n && i < parts_.size(); ++i) p[i] = parts_[i];
    return Partition(std::move(p));
  }

  std::vector<int> ascending() const { return {parts_.rbegin(), parts_.rend()}; }

  bool operator==(const Partition& other) const = default;

 private:
  std::vector<int> parts_;
};

/// ∏_{i<j} (x_j − x_i) of the raw coordinate vector (no sorting applied).
inline double vandermonde(std::span<const double> x) {
  double prod = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) prod *= x[j] - x[i];
  }
  return prod;
}

inline double vandermonde(const OrderedPoint& x) { return vandermonde(x.coords()); }

/// x_k ≤ y_k ≤ x_{k+1} for all k; dim x = dim y + 1.
inline bool interlace_plus(const OrderedPoint& x, const OrderedPoint& y) {
  if (x.dim() != y.dim() + 1) throw std::invalid_argument("interlace_plus: need dim(x) = dim(y) + 1");
  for (std::size_t k = 0; k < y.dim(); ++k) {
    if (!(x[k] <= y[k] && y[k] <= x[k + 1])) return false;
  }
  return true;
}

/// 0 ≤ y_1 ≤ x_1 ≤ y_2 ≤ ... ≤ y_N ≤ x_N.
inline bool interlace_eq(const OrderedPoint& x, const OrderedPoint& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("interlace_eq: dimension mismatch");
  double lower = 0.0;
  for (std::size_t k = 0; k < y.dim(); ++k) {
    if (!(lower <= y[k] && y[k] <= x[k])) return false;
    lower = x[k];
  }
  return true;
}

/// r_N: alphas_i = x_{N+1−i}/N², gamma = Σx_i/N².
inline BoundaryPoint embed_boundary(const OrderedPoint& x) {
  const std::size_t n = x.dim();
  if (n == 0) throw std::invalid_argument("embed_boundary: empty point");
  if (x.domain() != Domain::NonNegative) throw std::invalid_argument("embed_boundary: point must be non-negative");
  const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  std::vector<double> alphas(n);
  for (std::size_t i = 0; i < n; ++i) alphas[i] = x[n - 1 - i] * scale;
  // Summing the descending list gives the same rounding as the alphas' own sum.
  const double gamma = std::accumulate(alphas.begin(), alphas.end(), 0.0);
  return BoundaryPoint(std::move(alphas), gamma);
}

inline double gamma_bar(const BoundaryPoint& omega) {
  return omega.gamma() - std::accumulate(omega.alphas().begin(), omega.alphas().end(), 0.0);
}

}  // namespace interlace
