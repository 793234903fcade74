#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace interlace {

inline constexpr long kQuadMaxEvaluations = 1'000'000;

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

namespace detail {

struct EvalBudget {
  long used = 0;
  void charge(long n) {
    used += n;
    if (used > kQuadMaxEvaluations) throw std::runtime_error("quadrature: no convergence within 1e6 evaluations");
  }
};

template <class F>
double gk_segment(F&& f, double a, double b, double tol, EvalBudget& budget, double& err_acc) {
  if (!(a < b)) return 0.0;
  double err = 0.0;
  long local = 0;
  auto counted = [&](double x) {
    ++local;
    return f(x);
  };
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(counted, a, b, 15, tol, &err);
  budget.charge(local);
  if (!std::isfinite(v)) throw std::runtime_error("quadrature: non-finite integral");
  err_acc += err;
  return v;
}

/// Splits [a,b] at the given interior points and sums the pieces.
template <class F>
double gk_split(F&& f, double a, double b, std::span<const double> cuts, double tol, EvalBudget& budget,
                double& err_acc) {
  std::vector<double> pts{a};
  for (double c : cuts) {
    if (c > a && c < b) pts.push_back(c);
  }
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) acc += gk_segment(f, pts[i], pts[i + 1], tol, budget, err_acc);
  return acc;
}

}  // namespace detail

/// Adaptive Gauss–Kronrod (15-point) on [a, b]; optional interior break points.
template <class F>
QuadResult quad_1d_detailed(F&& f, double a, double b, double tol = 1e-10, std::span<const double> cuts = {}) {
  if (!(a < b)) throw std::invalid_argument("quad_1d: need a < b");
  detail::EvalBudget budget;
  QuadResult r;
  r.value = detail::gk_split(f, a, b, cuts, tol, budget, r.error_estimate);
  r.evaluations = budget.used;
  if (r.error_estimate > std::max(tol, 1e-3 * std::abs(r.value))) {
    throw std::runtime_error("quadrature: error estimate exceeds tolerance");
  }
  return r;
}

template <class F>
double quad_1d(F&& f, double a, double b, double tol = 1e-10, std::span<const double> cuts = {}) {
  return quad_1d_detailed(std::forward<F>(f), a, b, tol, cuts).value;
}

/// One coordinate of an integration cell: y_k ranges over [lo, hi], further
/// restricted to y_k ≥ y_{k−1} when the cell is ordered.
struct CellAxis {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> cuts;
};

/// ∫ density(y) dy over the cell, by nested adaptive quadrature. Intended for
/// dimensions ≤ 2 (cost grows geometrically with dimension).
inline QuadResult quad_cell(const std::function<double(std::span<const double>)>& density,
                            const std::vector<CellAxis>& axes, double tol = 1e-9, bool ordered = true) {
  if (axes.empty()) throw std::invalid_argument("quad_cell: empty cell");
  for (const auto& ax : axes) {
    if (!(ax.lo <= ax.hi)) throw std::invalid_argument("quad_cell: axis with lo > hi");
  }
  detail::EvalBudget budget;
  QuadResult r;
  std::vector<double> y(axes.size());
  std::function<double(std::size_t)> level = [&](std::size_t k) -> double {
    double lo = axes[k].lo;
    if (ordered && k > 0) lo = std::max(lo, y[k - 1]);
    const double hi = axes[k].hi;
    if (!(lo < hi)) return 0.0;
    std::vector<double> cuts = axes[k].cuts;
    if (ordered && k + 1 < axes.size()) {
      cuts.push_back(axes[k + 1].lo);
      cuts.push_back(axes[k + 1].hi);
    }
    auto inner = [&](double v) {
      y[k] = v;
      return k + 1 == axes.size() ? density(std::span<const double>(y)) : level(k + 1);
    };
    return detail::gk_split(inner, lo, hi, cuts, tol, budget, r.error_estimate);
  };
  r.value = level(0);
  r.evaluations = budget.used;
  return r;
}

}  // namespace interlace
