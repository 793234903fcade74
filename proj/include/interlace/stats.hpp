#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "chamber.hpp"
#include "parallel.hpp"
#include "random.hpp"

namespace interlace {

using MetaValue = std::variant<bool, long long, double, std::string>;

struct TestReport {
  std::string name;
  double statistic = 0.0;
  /// Absent for deterministic checks.
  std::optional<double> p_value;
  double threshold = 0.0;
  bool passed = false;
  std::map<std::string, MetaValue> meta;

  static TestReport statistical(std::string name, double statistic, double p, double threshold) {
    TestReport r;
    r.name = std::move(name);
    r.statistic = statistic;
    r.p_value = p;
    r.threshold = threshold;
    r.passed = p > threshold;
    return r;
  }

  static TestReport deterministic(std::string name, double statistic, double threshold) {
    TestReport r;
    r.name = std::move(name);
    r.statistic = statistic;
    r.threshold = threshold;
    r.passed = statistic <= threshold;
    return r;
  }
};

inline constexpr double kDefaultLevel = 0.01;

/// P(K > t) for the Kolmogorov distribution.
inline double kolmogorov_survival(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 1.0) {
    // Theta-function form, accurate for small t.
    const double pi = 3.14159265358979323846;
    double acc = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double m = 2.0 * k - 1.0;
      const double term = std::exp(-m * m * pi * pi / (8.0 * t * t));
      acc += term;
      if (term < 1e-18) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / t * acc, 0.0, 1.0);
  }
  double acc = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    acc += (k % 2 == 1 ? 1.0 : -1.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * acc, 0.0, 1.0);
}

/// One-sample KS statistic sup|F_n − F| and its asymptotic p-value
/// (Stephens' finite-n correction of the argument).
template <class Cdf>
TestReport ks_test(std::vector<double> samples, Cdf&& cdf, std::string name = "ks", double level = kDefaultLevel) {
  const std::size_t n = samples.size();
  if (n == 0) throw std::invalid_argument("ks_test: empty sample");
  std::sort(samples.begin(), samples.end());
  double d = 0.0;
  const double nn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / nn - f, f - i / nn});
  }
  const double sq = std::sqrt(nn);
  const double p = kolmogorov_survival((sq + 0.12 + 0.11 / sq) * d);
  TestReport r = TestReport::statistical(std::move(name), d, p, level);
  r.meta["n"] = static_cast<long long>(n);
  return r;
}

struct EnergyTestOptions {
  std::size_t n_perm = 999;
  unsigned threads = 0;
  double level = kDefaultLevel;
};

namespace detail {

/// Unit directions used to slice d-dimensional samples, and the constant
/// c_d with E‖X‖ = c_d · E_θ|⟨θ, X⟩|.
struct Slices {
  std::vector<std::vector<double>> dirs;
  double scale = 1.0;
};

inline Slices make_slices(std::size_t d) {
  Slices s;
  if (d == 1) {
    s.dirs.push_back({1.0});
    return s;
  }
  const double pi = 3.14159265358979323846;
  if (d == 2) {
    for (int k = 0; k < 64; ++k) {
      const double t = pi * (k + 0.5) / 64.0;
      s.dirs.push_back({std::cos(t), std::sin(t)});
    }
  } else {
    // Fibonacci points on S^2; for d > 3 the three coordinates cycle through the axes.
    const std::size_t m = 128;
    const double golden = pi * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < m; ++k) {
      const double z = 1.0 - (2.0 * k + 1.0) / static_cast<double>(m);
      const double r = std::sqrt(1.0 - z * z);
      const double phi = golden * static_cast<double>(k);
      std::vector<double> v(d, 0.0);
      const double base[3] = {r * std::cos(phi), r * std::sin(phi), z};
      for (std::size_t c = 0; c < 3; ++c) v[(c + k) % d] = base[c];
      s.dirs.push_back(std::move(v));
    }
  }
  s.scale = std::sqrt(pi) * std::tgamma((d + 1.0) / 2.0) / std::tgamma(d / 2.0);
  return s;
}

/// 1-D energy statistic from the sorted pooled sample zs (zs[k] = z[order[k]])
/// and labels (1 = A). V-statistic form: 2·mean|a−b| − mean|a−a′| − mean|b−b′|.
inline double energy_sorted(const std::vector<double>& zs, const std::vector<std::uint32_t>& order,
                            const std::vector<char>& is_a, double total_pairs_sum, double na, double nb) {
  double c[2] = {0.0, 0.0}, s[2] = {0.0, 0.0}, within[2] = {0.0, 0.0};
  const std::size_t n = zs.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double v = zs[k];
    const int g = is_a[order[k]];
    within[g] += c[g] * v - s[g];
    c[g] += 1.0;
    s[g] += v;
  }
  const double saa = within[1], sbb = within[0];
  const double sab = total_pairs_sum - saa - sbb;
  return 2.0 * sab / (na * nb) - 2.0 * saa / (na * na) - 2.0 * sbb / (nb * nb);
}

}  // namespace detail

/// Energy-distance two-sample test with label-permutation p-value
/// (1 + #{perm ≥ obs})/(1 + n_perm). For d > 1 the distance is the sliced
/// form c_d · mean over directions of the 1-D statistic.
inline TestReport energy_perm_test(const std::vector<OrderedPoint>& a, const std::vector<OrderedPoint>& b,
                                   std::uint64_t seed, EnergyTestOptions opt = {}, std::string name = "energy") {
  if (a.empty() || b.empty()) throw std::invalid_argument("energy_perm_test: empty sample");
  const std::size_t d = a.front().dim();
  for (const auto& v : a) {
    if (v.dim() != d) throw std::invalid_argument("energy_perm_test: mixed dimensions");
  }
  for (const auto& v : b) {
    if (v.dim() != d) throw std::invalid_argument("energy_perm_test: mixed dimensions");
  }
  const std::size_t n = a.size() + b.size();
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const detail::Slices slices = detail::make_slices(d);

  struct Projection {
    std::vector<double> z;
    std::vector<std::uint32_t> order;
    double total = 0.0;
  };
  std::vector<Projection> proj(slices.dirs.size());
  for (std::size_t s = 0; s < slices.dirs.size(); ++s) {
    auto& pr = proj[s];
    pr.z.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const OrderedPoint& pt = i < a.size() ? a[i] : b[i - a.size()];
      double acc = 0.0;
      for (std::size_t c = 0; c < d; ++c) acc += slices.dirs[s][c] * pt[c];
      pr.z[i] = acc;
    }
    pr.order.resize(n);
    std::iota(pr.order.begin(), pr.order.end(), 0u);
    std::stable_sort(pr.order.begin(), pr.order.end(), [&](auto l, auto r) { return pr.z[l] < pr.z[r]; });
    std::vector<double> sorted(n);
    for (std::size_t k = 0; k < n; ++k) sorted[k] = pr.z[pr.order[k]];
    pr.z = std::move(sorted);
    double cnt = 0.0, sum = 0.0;
    for (double v : pr.z) {
      pr.total += cnt * v - sum;
      cnt += 1.0;
      sum += v;
    }
  }

  auto statistic = [&](const std::vector<char>& labels) {
    double acc = 0.0;
    for (const auto& pr : proj) acc += detail::energy_sorted(pr.z, pr.order, labels, pr.total, na, nb);
    return slices.scale * acc / static_cast<double>(proj.size());
  };

  std::vector<char> labels(n, 0);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(a.size()), 1);
  const double observed = statistic(labels);
  // Ties within rounding count as "at least as extreme".
  const double tol = 1e-12 * std::max(1.0, std::abs(observed));

  const auto exceed = parallel_map<char>(opt.n_perm, opt.threads, [&](std::size_t k) -> char {
    RandomStream rng(derive_seed(derive_seed(seed, StreamTag::Permutation), k));
    std::vector<char> perm = labels;
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    return statistic(perm) >= observed - tol ? 1 : 0;
  });
  const std::size_t count = static_cast<std::size_t>(std::count(exceed.begin(), exceed.end(), 1));
  const double p = (1.0 + static_cast<double>(count)) / (1.0 + static_cast<double>(opt.n_perm));
  TestReport r = TestReport::statistical(std::move(name), observed, p, opt.level);
  r.meta["n_a"] = static_cast<long long>(a.size());
  r.meta["n_b"] = static_cast<long long>(b.size());
  r.meta["n_perm"] = static_cast<long long>(opt.n_perm);
  r.meta["slices"] = static_cast<long long>(proj.size());
  r.meta["perm_seed"] = std::to_string(seed);
  return r;
}

/// Convenience overload for scalar samples.
inline TestReport energy_perm_test(const std::vector<double>& a, const std::vector<double>& b, std::uint64_t seed,
                                   EnergyTestOptions opt = {}, std::string name = "energy") {
  std::vector<OrderedPoint> pa, pb;
  pa.reserve(a.size());
  pb.reserve(b.size());
  for (double v : a) pa.emplace_back(std::vector<double>{v}, Domain::WholeLine);
  for (double v : b) pb.emplace_back(std::vector<double>{v}, Domain::WholeLine);
  return energy_perm_test(pa, pb, seed, opt, std::move(name));
}

}  // namespace interlace
