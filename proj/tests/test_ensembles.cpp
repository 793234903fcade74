#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/beta.hpp>

#include <interlace/ensembles.hpp>
#include <interlace/quadrature.hpp>
#include <interlace/stats.hpp>

using namespace interlace;

namespace {

std::vector<double> first(const std::vector<OrderedPoint>& pts) {
  std::vector<double> v;
  for (const auto& p : pts) v.push_back(p[0]);
  return v;
}

// CDF of x when x/(1+x) ~ Beta(a, b).
auto beta_prime_cdf(double a, double b) {
  return [a, b](double x) { return x <= 0 ? 0.0 : boost::math::ibeta(a, b, x / (1.0 + x)); };
}

}  // namespace

TEST(PickrellDensity, OneDimensionalNormalization) {
  for (double s : {0.0, 1.0, 2.5}) {
    const EnsembleParams p(s, 0.0, 1);
    EXPECT_NEAR(pickrell_density_unnorm(p, OrderedPoint({1.0})), std::pow(2.0, -2.0 - s), 1e-15);
    // x = u/(1−u), dx = du/(1−u)².
    const double mass = quad_1d([&](double u) {
      const double x = u / (1.0 - u);
      return pickrell_density_unnorm(p, OrderedPoint({x})) / ((1.0 - u) * (1.0 - u));
    }, 0.0, 1.0 - 1e-12);
    EXPECT_NEAR(mass * (1.0 + s), 1.0, 1e-8);
  }
}

TEST(PickrellDensity, CoincidentIsZero) {
  EXPECT_EQ(pickrell_density_unnorm(EnsembleParams(1.0, 0.5, 2), OrderedPoint({1.0, 1.0})), 0.0);
  EXPECT_EQ(laguerre_density_unnorm(0.0, OrderedPoint({2.0, 2.0})), 0.0);
  EXPECT_NEAR(laguerre_density_unnorm(0.0, OrderedPoint({1.5})), std::exp(-1.5), 1e-15);
}

TEST(SamplePickrell, InverseCdfAtN1) {
  RandomStream r(1);
  const auto s = sample_pickrell(EnsembleParams(1.0, 0.0, 1), 10000, r);
  EXPECT_TRUE(s.exact);
  auto v = first(s.points);
  EXPECT_TRUE(ks_test(v, [](double x) { return x <= 0 ? 0.0 : 1.0 - 1.0 / ((1.0 + x) * (1.0 + x)); }).passed);
  std::nth_element(v.begin(), v.begin() + 5000, v.end());
  // Median √2 − 1; sd of the sample median ≈ 1/(2 f(m) √n) with f(m) = 2/(√2)³.
  const double sd = 1.0 / (2.0 * (2.0 / std::pow(std::sqrt(2.0), 3)) * 100.0);
  EXPECT_NEAR(v[5000], std::sqrt(2.0) - 1.0, 3.0 * sd);
}

TEST(SamplePickrell, McmcAtN1) {
  RandomStream r(2);
  McmcOptions opt;
  opt.thin = 50;
  opt.chains = 4;
  const auto s = sample_pickrell(EnsembleParams(1.0, 1.0, 1), 10000, r, opt, EnsembleMethod::Mcmc);
  EXPECT_FALSE(s.exact);
  EXPECT_GT(s.acceptance_rate, 0.05);
  EXPECT_LT(s.acceptance_rate, 0.95);
  const auto rep = ks_test(first(s.points), beta_prime_cdf(2.0, 2.0));
  EXPECT_TRUE(rep.passed) << *rep.p_value;
}

TEST(SamplePickrell, BetaAtN1) {
  RandomStream r(3);
  const auto s = sample_pickrell(EnsembleParams(2.0, 0.5, 1), 20000, r, {}, EnsembleMethod::Exact);
  EXPECT_EQ(s.method, "beta");
  EXPECT_TRUE(ks_test(first(s.points), beta_prime_cdf(1.5, 3.0)).passed);
}

TEST(SamplePickrell, WishartRatioMatchesMcmcAtN2) {
  const EnsembleParams p(1.0, 1.0, 2);
  RandomStream r1(4), r2(5);
  McmcOptions opt;
  opt.thin = 50;
  opt.chains = 4;
  const auto a = sample_pickrell(p, 4000, r1, opt, EnsembleMethod::Exact);
  const auto b = sample_pickrell(p, 4000, r2, opt, EnsembleMethod::Mcmc);
  EXPECT_EQ(a.method, "wishart-ratio");
  for (const auto& x : b.points) ASSERT_TRUE(x.strictly_interior());
  for (const auto& x : a.points) ASSERT_TRUE(x.strictly_interior());
  const auto rep = energy_perm_test(a.points, b.points, 6, {499});
  EXPECT_TRUE(rep.passed) << *rep.p_value;
}

TEST(SamplePickrell, Validation) {
  RandomStream r(7);
  EXPECT_THROW(sample_pickrell(EnsembleParams(-1.0, 0.0, 1), 10, r), std::invalid_argument);
  EXPECT_THROW(sample_pickrell(EnsembleParams(1.0, 0.5, 2), 10, r, {}, EnsembleMethod::Exact), std::invalid_argument);
  McmcOptions bad;
  bad.thin = 0;
  EXPECT_THROW(sample_pickrell(EnsembleParams(1.0, 0.5, 2), 10, r, bad), std::invalid_argument);
  EXPECT_THROW(EnsembleParams(1.0, -1.0, 1), std::invalid_argument);
}

TEST(SamplePickrell, ChainsIndependentOfThreads) {
  McmcOptions opt;
  opt.burn_in = 100;
  opt.chains = 3;
  auto run = [&](unsigned threads) {
    RandomStream r(8);
    McmcOptions o = opt;
    o.threads = threads;
    return sample_pickrell(EnsembleParams(1.0, 0.5, 2), 30, r, o).points;
  };
  EXPECT_EQ(run(1), run(3));
}

TEST(SampleLaguerre, Gamma) {
  RandomStream r(9);
  std::vector<double> a, b;
  for (int i = 0; i < 20000; ++i) {
    a.push_back(sample_laguerre(0, 1, r)[0]);
    b.push_back(sample_laguerre(2, 1, r)[0]);
  }
  EXPECT_TRUE(ks_test(a, [](double x) { return x <= 0 ? 0.0 : -std::expm1(-x); }).passed);
  EXPECT_TRUE(ks_test(b, [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-x) * (1.0 + x + 0.5 * x * x); }).passed);
  const auto y = sample_laguerre(1, 3, r);
  EXPECT_TRUE(y.strictly_interior());
}

TEST(JacobiMap, Examples) {
  EXPECT_DOUBLE_EQ(jacobi_map(OrderedPoint({1.0}))[0], 0.5);
  EXPECT_EQ(jacobi_map(OrderedPoint({0.0}))[0], 0.0);
  const OrderedPoint x({0.2, 1.7, 30.0});
  const auto back = jacobi_map_inverse(jacobi_map(x));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(back[i], x[i], 1e-12 * (1.0 + x[i]));
  EXPECT_THROW(jacobi_map_inverse(OrderedPoint({0.5, 1.0})), std::domain_error);
}

TEST(JacobiEnsemble, DensityAndPushForward) {
  EXPECT_EQ(jacobi_ensemble_density_unnorm(0.0, 0.0, OrderedPoint({0.3})), 1.0);
  EXPECT_EQ(jacobi_ensemble_density_unnorm(1.0, 2.0, OrderedPoint({0.3, 0.3})), 0.0);
  RandomStream r(10);
  const auto s = sample_pickrell(EnsembleParams(1.0, 0.0, 1), 20000, r);
  std::vector<double> u;
  for (const auto& x : s.points) u.push_back(jacobi_map(x)[0]);
  // Beta(1, 2): CDF 1 − (1−u)².
  EXPECT_TRUE(ks_test(u, [](double v) { return 1.0 - (1.0 - v) * (1.0 - v); }).passed);
}
