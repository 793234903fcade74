#include <gtest/gtest.h>

#include <cmath>

#include <interlace/generator.hpp>

using namespace interlace;

TEST(PowerExpr, DerivativeMatchesFiniteDifference) {
  const PowerExpr f{{1.5, 2.5, -3.0}, {-0.5, 0.0, 1.5}, {2.0, 1.0, 0.0}};
  const PowerExpr d = derivative(f);
  for (double x : {0.3, 1.0, 4.2}) {
    const double h = 1e-5 * (1.0 + x);
    const double fd = (evaluate(f, x + h) - evaluate(f, x - h)) / (2.0 * h);
    EXPECT_NEAR(evaluate(d, x), fd, 1e-7 * (1.0 + std::abs(fd)));
  }
}

TEST(OneParticle, Examples) {
  const double s = 1.3, a = 0.4;
  const int n = 3;
  const std::vector<double> one{1.0}, lin{0.0, 1.0};
  for (double x : {0.2, 1.0, 5.0}) {
    EXPECT_EQ(apply_generator_1d(s, a, n, one, x), 0.0);
    EXPECT_NEAR(apply_generator_1d(s, a, n, lin, x), (2.0 - 2.0 * n - s) * x + a + 1.0, 1e-12);
  }
  // L_{s+2α−2,−α}^{(N+1)} x^α = d x^α for non-integer α.
  for (double alpha : {0.37, 1.5, 2.2}) {
    const PowerExpr xa{{1.0, alpha, 0.0}};
    const PowerExpr out = pickrell_generator(s + 2.0 * alpha - 2.0, -alpha, n + 1).apply(xa);
    for (double x : {0.3, 2.0}) {
      EXPECT_NEAR(evaluate(out, x), h_constant_d(s, alpha, n) * std::pow(x, alpha), 1e-10 * std::pow(x, alpha) * 10);
    }
  }
}

TEST(Vandermonde, Eigenvalue) {
  EXPECT_EQ(vandermonde_eigenvalue(0.7, 1), 0.0);
  EXPECT_DOUBLE_EQ(vandermonde_eigenvalue(1.0, 2), -3.0);
  EXPECT_DOUBLE_EQ(vandermonde_eigenvalue(0.5, 2), -2.5);
  // N=2 by hand: Δ = x2 − x1 is linear, so only first-order terms act: (2−4−s)Δ.
  for (double s : {0.0, 0.5, 2.0}) {
    EXPECT_DOUBLE_EQ(vandermonde_eigenvalue(s, 2), -2.0 - s);
    EXPECT_TRUE(check_vandermonde_eigen(s, 0.2, {OrderedPoint({0.3, 1.9})}).passed);
    EXPECT_TRUE(check_vandermonde_eigen(s, 0.2, {OrderedPoint({1.0, 2.0, 4.5}), OrderedPoint({0.5})}).passed);
  }
}

TEST(HTransform, Identities) {
  const std::vector<double> xs{0.1, 0.5, 1.0, 3.0, 10.0};
  for (double s : {-0.5, 0.0, 2.0}) {
    for (double a : {0.0, 0.5, 2.0}) {
      for (int n : {1, 2, 4}) {
        const auto r = check_h_transform_identities(s, a, n, xs);
        EXPECT_TRUE(r.passed) << s << " " << a << " " << n << " " << r.statistic;
      }
    }
  }
}

TEST(HTransform, AlphaZeroMakesDVanish) {
  EXPECT_EQ(h_constant_d(1.7, 0.0, 3), 0.0);
  const auto lhs = pickrell_generator(1.7 - 2.0, 0.0, 4);
  const auto rhs = pickrell_generator(1.7, 0.0, 3);
  EXPECT_DOUBLE_EQ(lhs.slope, rhs.slope);
  EXPECT_DOUBLE_EQ(lhs.intercept, rhs.intercept);
}

TEST(Constants, Identity) {
  RandomStream r(1);
  EXPECT_TRUE(check_constants_identity(r).passed);
  EXPECT_DOUBLE_EQ(h_constant_c(1.0, 2), -5.0);
}

TEST(DriftIdentity, RandomPoints) {
  RandomStream r(2);
  for (int n : {1, 2, 5}) {
    std::vector<OrderedPoint> pts;
    for (int k = 0; k < 100; ++k) {
      std::vector<double> v(static_cast<std::size_t>(n));
      for (double& c : v) c = r.uniform(0.01, 10.0);
      pts.push_back(OrderedPoint::from_unsorted(v));
    }
    EXPECT_LE(check_drift_identity(PickrellParams(1.3, 0.6, n), pts).statistic, 1e-10);
  }
}
