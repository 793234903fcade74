#include <gtest/gtest.h>

#include <cmath>

#include <interlace/kernels.hpp>
#include <interlace/matrix_model.hpp>
#include <interlace/parallel.hpp>
#include <interlace/quadrature.hpp>
#include <interlace/stats.hpp>

using namespace interlace;

namespace {

std::vector<double> first_coords(const std::vector<OrderedPoint>& pts) {
  std::vector<double> v;
  for (const auto& p : pts) v.push_back(p[0]);
  return v;
}

template <class F>
std::vector<OrderedPoint> draw(std::size_t n, std::uint64_t seed, F&& f) {
  return parallel_map<OrderedPoint>(n, 0, [&](std::size_t i) {
    RandomStream r(derive_seed(seed, i));
    return f(r);
  });
}

// Both L(x=(0,1,2), .) and LambdaEq_0(x=(1,2), .) have density y2 − y1 on [0,1]×[1,2].
// Counts on a 20×20 grid against exact cell masses; Bonferroni-sized z bound.
void expect_histogram_matches_y2_minus_y1(const std::vector<OrderedPoint>& pts) {
  const int g = 20;
  std::vector<double> count(g * g, 0.0);
  for (const auto& p : pts) {
    ASSERT_GE(p[0], 0.0);
    ASSERT_LE(p[0], 1.0);
    ASSERT_GE(p[1], 1.0);
    ASSERT_LE(p[1], 2.0);
    const int i = std::min(g - 1, static_cast<int>(p[0] * g));
    const int j = std::min(g - 1, static_cast<int>((p[1] - 1.0) * g));
    count[i * g + j] += 1.0;
  }
  const double n = static_cast<double>(pts.size());
  const double h = 1.0 / g;
  double worst = 0.0;
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      const double c1 = (i + 0.5) * h, c2 = 1.0 + (j + 0.5) * h;
      const double mass = h * h * (c2 - c1);
      const double sd = std::sqrt(n * mass * (1.0 - mass));
      worst = std::max(worst, std::abs(count[i * g + j] - n * mass) / sd);
    }
  }
  EXPECT_LT(worst, 4.5);
}

}  // namespace

TEST(DensityL, Examples) {
  EXPECT_DOUBLE_EQ(density_L(OrderedPoint({1.0, 3.0}), OrderedPoint({2.0})), 0.5);
  EXPECT_EQ(density_L(OrderedPoint({1.0, 3.0}), OrderedPoint({4.0})), 0.0);
  EXPECT_DOUBLE_EQ(density_L(OrderedPoint({0.0, 1.0, 2.0}), OrderedPoint({0.5, 1.5})), 1.0);
  EXPECT_THROW(density_L(OrderedPoint({1.0, 1.0}), OrderedPoint({1.0})), std::invalid_argument);
}

TEST(DensityLambdaEq, Examples) {
  EXPECT_DOUBLE_EQ(density_lambda_eq(KernelParams(0.0), OrderedPoint({2.0}), OrderedPoint({1.0})), 0.5);
  EXPECT_DOUBLE_EQ(density_lambda_eq(KernelParams(1.0), OrderedPoint({2.0}), OrderedPoint({1.0})), 0.5);
  const KernelParams p(0.0);
  const OrderedPoint x({1.0, 2.0});
  const auto mass = quad_cell([&](std::span<const double> y) {
    return density_lambda_eq(p, x, OrderedPoint({y[0], y[1]}));
  }, {CellAxis{0.0, 1.0, {}}, CellAxis{1.0, 2.0, {}}});
  EXPECT_NEAR(mass.value, 1.0, 1e-6);
  EXPECT_THROW(KernelParams(-1.0), std::invalid_argument);
}

TEST(DensityLambdaPlus, ClosedFormAtN1) {
  const KernelParams p(0.0);
  const OrderedPoint x({1.0, 2.0});
  EXPECT_NEAR(density_lambda_plus(p, x, OrderedPoint({1.5})), std::log(4.0 / 3.0), 1e-15);
  EXPECT_NEAR(density_lambda_plus(p, x, OrderedPoint({0.5})), std::log(2.0), 1e-15);
  EXPECT_EQ(density_lambda_plus(p, x, OrderedPoint({3.0})), 0.0);
  const double mass = quad_1d([&](double y) { return density_lambda_plus(p, x, OrderedPoint({y})); }, 0.0, 2.0,
                              1e-12, std::vector<double>{1.0});
  EXPECT_NEAR(mass, 1.0, 1e-8);
}

TEST(DensityLambdaPlus, SmallAlphaBranchIsContinuous) {
  const OrderedPoint x({1.0, 2.0});
  const OrderedPoint y({0.7});
  const double at0 = density_lambda_plus(KernelParams(0.0), x, y);
  const double near0 = density_lambda_plus(KernelParams(1e-7), x, y);
  EXPECT_NEAR(at0, near0, 1e-6);
}

TEST(SampleL, UniformAtN1) {
  const auto pts = draw(100000, 11, [](RandomStream& r) { return sample_L(OrderedPoint({0.0, 1.0}), r); });
  const auto rep = ks_test(first_coords(pts), [](double y) { return std::clamp(y, 0.0, 1.0); });
  EXPECT_TRUE(rep.passed) << *rep.p_value;
}

TEST(SampleL, MeanAtN1) {
  const std::size_t n = 20000;
  const auto v = first_coords(draw(n, 12, [](RandomStream& r) { return sample_L(OrderedPoint({1.0, 3.0}), r); }));
  double m = 0.0;
  for (double y : v) m += y;
  m /= static_cast<double>(n);
  // Var of Uniform[1,3] is 1/3.
  EXPECT_NEAR(m, 2.0, 3.0 * std::sqrt(1.0 / 3.0 / static_cast<double>(n)));
}

TEST(SampleL, HistogramAtN2) {
  const auto pts = draw(100000, 13, [](RandomStream& r) { return sample_L(OrderedPoint({0.0, 1.0, 2.0}), r); });
  expect_histogram_matches_y2_minus_y1(pts);
}

TEST(SampleLambdaEq, OneDimensional) {
  const auto a = draw(50000, 14, [](RandomStream& r) { return sample_lambda_eq(KernelParams(0.0), OrderedPoint({2.0}), r); });
  EXPECT_TRUE(ks_test(first_coords(a), [](double y) { return std::clamp(y / 2.0, 0.0, 1.0); }).passed);
  const auto b = first_coords(
      draw(50000, 15, [](RandomStream& r) { return sample_lambda_eq(KernelParams(1.0), OrderedPoint({1.0}), r); }));
  EXPECT_TRUE(ks_test(b, [](double y) { return std::clamp(y * y, 0.0, 1.0); }).passed);
  double m = 0.0;
  for (double y : b) m += y;
  m /= static_cast<double>(b.size());
  // density 2y: variance 1/2 − 4/9.
  EXPECT_NEAR(m, 2.0 / 3.0, 3.0 * std::sqrt((0.5 - 4.0 / 9.0) / static_cast<double>(b.size())));
}

TEST(SampleLambdaEq, HistogramAtN2) {
  const auto pts =
      draw(100000, 16, [](RandomStream& r) { return sample_lambda_eq(KernelParams(0.0), OrderedPoint({1.0, 2.0}), r); });
  expect_histogram_matches_y2_minus_y1(pts);
}

TEST(SampleLambdaPlus, KsAgainstClosedForm) {
  const auto pts =
      draw(100000, 17, [](RandomStream& r) { return sample_lambda_plus(KernelParams(0.0), OrderedPoint({1.0, 2.0}), r); });
  for (const auto& p : pts) {
    ASSERT_GE(p[0], 0.0);
    ASSERT_LE(p[0], 2.0);
  }
  // ∫ ln(2/max(1,u)) du.
  const auto cdf = [](double y) {
    if (y <= 0.0) return 0.0;
    if (y <= 1.0) return y * std::log(2.0);
    if (y >= 2.0) return 1.0;
    return y * std::log(2.0 / y) + y - 1.0;
  };
  const auto rep = ks_test(first_coords(pts), cdf);
  EXPECT_TRUE(rep.passed) << *rep.p_value;
}

TEST(SampleLambdaPlus, MatchesMatrixModel) {
  const OrderedPoint x({1.0, 2.0, 3.0});
  const auto a = draw(5000, 18, [&](RandomStream& r) { return sample_lambda_plus(KernelParams(1.0), x, r); });
  const auto b = draw(5000, 19, [&](RandomStream& r) { return sample_lambda_plus_via_matrices(1, x, r); });
  const auto rep = energy_perm_test(a, b, 20, {499});
  EXPECT_TRUE(rep.passed) << *rep.p_value;
}
