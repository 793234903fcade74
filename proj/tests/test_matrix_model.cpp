#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include <interlace/matrix_model.hpp>
#include <interlace/kernels.hpp>
#include <interlace/parallel.hpp>
#include <interlace/stats.hpp>

using namespace interlace;

namespace {

template <class F>
std::vector<OrderedPoint> draw(std::size_t n, std::uint64_t seed, F&& f) {
  return parallel_map<OrderedPoint>(n, 0, [&](std::size_t i) {
    RandomStream r(derive_seed(seed, i));
    return f(r);
  });
}

std::vector<double> first_coords(const std::vector<OrderedPoint>& pts) {
  std::vector<double> v;
  for (const auto& p : pts) v.push_back(p[0]);
  return v;
}

}  // namespace

TEST(Ginibre, Moments) {
  RandomStream r(1);
  const int n = 100000;
  double m2 = 0.0;
  std::complex<double> m1 = 0.0;
  std::vector<double> mod2;
  for (int i = 0; i < n; ++i) {
    const auto z = sample_ginibre(1, 1, r)(0, 0);
    m1 += z;
    m2 += std::norm(z);
    mod2.push_back(std::norm(z));
  }
  // |z|² ~ Exp(1): variance 1.
  EXPECT_NEAR(m2 / n, 1.0, 3.0 / std::sqrt(n));
  EXPECT_NEAR(std::abs(m1 / static_cast<double>(n)), 0.0, 4.0 * std::sqrt(1.0 / n));
  EXPECT_TRUE(ks_test(mod2, [](double x) { return x <= 0 ? 0.0 : -std::expm1(-x); }).passed);
}

TEST(Haar, UnitaryAndUniformColumns) {
  RandomStream r(2);
  const int n = 4, reps = 20000;
  double m = 0.0, m2 = 0.0;
  for (int k = 0; k < reps; ++k) {
    const ComplexMatrix u = sample_haar(n, r);
    if (k < 50) {
      const double err = (u.adjoint() * u - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
      EXPECT_LT(err, 1e-10);
    }
    const double v = std::norm(u(0, 0));
    m += v;
    m2 += v * v;
  }
  m /= reps;
  const double sd = std::sqrt((m2 / reps - m * m) / reps);
  EXPECT_NEAR(m, 1.0 / n, 3.0 * sd);
}

TEST(Haar, OneByOneIsOnCircle) {
  RandomStream r(3);
  std::complex<double> acc = 0.0;
  const int reps = 20000;
  for (int k = 0; k < reps; ++k) {
    const auto z = sample_haar(1, r)(0, 0);
    EXPECT_NEAR(std::abs(z), 1.0, 1e-12);
    acc += z;
  }
  // Each coordinate has variance 1/2.
  EXPECT_LT(std::abs(acc / static_cast<double>(reps)), 4.0 * std::sqrt(0.5 / reps));
}

TEST(Corner, Examples) {
  EXPECT_TRUE(corner(ComplexMatrix::Identity(3, 3), 2, 2).isApprox(ComplexMatrix::Identity(2, 2)));
  RandomStream r(4);
  const ComplexMatrix x = sample_ginibre(4, 3, r);
  EXPECT_EQ(corner(x, 4, 3), x);
  EXPECT_EQ(corner(corner(x, 3, 3), 2, 1), corner(x, 2, 1));
  EXPECT_THROW(corner(x, 5, 1), std::invalid_argument);
}

TEST(RadialPart, Examples) {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 3.0;
  const auto rp = radial_part(d);
  EXPECT_NEAR(rp[0], 4.0, 1e-12);
  EXPECT_NEAR(rp[1], 9.0, 1e-12);
  const auto z = radial_part(ComplexMatrix::Zero(3, 2));
  EXPECT_EQ(z[0], 0.0);
  EXPECT_EQ(z[1], 0.0);
  RandomStream r(5);
  const ComplexMatrix x = sample_ginibre(4, 3, r);
  const auto a = radial_part(x);
  const auto b = radial_part(sample_haar(4, r) * x * sample_haar(3, r));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(a[i], b[i], 1e-8 * std::max(1.0, a[i]));
}

TEST(MatrixKernels, LambdaPlusKsAtN1) {
  const auto pts = draw(100000, 6, [](RandomStream& r) { return sample_lambda_plus_via_matrices(0, OrderedPoint({1.0, 2.0}), r); });
  const auto cdf = [](double y) {
    if (y <= 0.0) return 0.0;
    if (y <= 1.0) return y * std::log(2.0);
    if (y >= 2.0) return 1.0;
    return y * std::log(2.0 / y) + y - 1.0;
  };
  const auto rep = ks_test(first_coords(pts), cdf);
  EXPECT_TRUE(rep.passed) << *rep.p_value;
}

TEST(MatrixKernels, ZeroInputs) {
  RandomStream r(7);
  const auto y = sample_lambda_plus_via_matrices(1, OrderedPoint({0.0, 0.0, 0.0}), r);
  for (std::size_t i = 0; i < y.dim(); ++i) EXPECT_EQ(y[i], 0.0);
  EXPECT_EQ(sample_lambda_eq_via_matrices(0, OrderedPoint({0.0}), r)[0], 0.0);
}

TEST(MatrixKernels, LambdaEqUniformAtN1) {
  const auto pts = draw(50000, 8, [](RandomStream& r) { return sample_lambda_eq_via_matrices(0, OrderedPoint({1.0}), r); });
  EXPECT_TRUE(ks_test(first_coords(pts), [](double y) { return std::clamp(y, 0.0, 1.0); }).passed);
}

TEST(MatrixKernels, LambdaEqMatchesRejection) {
  const OrderedPoint z({1.0, 2.0});
  const auto a = draw(5000, 9, [&](RandomStream& r) { return sample_lambda_eq_via_matrices(1, z, r); });
  const auto b = draw(5000, 10, [&](RandomStream& r) { return sample_lambda_eq(KernelParams(1.0), z, r); });
  EXPECT_TRUE(energy_perm_test(a, b, 11, {499}).passed);
}

TEST(CharF, Examples) {
  EXPECT_NEAR(char_F_omega(BoundaryPoint({}, 1.0), 0.5), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(char_F_omega(BoundaryPoint({0.25}, 0.25), 1.0), 0.5, 1e-15);
  EXPECT_EQ(char_F_omega(BoundaryPoint({0.3, 0.1}, 2.0), 0.0), 1.0);
}

TEST(POmega, ZeroAndCharacteristicFunction) {
  RandomStream r(12);
  EXPECT_EQ(sample_P_omega_corner(BoundaryPoint({}, 0.0), 2, 2, r).cwiseAbs().maxCoeff(), 0.0);
  const auto lam = sample_lambda_omega(0, 2, BoundaryPoint({}, 0.0), r);
  EXPECT_EQ(lam[1], 0.0);
  for (const auto& w : {BoundaryPoint({}, 0.7), BoundaryPoint({0.4}, 0.4)}) {
    const int n = 100000;
    for (double freq : {0.1, 0.5, 1.0}) {
      double acc = 0.0, acc2 = 0.0;
      RandomStream rr(derive_seed(13, static_cast<std::uint64_t>(freq * 100)));
      for (int k = 0; k < n; ++k) {
        const double c = std::cos(freq * sample_P_omega_corner(w, 1, 1, rr)(0, 0).real());
        acc += c;
        acc2 += c * c;
      }
      const double m = acc / n;
      const double se = std::sqrt((acc2 / n - m * m) / n);
      EXPECT_NEAR(m, char_F_omega(w, freq), 3.5 * se + 1e-12) << "freq " << freq;
    }
  }
}
