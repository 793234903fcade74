#include <gtest/gtest.h>

#include <cmath>

#include <interlace/verify.hpp>

using namespace interlace;

namespace {

VerifyOptions opts(std::uint64_t seed, std::size_t n_perm = 499) {
  VerifyOptions o;
  o.seed = seed;
  o.n_perm = n_perm;
  return o;
}

}  // namespace

TEST(Verify, NormalizationAndDecomposition) {
  for (double a : {0.0, 0.5, 2.0}) {
    EXPECT_TRUE(check_kernel_normalization(KernelKind::L, a, OrderedPoint({1.0, 2.0})).passed);
    EXPECT_TRUE(check_kernel_normalization(KernelKind::LambdaEq, a, OrderedPoint({1.0, 2.0})).passed);
    EXPECT_TRUE(check_kernel_normalization(KernelKind::LambdaPlus, a, OrderedPoint({0.5, 1.0, 3.0})).passed);
  }
  for (double a : {0.0, 1.0}) EXPECT_TRUE(check_decomposition(a, OrderedPoint({1.0, 2.0})).passed);
  EXPECT_TRUE(check_decomposition(0.5, OrderedPoint({0.5, 1.0, 2.0}), 5).passed);
}

TEST(Verify, LambdaPlusCdfClosedForm) {
  EXPECT_NEAR(lambda_plus_cdf_1(0.0, OrderedPoint({1.0, 2.0}), 1.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(lambda_plus_cdf_1(0.0, OrderedPoint({1.0, 2.0}), 2.0), 1.0, 1e-15);
}

TEST(Verify, ZeroHorizonAlwaysPasses) {
  const OrderedPoint x({1.0, 2.0});
  EXPECT_TRUE(check_intertwine_laguerre(0.0, x, 0.0, 2000, 1e-3, opts(1)).passed);
  EXPECT_TRUE(check_intertwine_pickrell(1.0, 0.0, x, 0.0, 2000, 1e-3, opts(2)).passed);
  EXPECT_TRUE(check_shifted_intertwine(KernelKind::L, 1.0, 0.0, x, 0.0, 2000, 1e-3, opts(3)).passed);
  EXPECT_TRUE(check_invariance_pickrell(1.0, 0.0, 1, 0.0, 2000, 1e-3, opts(4)).passed);
}

TEST(Verify, PickrellIntertwiningSmall) {
  const OrderedPoint x({1.0, 2.0});
  const auto r = check_intertwine_pickrell(1.0, 0.0, x, 0.5, 5000, 1e-3, opts(5));
  EXPECT_TRUE(r.passed) << *r.p_value;
  const auto c = check_intertwine_pickrell(1.0, 0.0, x, 0.5, 5000, 1e-3, opts(6), 3.0);
  EXPECT_TRUE(c.passed) << "control p " << *c.p_value;
}

TEST(Verify, LaguerreControlDetectsMismatch) {
  const auto c = check_intertwine_laguerre(0.0, OrderedPoint({1.0, 2.0}), 0.5, 5000, 1e-3, opts(7), 2.0);
  EXPECT_TRUE(c.passed) << *c.p_value;
  EXPECT_EQ(std::get<bool>(c.meta.at("control")), true);
}

TEST(Verify, ShiftedLambdaEqNonIntegerAlpha) {
  const auto r = check_shifted_intertwine(KernelKind::LambdaEq, 1.0, 0.5, OrderedPoint({1.0, 2.0}), 0.3, 3000, 1e-3, opts(8));
  EXPECT_TRUE(r.passed) << *r.p_value;
}

TEST(Verify, InvarianceAndControl) {
  EXPECT_TRUE(check_invariance_pickrell(1.0, 0.0, 1, 0.5, 4000, 1e-3, opts(9)).passed);
  EXPECT_TRUE(check_invariance_pickrell(1.0, 0.0, 1, 0.5, 4000, 1e-3, opts(10), 3.0).passed);
}

TEST(Verify, Consistency) {
  for (auto which : {Consistency::Eq49a, Consistency::Eq49b, Consistency::Eq49c}) {
    const auto r = check_consistency(which, 1.0, 0.0, 1, 4000, opts(11));
    EXPECT_TRUE(r.passed) << consistency_name(which) << " p=" << *r.p_value;
  }
}

TEST(Verify, FlowStartEmbedsPrescribedPoint) {
  const auto x = flow_start(50, 0.5, 3.0);
  const auto w = embed_boundary(x);
  EXPECT_NEAR(w.gamma(), 3.0, 1e-12);
  EXPECT_NEAR(w.alphas()[0], 0.5, 1e-12);
  EXPECT_THROW(flow_start(50, 3.0, 3.0), std::invalid_argument);
}

TEST(Verify, FlowFixedPointAndHalfLife) {
  const auto fixed = check_flow_convergence(0.0, 50, 0.2, 1.0, {0.25, 0.5, 1.0}, 100, 1e-3, opts(12));
  EXPECT_TRUE(fixed.passed) << fixed.statistic;
  const auto st = simulate_flow_statistics(0.0, 50, 0.5, 3.0, {std::log(2.0)}, 100, 1e-3, 13, 0);
  EXPECT_NEAR(st.flow_gamma[0], 2.0, 1e-12);
  EXPECT_NEAR(st.mean_gamma[0], 2.0, 0.05);
}

TEST(Verify, OmegaCoherence) {
  const BoundaryPoint w({0.5}, 1.0);
  EXPECT_TRUE(check_omega_coherence_plus(0, 1, w, 5000, opts(14)).passed);
  EXPECT_TRUE(check_omega_coherence_eq(0, 1, w, 5000, opts(15)).passed);
  EXPECT_TRUE(check_omega_charfn(BoundaryPoint({0.3}, 0.5), {0.1, 0.5, 1.0}, 50000, opts(16)).passed);
}

TEST(Verify, BranchingChecks) {
  EXPECT_TRUE(check_branching_row_sums(JacobiParams(0, 0)).passed);
  EXPECT_TRUE(check_mv_jacobi_at_one(JacobiParams(0, 0)).passed);
  EXPECT_NEAR(extrapolate_to_zero({0.4, 0.2, 0.1}, {1.0 + 0.4 + 0.16, 1.0 + 0.2 + 0.04, 1.0 + 0.1 + 0.01}), 1.0, 1e-12);
  EXPECT_EQ(partitions_up_to(2, 2).size(), 4u);
}

TEST(Verify, SuiteParsingAndSeeds) {
  EXPECT_EQ(parse_suite("flow"), Suite::Flow);
  EXPECT_EQ(parse_suite("branching-limit"), Suite::BranchingLimit);
  EXPECT_FALSE(parse_suite("nope").has_value());
  EXPECT_EQ(name_hash(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(name_hash("a"), 0xaf63dc4c8601ec8cULL);
  VerifyOptions o;
  o.seed = 3;
  EXPECT_NE(with_seed_for(o, "x").seed, with_seed_for(o, "y").seed);
}

TEST(Verify, IdentitiesSuiteDeterministic) {
  VerifyOptions o;
  o.seed = 7;
  const auto a = run_suite(Suite::Identities, o);
  const auto b = run_suite(Suite::Identities, o);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(a[i].passed) << a[i].name;
    EXPECT_EQ(a[i].statistic, b[i].statistic);
  }
}
