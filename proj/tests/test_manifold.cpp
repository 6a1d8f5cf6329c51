// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "checks.hpp"
#include "oracle.hpp"
#include "tcrcg/manifold.hpp"
#include "tcrcg/tc_algebra.hpp"
#include "tcrcg/tube_transform.hpp"

using namespace tcrcg;

namespace {

TangentPoint random_point(Dims d, const MultiRank& r, SplitMix64& rng) {
  return TangentPoint(tcsvd(checks::planted(d, r, 1.0, 3.0, rng)));
}

}  // namespace

TEST(TangentProject, InvariantsOnRandomPoints) {
  SplitMix64 rng(1);
  for (int t = 0; t < 30; ++t) {
    const checks::ManifoldResult m = checks::manifold_invariants(rng, 6);
    EXPECT_LE(m.idempotence, 1e-10);
    EXPECT_LE(m.adjointness, 1e-12);
    EXPECT_LE(m.complement, 1e-10);
    EXPECT_LE(m.op_norm_excess, 1e-10);
    EXPECT_LE(m.fixed_point, 1e-10);
    EXPECT_TRUE(m.rank_kept);
    EXPECT_GE(m.slope, 1.8);
  }
}

TEST(TangentProject, MatchesExplicitSliceProjector) {
  SplitMix64 rng(2);
  const Dims d{4, 3, 3};
  const MultiRank r({2, 1, 3});
  const TangentPoint at = random_point(d, r, rng);
  const Tensor3 a = oracle::random_tensor(d, rng);
  const Tensor3 got = oracle::dct3(tangent_project(at, a));
  const Tensor3 ah = oracle::dct3(a);
  const auto b = oracle::bases(at.value(), {2, 1, 3});
  for (std::size_t k = 0; k < d.n3; ++k) {
    const Eigen::MatrixXd s = oracle::slice(ah, k);
    const Eigen::VectorXd want = oracle::tangent_projector_matrix(b.u[k], b.v[k]) *
                                 Eigen::Map<const Eigen::VectorXd>(s.data(), s.size());
    const Eigen::MatrixXd g = oracle::slice(got, k);
    EXPECT_LE((Eigen::Map<const Eigen::VectorXd>(g.data(), g.size()) - want).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(TangentProject, PointLiesInItsTangentSpace) {
  SplitMix64 rng(3);
  const TangentPoint at = random_point(Dims{5, 4, 3}, MultiRank({2, 1, 2}), rng);
  EXPECT_LE(oracle::max_abs_diff(tangent_project(at, at.value()), at.value()), 1e-10);
}

TEST(TangentProject, TransformedFormAgrees) {
  SplitMix64 rng(4);
  const Dims d{5, 6, 4};
  const TangentPoint at = random_point(d, MultiRank::uniform(4, 2), rng);
  const Tensor3 a = oracle::random_tensor(d, rng);
  EXPECT_LE(oracle::max_abs_diff(idct3(tangent_project_transformed(at, dct3(a))), tangent_project(at, a)), 1e-12);
}

TEST(RiemannianGradient, ZeroInputGivesZero) {
  SplitMix64 rng(5);
  const Dims d{4, 4, 2};
  const TangentPoint at = random_point(d, MultiRank::uniform(2, 1), rng);
  EXPECT_EQ(oracle::fro(riemannian_gradient(at, Tensor3(d))), 0.0);
}

// For f(X) = 0.5 ||X - B||^2 the directional derivative along a tangent
// direction xi is <grad f, xi>; compare with central differences through
// the retraction.
TEST(RiemannianGradient, MatchesFiniteDifferences) {
  SplitMix64 rng(6);
  const Dims d{5, 4, 3};
  const MultiRank r({2, 1, 2});
  const TangentPoint at = random_point(d, r, rng);
  const Tensor3 b = oracle::random_tensor(d, rng);
  auto f = [&](const Tensor3& x) {
    const double n = fro_norm(x - b);
    return 0.5 * n * n;
  };
  const Tensor3 grad = riemannian_gradient(at, at.value() - b);
  Tensor3 xi = tangent_project(at, oracle::random_tensor(d, rng));
  xi *= 1.0 / fro_norm(xi);
  const double want = inner(grad, xi);
  for (double t : {1e-3, 1e-4, 1e-5}) {
    const double fp = f(retract(at, t * xi, r).point.value());
    const double fm = f(retract(at, -t * xi, r).point.value());
    EXPECT_NEAR((fp - fm) / (2 * t), want, 1e-4 * (1.0 + std::fabs(want))) << "t=" << t;
  }
}

TEST(Retract, RankDropIsReported) {
  SplitMix64 rng(7);
  const Dims d{4, 4, 2};
  const MultiRank r = MultiRank::uniform(2, 1);
  const TangentPoint at = random_point(d, r, rng);
  // Stepping back onto the origin removes all rank.
  const Retraction out = retract(at, -1.0 * at.value(), r);
  EXPECT_TRUE(out.rank_drop);
  EXPECT_EQ(out.point.multi_rank(), MultiRank::uniform(2, 0));
}

TEST(Retract, KeepsMixedMultiRank) {
  SplitMix64 rng(8);
  const Dims d{6, 5, 4};
  const MultiRank r({3, 0, 1, 2});
  const TangentPoint at = random_point(d, r, rng);
  Tensor3 xi = tangent_project(at, oracle::random_tensor(d, rng));
  xi *= 0.1;
  const Retraction out = retract(at, xi, r);
  EXPECT_FALSE(out.rank_drop);
  EXPECT_EQ(out.point.multi_rank(), r);
  EXPECT_EQ(multi_rank_of(out.point.value()), r);
}

TEST(VectorTransport, ProjectsOntoTargetTangentSpace) {
  SplitMix64 rng(9);
  const Dims d{5, 5, 3};
  const MultiRank r = MultiRank::uniform(3, 2);
  const TangentPoint x = random_point(d, r, rng);
  const TangentPoint y = random_point(d, r, rng);
  const Tensor3 xi = tangent_project(x, oracle::random_tensor(d, rng));
  const Tensor3 moved = vector_transport(x, y, xi);
  EXPECT_LE(oracle::max_abs_diff(tangent_project(y, moved), moved), 1e-10);
  EXPECT_LE(fro_norm(moved), fro_norm(xi) * (1 + 1e-12));
  EXPECT_LE(oracle::max_abs_diff(vector_transport(x, x, xi), xi), 1e-10);
  const Tensor3 eta = tangent_project(x, oracle::random_tensor(d, rng));
  EXPECT_LE(oracle::max_abs_diff(vector_transport(x, y, xi + 2.0 * eta), moved + 2.0 * vector_transport(x, y, eta)), 1e-10);
}

TEST(ManifoldDim, Examples) {
  EXPECT_EQ(manifold_dim(Dims{5, 4, 3}, MultiRank({2, 1, 0})), 22u);
  EXPECT_EQ(manifold_dim(Dims{6, 6, 2}, MultiRank::uniform(2, 6)), 72u);
  EXPECT_EQ(manifold_dim(Dims{7, 3, 4}, MultiRank::uniform(4, 0)), 0u);
  // Sum over slices of (n1 + n2 - r_k) r_k.
  EXPECT_EQ(manifold_dim(Dims{20, 20, 20}, MultiRank::uniform(20, 2)), 20u * 76u);
  EXPECT_THROW((void)manifold_dim(Dims{3, 3, 2}, MultiRank::uniform(2, 4)), ShapeError);
}
