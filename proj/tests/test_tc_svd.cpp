// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "checks.hpp"
#include "oracle.hpp"
#include "tcrcg/tc_algebra.hpp"
#include "tcrcg/tc_svd.hpp"

using namespace tcrcg;

namespace {

Tensor3 rnd(Dims d, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return oracle::random_tensor(d, rng);
}

std::vector<std::size_t> vec(const MultiRank& r) { return {r.ranks().begin(), r.ranks().end()}; }

// Transformed slice k of F^T * F must equal diag(I_{r_k}, 0).
void expect_partial_orthonormal(const Tensor3& f, const MultiRank& r) {
  const Tensor3 g = oracle::dct3(tprod(ttranspose(f), f));
  const std::size_t w = f.dims().n2;
  for (std::size_t k = 0; k < f.dims().n3; ++k) {
    Eigen::MatrixXd want = Eigen::MatrixXd::Zero(w, w);
    want.topLeftCorner(r[k], r[k]).setIdentity();
    EXPECT_LE((oracle::slice(g, k) - want).cwiseAbs().maxCoeff(), 1e-10) << "slice " << k;
  }
}

}  // namespace

TEST(MultiRank, ParseAndQueries) {
  const MultiRank u = MultiRank::parse("2", 4);
  EXPECT_EQ(u, MultiRank::uniform(4, 2));
  const MultiRank m = MultiRank::parse("29,5,1", 3);
  EXPECT_EQ(m.tubal(), 29u);
  EXPECT_EQ(m.total(), 35u);
  EXPECT_EQ(m.size(), 3u);
  EXPECT_THROW(MultiRank::parse("1,2", 3), std::invalid_argument);
  EXPECT_THROW(MultiRank::parse("x", 3), std::invalid_argument);
  EXPECT_THROW(MultiRank::parse("", 3), std::invalid_argument);
  EXPECT_NO_THROW(m.require_feasible(Dims{40, 30, 3}, "t"));
  EXPECT_THROW(m.require_feasible(Dims{20, 30, 3}, "t"), ShapeError);
  EXPECT_THROW(m.require_feasible(Dims{40, 30, 4}, "t"), ShapeError);
}

TEST(Tcsvd, IdentityHasFullRank) {
  const SkinnyTcSvd f = tcsvd(identity(3, 2));
  EXPECT_EQ(f.multi_rank(), MultiRank::uniform(2, 3));
  const Tensor3 sh = oracle::dct3(f.s());
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_LE((oracle::slice(sh, k) - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Tcsvd, ZeroTensorHasEmptyFactors) {
  const SkinnyTcSvd f = tcsvd(Tensor3(Dims{3, 4, 2}));
  EXPECT_EQ(f.multi_rank(), MultiRank::uniform(2, 0));
  EXPECT_EQ(f.tubal_rank(), 0u);
  EXPECT_EQ(f.u().dims(), (Dims{3, 0, 2}));
  EXPECT_EQ(f.v().dims(), (Dims{4, 0, 2}));
  EXPECT_EQ(oracle::fro(f.reconstruct()), 0.0);
  EXPECT_EQ(f.sigma_min(), 0.0);
}

TEST(Tcsvd, RandomTensorFactorsAndOracle) {
  const Tensor3 a = rnd(Dims{6, 5, 3}, 1);
  const SkinnyTcSvd f = tcsvd(a);
  EXPECT_EQ(f.multi_rank(), MultiRank::uniform(3, 5));
  EXPECT_LE(oracle::max_abs_diff(tprod(tprod(f.u(), f.s()), ttranspose(f.v())), a), 1e-10 * oracle::fro(a));
  EXPECT_LE(oracle::max_abs_diff(f.reconstruct(), a), 1e-10 * oracle::fro(a));
  expect_partial_orthonormal(f.u(), f.multi_rank());
  expect_partial_orthonormal(f.v(), f.multi_rank());
  const auto sv = oracle::slice_singular_values(a);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_LE((f.slice(k).sigma - sv[k]).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Tcsvd, MixedRanksArePaddedWithZeros) {
  SplitMix64 rng(2);
  const MultiRank r({3, 1, 0, 2});
  const Tensor3 x = checks::planted(Dims{5, 4, 4}, r, 1.0, 2.0, rng);
  const SkinnyTcSvd f = tcsvd(x);
  EXPECT_EQ(f.multi_rank(), r);
  EXPECT_EQ(f.u().dims(), (Dims{5, 3, 4}));
  expect_partial_orthonormal(f.u(), r);
  expect_partial_orthonormal(f.v(), r);
  const Tensor3 sh = oracle::dct3(f.s());
  for (std::size_t k = 0; k < 4; ++k) {
    const Eigen::MatrixXd s = oracle::slice(sh, k);
    EXPECT_LE((s - Eigen::MatrixXd(s.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 1e-12);
    for (Eigen::Index i = 1; i < s.rows(); ++i) EXPECT_LE(s(i, i), s(i - 1, i - 1) + 1e-12);
    for (Eigen::Index i = 0; i < s.rows(); ++i) EXPECT_GE(s(i, i), -1e-12);
  }
  EXPECT_LE(oracle::max_abs_diff(f.reconstruct(), x), 1e-10 * oracle::fro(x));
}

TEST(FullTcsvd, ReconstructsWithSquareFactors) {
  const Tensor3 a = rnd(Dims{4, 3, 5}, 3);
  const FullTcSvd f = full_tcsvd(a);
  EXPECT_EQ(f.u.dims(), (Dims{4, 4, 5}));
  EXPECT_EQ(f.s.dims(), (Dims{4, 3, 5}));
  EXPECT_EQ(f.v.dims(), (Dims{3, 3, 5}));
  EXPECT_LE(oracle::max_abs_diff(tprod(tprod(f.u, f.s), ttranspose(f.v)), a), 1e-10 * oracle::fro(a));
  EXPECT_LE(oracle::max_abs_diff(tprod(ttranspose(f.u), f.u), identity(4, 5)), 1e-12);
}

TEST(SvdOfSlice, NonFiniteInputReportsSlice) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Ones(3, 3);
  m(1, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    (void)svd_of_slice(m, 7);
    FAIL() << "expected SvdError";
  } catch (const SvdError& e) {
    EXPECT_EQ(e.slice(), 7u);
  }
}

TEST(TruncateHr, KeepsPointsAlreadyOnTheManifold) {
  SplitMix64 rng(4);
  const MultiRank r({2, 1, 3});
  const Tensor3 x = checks::planted(Dims{5, 4, 3}, r, 1.0, 3.0, rng);
  EXPECT_LE(oracle::max_abs_diff(truncate_h_r(x, r), x), 1e-10);
  EXPECT_EQ(oracle::fro(truncate_h_r(x, MultiRank::uniform(3, 0))), 0.0);
}

TEST(TruncateHr, MatchesSliceOracle) {
  const Tensor3 a = rnd(Dims{5, 5, 2}, 5);
  const MultiRank r({2, 1});
  EXPECT_LE(oracle::max_abs_diff(truncate_h_r(a, r), oracle::truncate(a, vec(r))), 1e-10);
  EXPECT_EQ(multi_rank_of(truncate_h_r(a, r)), r);
}

TEST(TruncateHr, RejectsWrongLength) {
  EXPECT_THROW((void)truncate_h_r(rnd(Dims{3, 3, 2}, 6), MultiRank({1, 1, 1})), ShapeError);
}

TEST(TruncateHr, Idempotent) {
  const Tensor3 a = rnd(Dims{6, 4, 5}, 7);
  const MultiRank r({1, 2, 3, 0, 4});
  const Tensor3 t = truncate_h_r(a, r);
  EXPECT_LE(oracle::max_abs_diff(truncate_h_r(t, r), t), 1e-10);
}

TEST(TruncateHr, BeatsRandomCompetitors) {
  SplitMix64 rng(8);
  for (int t = 0; t < 10; ++t) {
    const Dims d{3 + rng.below(4), 3 + rng.below(4), 1 + rng.below(4)};
    const Tensor3 a = oracle::random_tensor(d, rng);
    const MultiRank r = checks::random_multi_rank(d, rng, true);
    const double best = fro_norm(a - truncate_h_r(a, r));
    for (int c = 0; c < 20; ++c) {
      // Competitors: other planted tensors and perturbed truncations.
      Tensor3 z = truncate_h_r(truncate_h_r(a, r) + 0.1 * oracle::random_tensor(d, rng), r);
      EXPECT_LE(best, fro_norm(a - z) + 1e-12);
      z = checks::planted(d, r, 0.5, 3.0, rng);
      EXPECT_LE(best, fro_norm(a - z) + 1e-12);
    }
  }
}

TEST(TruncatedTcsvd, DropsNegligibleTriplets) {
  SplitMix64 rng(9);
  const Tensor3 x = checks::planted(Dims{5, 5, 2}, MultiRank({1, 1}), 1.0, 2.0, rng);
  const SkinnyTcSvd f = truncated_tcsvd(x, MultiRank({3, 2}));
  EXPECT_EQ(f.multi_rank(), MultiRank({1, 1}));
}

TEST(MultiRankOf, Values) {
  EXPECT_EQ(multi_rank_of(identity(4, 3)), MultiRank::uniform(3, 4));
  EXPECT_EQ(multi_rank_of(Tensor3(Dims{3, 3, 2})), MultiRank::uniform(2, 0));
  EXPECT_THROW((void)multi_rank_of(identity(2, 2), -1.0), std::invalid_argument);
}

TEST(MultiRankOf, GaussianProductHasUniformRank) {
  SplitMix64 rng(10);
  const Tensor3 s = oracle::random_tensor(Dims{50, 4, 50}, rng);
  const Tensor3 w = oracle::random_tensor(Dims{4, 50, 50}, rng);
  EXPECT_EQ(multi_rank_of(tprod(s, w)), MultiRank::uniform(50, 4));
}

TEST(PerturbationBounds, HoldOnRandomPairs) {
  SplitMix64 rng(11);
  for (int t = 0; t < 25; ++t) {
    const checks::PerturbationCase c = checks::perturbation_case(rng, 6);
    const checks::PerturbationResult res = checks::perturbation_bounds(c);
    for (std::size_t i = 0; i < 6; ++i) {
      EXPECT_TRUE(res.holds(i)) << "inequality " << i + 1 << ": " << res.lhs[i] << " > " << res.rhs[i];
    }
  }
}
