// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "oracle.hpp"
#include "tcrcg/tc_algebra.hpp"
#include "tcrcg/tc_svd.hpp"
#include "tcrcg/tube_transform.hpp"

using namespace tcrcg;

namespace {

Tensor3 rnd(Dims d, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return oracle::random_tensor(d, rng);
}

Tensor3 from_transformed_slices(Dims d, const std::vector<Eigen::MatrixXd>& slices) {
  TransformSlices ts(d);
  for (std::size_t k = 0; k < d.n3; ++k) ts.slice(k) = slices[k];
  return ts.to_spatial();
}

}  // namespace

TEST(TransformSlices, LosslessRoundTrip) {
  const Tensor3 a = rnd(Dims{4, 3, 5}, 1);
  const TransformSlices ts = TransformSlices::from_spatial(a);
  EXPECT_EQ(ts.count(), 5u);
  EXPECT_LE(oracle::max_abs_diff(ts.transformed(), oracle::dct3(a)), 1e-13);
  EXPECT_LE(oracle::max_abs_diff(ts.to_spatial(), a), 1e-12);
}

TEST(Tprod, IdentityIsNeutral) {
  const Tensor3 a = rnd(Dims{3, 5, 4}, 2);
  EXPECT_LE(oracle::max_abs_diff(tprod(identity(3, 4), a), a), 1e-12);
  EXPECT_LE(oracle::max_abs_diff(tprod(a, identity(5, 4)), a), 1e-12);
}

TEST(Tprod, MatchesBlockDiagonalOracle) {
  const Tensor3 a = rnd(Dims{2, 3, 2}, 3);
  const Tensor3 b = rnd(Dims{3, 2, 2}, 4);
  EXPECT_LE(oracle::max_abs_diff(tprod(a, b), oracle::tprod(a, b)), 1e-12);
}

TEST(Tprod, RandomShapesMatchOracle) {
  SplitMix64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n1 = 1 + rng.below(6), n2 = 1 + rng.below(6), n4 = 1 + rng.below(6), n3 = 1 + rng.below(7);
    const Tensor3 a = oracle::random_tensor(Dims{n1, n2, n3}, rng);
    const Tensor3 b = oracle::random_tensor(Dims{n2, n4, n3}, rng);
    EXPECT_LE(oracle::max_abs_diff(tprod(a, b), oracle::tprod(a, b)), 1e-11);
  }
}

TEST(Tprod, ZeroAnnihilates) {
  const Tensor3 a = rnd(Dims{3, 4, 3}, 6);
  EXPECT_EQ(oracle::fro(tprod(a, Tensor3(Dims{4, 2, 3}))), 0.0);
}

TEST(Tprod, ShapeErrorNamesBothOperands) {
  const Tensor3 a(Dims{2, 3, 4});
  const Tensor3 b(Dims{5, 2, 4});
  try {
    (void)tprod(a, b);
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find(to_string(a.dims())), std::string::npos) << msg;
    EXPECT_NE(msg.find(to_string(b.dims())), std::string::npos) << msg;
  }
  EXPECT_THROW((void)tprod(a, Tensor3(Dims{3, 2, 5})), ShapeError);
}

TEST(Tprod, Associative) {
  const Tensor3 a = rnd(Dims{3, 4, 5}, 7), b = rnd(Dims{4, 2, 5}, 8), c = rnd(Dims{2, 3, 5}, 9);
  EXPECT_LE(oracle::max_abs_diff(tprod(tprod(a, b), c), tprod(a, tprod(b, c))), 1e-10);
}

TEST(Ttranspose, InvolutionAndOracle) {
  const Tensor3 a = rnd(Dims{3, 5, 4}, 10);
  const Tensor3 at = ttranspose(a);
  EXPECT_EQ(at.dims(), (Dims{5, 3, 4}));
  EXPECT_LE(oracle::max_abs_diff(at, oracle::ttranspose(a)), 1e-12);
  EXPECT_LE(oracle::max_abs_diff(ttranspose(at), a), 1e-12);
}

TEST(Ttranspose, ReversesProducts) {
  const Tensor3 a = rnd(Dims{3, 4, 6}, 11), b = rnd(Dims{4, 2, 6}, 12);
  EXPECT_LE(oracle::max_abs_diff(ttranspose(tprod(a, b)), tprod(ttranspose(b), ttranspose(a))), 1e-12);
}

TEST(Ttranspose, IdentityIsSymmetric) {
  const Tensor3 id = identity(4, 3);
  EXPECT_LE(oracle::max_abs_diff(ttranspose(id), id), 1e-14);
}

TEST(Identity, Construction) {
  const Tensor3 one = identity(1, 1);
  EXPECT_EQ(one.dims(), (Dims{1, 1, 1}));
  EXPECT_NEAR(one(0, 0, 0), 1.0, 1e-15);
  const Tensor3 ih = oracle::dct3(identity(2, 3));
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_LE((oracle::slice(ih, k) - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Inner, BasicIdentities) {
  const Tensor3 a = rnd(Dims{3, 4, 5}, 13), b = rnd(Dims{3, 4, 5}, 14);
  EXPECT_NEAR(inner(a, a), std::pow(fro_norm(a), 2), 1e-12 * inner(a, a));
  EXPECT_NEAR(inner(a, b), inner(oracle::dct3(a), oracle::dct3(b)), 1e-12 * fro_norm(a) * fro_norm(b));
  EXPECT_EQ(inner(a, Tensor3(a.dims())), 0.0);
  EXPECT_THROW((void)inner(a, Tensor3(Dims{3, 4, 4})), ShapeError);
}

TEST(Inner, AdjointOfProduct) {
  const Tensor3 a = rnd(Dims{3, 4, 5}, 15), b = rnd(Dims{4, 2, 5}, 16), c = rnd(Dims{3, 2, 5}, 17);
  EXPECT_NEAR(inner(tprod(a, b), c), inner(b, tprod(ttranspose(a), c)), 1e-10);
}

TEST(Norms, Values) {
  EXPECT_NEAR(spectral_norm(identity(5, 4)), 1.0, 1e-13);
  Tensor3 e(Dims{3, 4, 2});
  e(1, 2, 0) = 7.0;
  e(0, 0, 1) = -3.0;
  EXPECT_EQ(inf_norm(e), 7.0);
  EXPECT_NEAR(fro_norm(e), std::sqrt(58.0), 1e-14);
}

TEST(Norms, SpectralOfPlantedSlice) {
  const Dims d{4, 3, 5};
  std::vector<Eigen::MatrixXd> slices(5, Eigen::MatrixXd::Zero(4, 3));
  Eigen::VectorXd u = Eigen::VectorXd::Random(4).normalized(), v = Eigen::VectorXd::Random(3).normalized();
  slices[2] = 6.5 * u * v.transpose();
  slices[4] = 2.0 * u * v.transpose();
  const Tensor3 a = from_transformed_slices(d, slices);
  EXPECT_NEAR(spectral_norm(a), 6.5, 1e-12);
  EXPECT_NEAR(spectral_norm(a), oracle::spectral_norm(a), 1e-12);
}

TEST(Norms, SpectralFrobeniusSandwich) {
  SplitMix64 rng(18);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 3 + rng.below(5), n3 = 1 + rng.below(6), r = 1 + rng.below(3);
    const Tensor3 a = tprod(oracle::random_tensor(Dims{n, r, n3}, rng), oracle::random_tensor(Dims{r, n, n3}, rng));
    const double s = spectral_norm(a), f = fro_norm(a);
    EXPECT_LE(s, f * (1 + 1e-12));
    EXPECT_LE(f, std::sqrt(static_cast<double>(n3 * r)) * s * (1 + 1e-12));
  }
}

TEST(Norms, SliceSingularValuesMatchOracle) {
  const Tensor3 a = rnd(Dims{5, 3, 4}, 19);
  const auto got = slice_singular_values(a);
  const auto want = oracle::slice_singular_values(a);
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t k = 0; k < got.size(); ++k) EXPECT_LE((got[k] - want[k]).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ConditionNumber, Values) {
  EXPECT_NEAR(condition_number(identity(3, 4)), 1.0, 1e-12);
  const Dims d{3, 3, 2};
  std::vector<Eigen::MatrixXd> slices(2, Eigen::MatrixXd::Zero(3, 3));
  slices[0](0, 0) = 4.0;
  slices[1](0, 0) = 2.0;
  slices[1](1, 1) = 1e-20;
  const Tensor3 a = from_transformed_slices(d, slices);
  EXPECT_NEAR(condition_number(a, 1e-10), 2.0, 1e-10);
  const Tensor3 b = rnd(Dims{4, 4, 3}, 20);
  EXPECT_NEAR(condition_number(-3.5 * b), condition_number(b), 1e-9 * condition_number(b));
  EXPECT_THROW((void)condition_number(Tensor3(d)), std::invalid_argument);
}

TEST(Tolerance, DefaultNonzeroTolerance) {
  EXPECT_DOUBLE_EQ(default_nonzero_tolerance(Dims{7, 3, 2}), 7 * std::numeric_limits<double>::epsilon());
}
