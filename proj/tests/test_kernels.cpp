// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "tcrcg/kernels.hpp"
#include "tcrcg/rng.hpp"

using namespace tcrcg;
using kernels::Isa;

namespace {

std::vector<double> random_vec(std::size_t n, SplitMix64& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal() * std::exp(4.0 * rng.uniform() - 2.0);
  return v;
}

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!kernels::isa_available(Isa::Avx2)) GTEST_SKIP() << "AVX2 not available on this host";
  }
};

}  // namespace

TEST(Kernels, ScalarMatchesNaiveSums) {
  SplitMix64 rng(11);
  const auto& s = kernels::scalar_table();
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 64u, 1001u}) {
    const auto x = random_vec(n, rng);
    const auto y = random_vec(n, rng);
    long double dot = 0, ss = 0, mx = 0;
    for (std::size_t i = 0; i < n; ++i) {
      dot += static_cast<long double>(x[i]) * y[i];
      ss += static_cast<long double>(x[i]) * x[i];
      mx = std::max<long double>(mx, std::fabs(x[i]));
    }
    EXPECT_NEAR(s.dot(x.data(), y.data(), n), static_cast<double>(dot), 1e-12 * (1 + std::fabs(static_cast<double>(ss))));
    EXPECT_NEAR(s.sum_squares(x.data(), n), static_cast<double>(ss), 1e-12 * (1 + static_cast<double>(ss)));
    EXPECT_EQ(s.max_abs(x.data(), n), static_cast<double>(mx));
  }
}

TEST(Kernels, ScalarUpdates) {
  std::vector<double> x{1, 2, 3, 4, 5}, y{1, 1, 1, 1, 1};
  const auto& s = kernels::scalar_table();
  s.axpy(2.0, x.data(), y.data(), x.size());
  EXPECT_EQ(y, (std::vector<double>{3, 5, 7, 9, 11}));
  s.scale(0.5, y.data(), y.size());
  EXPECT_EQ(y, (std::vector<double>{1.5, 2.5, 3.5, 4.5, 5.5}));
  std::vector<double> z(5);
  s.scaled_copy(-1.0, x.data(), z.data(), x.size());
  EXPECT_EQ(z, (std::vector<double>{-1, -2, -3, -4, -5}));
}

TEST_F(KernelEquivalence, ReductionsAreBitIdentical) {
  SplitMix64 rng(12);
  const auto& s = kernels::scalar_table();
  const auto& v = kernels::avx2_table();
  for (std::size_t n = 0; n < 300; n += 1 + n / 8) {
    const auto x = random_vec(n, rng);
    const auto y = random_vec(n, rng);
    EXPECT_EQ(s.dot(x.data(), y.data(), n), v.dot(x.data(), y.data(), n)) << n;
    EXPECT_EQ(s.sum_squares(x.data(), n), v.sum_squares(x.data(), n)) << n;
    EXPECT_EQ(s.max_abs(x.data(), n), v.max_abs(x.data(), n)) << n;
  }
}

TEST_F(KernelEquivalence, UpdatesAreBitIdentical) {
  SplitMix64 rng(13);
  const auto& s = kernels::scalar_table();
  const auto& v = kernels::avx2_table();
  for (std::size_t n = 0; n < 300; n += 1 + n / 8) {
    const auto x = random_vec(n, rng);
    const auto y0 = random_vec(n, rng);
    const double a = rng.normal();
    auto ys = y0, yv = y0;
    s.axpy(a, x.data(), ys.data(), n);
    v.axpy(a, x.data(), yv.data(), n);
    EXPECT_EQ(ys, yv);
    s.scale(a, ys.data(), n);
    v.scale(a, yv.data(), n);
    EXPECT_EQ(ys, yv);
    std::vector<double> cs(n), cv(n);
    s.scaled_copy(a, x.data(), cs.data(), n);
    v.scaled_copy(a, x.data(), cv.data(), n);
    EXPECT_EQ(cs, cv);
  }
}

TEST_F(KernelEquivalence, UnalignedOffsets) {
  SplitMix64 rng(14);
  const auto buf = random_vec(80, rng);
  const auto& s = kernels::scalar_table();
  const auto& v = kernels::avx2_table();
  for (std::size_t off = 0; off < 4; ++off) {
    EXPECT_EQ(s.dot(buf.data() + off, buf.data() + 3, 61), v.dot(buf.data() + off, buf.data() + 3, 61));
  }
}

TEST(KernelDispatch, SwitchesActiveTable) {
  const Isa before = kernels::active().isa;
  kernels::set_active_isa(Isa::Scalar);
  EXPECT_EQ(kernels::active().isa, Isa::Scalar);
  EXPECT_EQ(kernels::isa_name(Isa::Scalar), "scalar");
  if (kernels::isa_available(Isa::Avx2)) {
    kernels::set_active_isa(Isa::Avx2);
    EXPECT_EQ(kernels::active().isa, Isa::Avx2);
    EXPECT_EQ(kernels::isa_name(Isa::Avx2), "avx2");
  }
  kernels::set_active_isa(before);
}

TEST(KernelDispatch, SpanWrappers) {
  std::vector<double> x{3, -4}, y{1, 1};
  EXPECT_EQ(kernels::dot(x, y), -1.0);
  EXPECT_EQ(kernels::sum_squares(x), 25.0);
  EXPECT_EQ(kernels::max_abs(x), 4.0);
}
