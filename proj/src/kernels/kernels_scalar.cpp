// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "tcrcg/kernels.hpp"

namespace tcrcg::kernels {
namespace {

// Lane layout mirrors one 256-bit register: lane l accumulates elements
// with index = l (mod 4); lanes are combined as (l0 + l2) + (l1 + l3).
double dot_scalar(const double* x, const double* y, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int l = 0; l < 4; ++l) {
      const double p = x[i + l] * y[i + l];
      lane[l] = lane[l] + p;
    }
  }
  double acc = (lane[0] + lane[2]) + (lane[1] + lane[3]);
  for (; i < n; ++i) {
    const double p = x[i] * y[i];
    acc = acc + p;
  }
  return acc;
}

double sum_squares_scalar(const double* x, std::size_t n) {
  return dot_scalar(x, x, n);
}

double max_abs_scalar(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::fabs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double p = a * x[i];
    y[i] = y[i] + p;
  }
}

void scale_scalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = a * x[i];
}

void scaled_copy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i];
}

constexpr KernelTable kScalarTable{
    Isa::Scalar,   dot_scalar,   sum_squares_scalar, max_abs_scalar,
    axpy_scalar,   scale_scalar, scaled_copy_scalar,
};

}  // namespace

const KernelTable& scalar_table() { return kScalarTable; }

}  // namespace tcrcg::kernels
