// SPDX-License-Identifier: Apache-2.0
//
// Compiled with -mavx2; only reached after a runtime CPU check.

#include <stdexcept>

#include "tcrcg/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace tcrcg::kernels {

#if defined(__AVX2__)
namespace {

inline double combine_lanes(__m256d acc) {
  // (l0 + l2) + (l1 + l3), matching the scalar reference.
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  const __m128d swapped = _mm_unpackhi_pd(pair, pair);
  return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_add_pd(acc, p);
  }
  double s = combine_lanes(acc);
  for (; i < n; ++i) {
    const double p = x[i] * y[i];
    s = s + p;
  }
  return s;
}

double sum_squares_avx2(const double* x, std::size_t n) { return dot_avx2(x, x, n); }

double max_abs_avx2(const double* x, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(x + i));
    m = _mm256_max_pd(m, a);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = 0.0;
  for (double v : lanes) r = v > r ? v : r;
  for (; i < n; ++i) {
    const double a = x[i] < 0 ? -x[i] : x[i];
    r = a > r ? a : r;
  }
  return r;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(av, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), p));
  }
  for (; i < n; ++i) {
    const double p = a * x[i];
    y[i] = y[i] + p;
  }
}

void scale_avx2(double a, double* x, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] = a * x[i];
}

void scaled_copy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) y[i] = a * x[i];
}

constexpr KernelTable kAvx2Table{
    Isa::Avx2,  dot_avx2,   sum_squares_avx2, max_abs_avx2,
    axpy_avx2,  scale_avx2, scaled_copy_avx2,
};

}  // namespace

bool avx2_compiled() { return true; }
const KernelTable& avx2_table() { return kAvx2Table; }

#else

bool avx2_compiled() { return false; }
const KernelTable& avx2_table() {
  throw std::runtime_error("tcrcg was built without AVX2 kernels");
}

#endif

}  // namespace tcrcg::kernels
