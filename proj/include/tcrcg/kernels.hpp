// SPDX-License-Identifier: Apache-2.0
//
// Dense double-precision vector kernels with a scalar reference
// implementation and an AVX2 variant chosen at runtime.
//
// Both variants use the same four-lane striped accumulation order and no
// fused multiply-add, so every kernel returns bit-identical results on
// either path. Tensor arithmetic above this layer is therefore
// deterministic regardless of which ISA the host exposes.

#ifndef TCRCG_KERNELS_HPP
#define TCRCG_KERNELS_HPP

#include <cstddef>
#include <span>
#include <string_view>

namespace tcrcg::kernels {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sum_squares)(const double* x, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // x *= a
  void (*scale)(double a, double* x, std::size_t n);
  // y = a * x
  void (*scaled_copy)(double a, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_table();
// Throws std::runtime_error when the binary was built without AVX2 support.
const KernelTable& avx2_table();

bool isa_available(Isa isa);

// Selected on first use: AVX2 when the CPU reports it, unless the
// environment variable TCRCG_ISA=scalar forces the reference path.
const KernelTable& active();
void set_active_isa(Isa isa);
std::string_view isa_name(Isa isa);

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline double sum_squares(std::span<const double> x) {
  return active().sum_squares(x.data(), x.size());
}
inline double max_abs(std::span<const double> x) {
  return active().max_abs(x.data(), x.size());
}
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}
inline void scale(double a, std::span<double> x) {
  active().scale(a, x.data(), x.size());
}
inline void scaled_copy(double a, std::span<const double> x, std::span<double> y) {
  active().scaled_copy(a, x.data(), y.data(), x.size());
}

}  // namespace tcrcg::kernels

#endif  // TCRCG_KERNELS_HPP
