// SPDX-License-Identifier: Apache-2.0

#include "tcrcg/tensor.hpp"

#include <cmath>

#include "tcrcg/kernels.hpp"

namespace tcrcg {

std::string to_string(const Dims& d) {
  return std::to_string(d.n1) + "x" + std::to_string(d.n2) + "x" + std::to_string(d.n3);
}

Tensor3::Tensor3(Dims dims, std::vector<double> values) : dims_(dims), values_(std::move(values)) {
  if (values_.size() != dims_.size()) {
    throw ShapeError("tensor " + to_string(dims_) + " needs " + std::to_string(dims_.size()) +
                     " values, got " + std::to_string(values_.size()));
  }
}

std::span<double> Tensor3::slice_values(std::size_t k) {
  return std::span<double>(values_).subspan(k * dims_.slice_size(), dims_.slice_size());
}

std::span<const double> Tensor3::slice_values(std::size_t k) const {
  return std::span<const double>(values_).subspan(k * dims_.slice_size(), dims_.slice_size());
}

SliceMap Tensor3::slice(std::size_t k) {
  return SliceMap(values_.data() + k * dims_.slice_size(), static_cast<Eigen::Index>(dims_.n1),
                  static_cast<Eigen::Index>(dims_.n2));
}

ConstSliceMap Tensor3::slice(std::size_t k) const {
  return ConstSliceMap(values_.data() + k * dims_.slice_size(),
                       static_cast<Eigen::Index>(dims_.n1), static_cast<Eigen::Index>(dims_.n2));
}

Tensor3& Tensor3::axpy(double a, const Tensor3& x) {
  require_same_dims(dims_, x.dims_, "axpy");
  kernels::axpy(a, x.values(), values());
  return *this;
}

Tensor3& Tensor3::operator*=(double a) {
  kernels::scale(a, values());
  return *this;
}

bool Tensor3::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Tensor3 operator+(Tensor3 lhs, const Tensor3& rhs) { return lhs += rhs; }
Tensor3 operator-(Tensor3 lhs, const Tensor3& rhs) { return lhs -= rhs; }
Tensor3 operator*(double a, Tensor3 x) { return x *= a; }

void require_same_dims(const Dims& a, const Dims& b, const char* op) {
  if (!(a == b)) {
    throw ShapeError(std::string(op) + ": shape mismatch " + to_string(a) + " vs " + to_string(b));
  }
}

void require_nonempty(const Dims& d, const char* op) {
  if (d.n1 == 0 || d.n2 == 0 || d.n3 == 0) {
    throw ShapeError(std::string(op) + ": empty tensor " + to_string(d));
  }
}

double max_abs_diff(const Tensor3& a, const Tensor3& b) {
  require_same_dims(a.dims(), b.dims(), "max_abs_diff");
  double m = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) m = std::max(m, std::fabs(av[i] - bv[i]));
  return m;
}

}  // namespace tcrcg
