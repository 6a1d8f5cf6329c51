// SPDX-License-Identifier: Apache-2.0

#ifndef TCRCG_TENSOR_HPP
#define TCRCG_TENSOR_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tcrcg {

// Raised whenever operand shapes are incompatible.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Dims {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t n3 = 0;

  std::size_t size() const { return n1 * n2 * n3; }
  std::size_t slice_size() const { return n1 * n2; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

std::string to_string(const Dims& d);

using SliceMap = Eigen::Map<Eigen::MatrixXd>;
using ConstSliceMap = Eigen::Map<const Eigen::MatrixXd>;

// Dense real third-order tensor. Storage is slice-major: frontal slice k is
// a contiguous column-major n1 x n2 block, so entry (i, j, k) lives at
// i + n1 * (j + n2 * k). Indices are zero-based.
//
// Extents of zero are permitted for empty factor tensors (tubal rank 0);
// every user-facing entry point rejects them.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(Dims dims) : dims_(dims), values_(dims.size(), 0.0) {}
  Tensor3(Dims dims, std::vector<double> values);

  static Tensor3 zeros(Dims dims) { return Tensor3(dims); }

  const Dims& dims() const { return dims_; }
  std::size_t size() const { return values_.size(); }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  std::size_t linear_index(std::size_t i, std::size_t j, std::size_t k) const {
    return i + dims_.n1 * (j + dims_.n2 * k);
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return values_[linear_index(i, j, k)];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return values_[linear_index(i, j, k)];
  }

  std::span<double> slice_values(std::size_t k);
  std::span<const double> slice_values(std::size_t k) const;
  SliceMap slice(std::size_t k);
  ConstSliceMap slice(std::size_t k) const;

  // this += a * x
  Tensor3& axpy(double a, const Tensor3& x);
  Tensor3& operator+=(const Tensor3& rhs) { return axpy(1.0, rhs); }
  Tensor3& operator-=(const Tensor3& rhs) { return axpy(-1.0, rhs); }
  Tensor3& operator*=(double a);

  bool all_finite() const;

 private:
  Dims dims_;
  std::vector<double> values_;
};

Tensor3 operator+(Tensor3 lhs, const Tensor3& rhs);
Tensor3 operator-(Tensor3 lhs, const Tensor3& rhs);
Tensor3 operator*(double a, Tensor3 x);

// Throws ShapeError naming both shapes and the operation.
void require_same_dims(const Dims& a, const Dims& b, const char* op);
void require_nonempty(const Dims& d, const char* op);

double max_abs_diff(const Tensor3& a, const Tensor3& b);

}  // namespace tcrcg

#endif  // TCRCG_TENSOR_HPP
