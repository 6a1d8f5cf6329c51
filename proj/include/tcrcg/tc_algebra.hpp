// SPDX-License-Identifier: Apache-2.0
//
// Tensor-tensor product under the DCT along tubes. Everything here works on
// frontal slices of the transformed tensor; the block-diagonal matrix that
// collects those slices is never formed.

#ifndef TCRCG_TC_ALGEBRA_HPP
#define TCRCG_TC_ALGEBRA_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tcrcg/tensor.hpp"

namespace tcrcg {

// Transform-domain view of a tensor: n3 frontal slices of dct3(a).
class TransformSlices {
 public:
  TransformSlices() = default;
  explicit TransformSlices(Dims dims) : hat_(dims) {}

  static TransformSlices from_spatial(const Tensor3& a);
  static TransformSlices from_transformed(Tensor3 ahat);

  Tensor3 to_spatial() const;

  const Dims& dims() const { return hat_.dims(); }
  std::size_t count() const { return hat_.dims().n3; }
  SliceMap slice(std::size_t k) { return hat_.slice(k); }
  ConstSliceMap slice(std::size_t k) const { return hat_.slice(k); }

  const Tensor3& transformed() const { return hat_; }
  Tensor3& transformed() { return hat_; }

 private:
  Tensor3 hat_;
};

// a: n1 x n2 x n3, b: n2 x n4 x n3  ->  n1 x n4 x n3
Tensor3 tprod(const Tensor3& a, const Tensor3& b);
Tensor3 ttranspose(const Tensor3& a);
Tensor3 identity(std::size_t n, std::size_t n3);

double inner(const Tensor3& a, const Tensor3& b);
double fro_norm(const Tensor3& a);
double inf_norm(const Tensor3& a);
// Largest singular value over all transform-domain slices.
double spectral_norm(const Tensor3& a);

// Singular values (descending) of every transform-domain slice.
std::vector<Eigen::VectorXd> slice_singular_values(const Tensor3& a);

// Default numerical-rank threshold relative to the pooled largest singular
// value: max(n1, n2) * machine epsilon.
double default_nonzero_tolerance(const Dims& d);

// sigma_max / sigma_min over the nonzero singular values pooled across all
// transform slices. A singular value counts as nonzero when it exceeds
// rel_tol * sigma_max (rel_tol defaults to default_nonzero_tolerance).
// Throws std::invalid_argument for the zero tensor.
double condition_number(const Tensor3& a, std::optional<double> rel_tol = std::nullopt);

}  // namespace tcrcg

#endif  // TCRCG_TC_ALGEBRA_HPP
