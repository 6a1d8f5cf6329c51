// SPDX-License-Identifier: Apache-2.0
//
// Geometry of the set of tensors with fixed transformed multi-rank r:
// tangent projection, Riemannian gradient, truncation retraction and
// projection-based vector transport. The metric is the ambient inner
// product.

#ifndef TCRCG_MANIFOLD_HPP
#define TCRCG_MANIFOLD_HPP

#include <cstddef>

#include "tcrcg/tc_svd.hpp"
#include "tcrcg/tensor.hpp"

namespace tcrcg {

// A point X on the manifold together with its skinny factors. Immutable.
class TangentPoint {
 public:
  TangentPoint() = default;
  explicit TangentPoint(SkinnyTcSvd factors);

  // H_r(x) as a manifold point; triplets below rel_tol are dropped.
  static TangentPoint from_tensor(const Tensor3& x, const MultiRank& r,
                                  double rel_tol = kDefaultRankTol);

  const SkinnyTcSvd& factors() const { return factors_; }
  const MultiRank& multi_rank() const { return factors_.multi_rank(); }
  const Dims& dims() const { return factors_.dims(); }
  const Tensor3& value() const { return value_; }
  const Tensor3& value_transformed() const { return value_hat_; }

 private:
  SkinnyTcSvd factors_;
  Tensor3 value_hat_;
  Tensor3 value_;
};

// U U^T A + A V V^T - U U^T A V V^T
Tensor3 tangent_project(const TangentPoint& at, const Tensor3& a);
// Same projector applied to an already transformed tensor; returns the
// transformed result.
Tensor3 tangent_project_transformed(const TangentPoint& at, const Tensor3& ahat);

Tensor3 riemannian_gradient(const TangentPoint& at, const Tensor3& euclidean_grad);

struct Retraction {
  TangentPoint point;
  // Some slice ended below its target rank.
  bool rank_drop = false;
};

// H_r(X + xi) for xi in the tangent space at X. Each slice is handled
// through a 2k x 2k core built from the tangent structure; slices where
// that structure does not fit (2k > min(n1, n2) or k = 0) fall back to a
// dense SVD of X + xi.
Retraction retract(const TangentPoint& at, const Tensor3& xi, const MultiRank& r,
                   double rel_tol = kDefaultRankTol);
Retraction retract_transformed(const TangentPoint& at, const Tensor3& xi_hat, const MultiRank& r,
                               double rel_tol = kDefaultRankTol);

// Projection of xi onto the tangent space at `to`.
Tensor3 vector_transport(const TangentPoint& from, const TangentPoint& to, const Tensor3& xi);

// sum_k (n1 + n2) r_k - r_k^2
std::size_t manifold_dim(const Dims& dims, const MultiRank& r);

}  // namespace tcrcg

#endif  // TCRCG_MANIFOLD_HPP
