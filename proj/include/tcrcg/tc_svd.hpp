// SPDX-License-Identifier: Apache-2.0
//
// t_c-SVD, transformed multi-rank and the multi-rank truncation H_r.

#ifndef TCRCG_TC_SVD_HPP
#define TCRCG_TC_SVD_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "tcrcg/tensor.hpp"

namespace tcrcg {

// Singular values at or below this fraction of the pooled largest singular
// value are treated as zero when a rank is measured.
inline constexpr double kDefaultRankTol = 1e-8;

// Per-slice ranks (r_1, ..., r_{n3}) of the transformed tensor.
class MultiRank {
 public:
  MultiRank() = default;
  explicit MultiRank(std::vector<std::size_t> ranks) : ranks_(std::move(ranks)) {}

  static MultiRank uniform(std::size_t n3, std::size_t r) {
    return MultiRank(std::vector<std::size_t>(n3, r));
  }
  // Accepts "r" (uniform) or a comma-separated list of exactly n3 ranks.
  static MultiRank parse(std::string_view text, std::size_t n3);

  std::size_t size() const { return ranks_.size(); }
  std::size_t operator[](std::size_t k) const { return ranks_[k]; }
  std::span<const std::size_t> ranks() const { return ranks_; }

  // max_i r_i
  std::size_t tubal() const;
  std::size_t total() const;

  // Length equals n3 and every r_i <= min(n1, n2); throws ShapeError.
  void require_feasible(const Dims& d, const char* op) const;

  std::string to_string() const;
  friend bool operator==(const MultiRank&, const MultiRank&) = default;

 private:
  std::vector<std::size_t> ranks_;
};

class SvdError : public std::runtime_error {
 public:
  SvdError(std::size_t slice, const std::string& what)
      : std::runtime_error(what), slice_(slice) {}
  std::size_t slice() const { return slice_; }

 private:
  std::size_t slice_;
};

// Thin SVD of one transform-domain slice, truncated to its kept rank:
// u is n1 x k, v is n2 x k, sigma is non-increasing and positive.
struct SliceSvd {
  Eigen::MatrixXd u;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd v;

  std::size_t rank() const { return static_cast<std::size_t>(sigma.size()); }
};

// Full thin SVD of a matrix; throws SvdError tagged with slice_index on
// non-convergence or non-finite output.
SliceSvd svd_of_slice(const Eigen::MatrixXd& m, std::size_t slice_index);

// Skinny t_c-SVD held by its transform-domain slice factors. The spatial
// factor tensors are assembled on demand at uniform width r = tubal rank,
// with columns beyond r_i zero in the transform domain.
class SkinnyTcSvd {
 public:
  SkinnyTcSvd() = default;
  SkinnyTcSvd(Dims dims, std::vector<SliceSvd> slices);

  const Dims& dims() const { return dims_; }
  const MultiRank& multi_rank() const { return rank_; }
  std::size_t tubal_rank() const { return rank_.tubal(); }
  const std::vector<SliceSvd>& slices() const { return slices_; }
  const SliceSvd& slice(std::size_t k) const { return slices_[k]; }

  Tensor3 u() const;  // n1 x r x n3
  Tensor3 s() const;  // r x r x n3, diagonal transform slices
  Tensor3 v() const;  // n2 x r x n3

  Tensor3 reconstruct_transformed() const;
  Tensor3 reconstruct() const;

  double sigma_max() const;
  // Smallest kept singular value over all slices (0 when empty).
  double sigma_min() const;

 private:
  Dims dims_;
  MultiRank rank_;
  std::vector<SliceSvd> slices_;
};

SkinnyTcSvd tcsvd(const Tensor3& a, double rel_tol = kDefaultRankTol);

// Algorithm-1 style full decomposition: u n1 x n1 x n3, s n1 x n2 x n3,
// v n2 x n2 x n3 with a = u * s * v^T. Retained as a test path.
struct FullTcSvd {
  Tensor3 u;
  Tensor3 s;
  Tensor3 v;
};
FullTcSvd full_tcsvd(const Tensor3& a);

// Keeps the top r_k singular triplets of transform slice k. Triplets whose
// singular value is at or below rel_tol * (pooled largest kept value) are
// dropped, so the returned multi-rank can fall below r.
SkinnyTcSvd truncated_tcsvd_transformed(const Tensor3& ahat, const MultiRank& r,
                                        double rel_tol = kDefaultRankTol);
SkinnyTcSvd truncated_tcsvd(const Tensor3& a, const MultiRank& r,
                            double rel_tol = kDefaultRankTol);

// H_r: best approximation of multi-rank at most r.
Tensor3 truncate_h_r(const Tensor3& a, const MultiRank& r);

MultiRank multi_rank_of(const Tensor3& a, double tol = kDefaultRankTol);

}  // namespace tcrcg

#endif  // TCRCG_TC_SVD_HPP
