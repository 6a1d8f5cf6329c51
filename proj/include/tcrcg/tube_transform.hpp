// SPDX-License-Identifier: Apache-2.0
//
// Orthonormal DCT-II along the third mode (every tube A(i, j, :)) and its
// inverse, the orthonormal DCT-III. The pair is unitary, so Frobenius norms
// and inner products are identical in both domains.

#ifndef TCRCG_TUBE_TRANSFORM_HPP
#define TCRCG_TUBE_TRANSFORM_HPP

#include <cstddef>

#include <Eigen/Dense>

#include "tcrcg/tensor.hpp"

namespace tcrcg {

enum class TransformPath {
  Fast,    // O(n3 log n3) per tube, FFTW real-to-real plans
  Matrix,  // O(n3^2) per tube, weighted sums of whole frontal slices
};

// Orthonormal DCT-II matrix C (C * C^T = I):
//   C(0, j) = 1 / sqrt(n)
//   C(i, j) = sqrt(2 / n) * cos(pi * (2j + 1) * i / (2n)),  i >= 1
Eigen::MatrixXd dct_matrix(std::size_t n);

Tensor3 dct3(const Tensor3& a, TransformPath path = TransformPath::Fast);
Tensor3 idct3(const Tensor3& ahat, TransformPath path = TransformPath::Fast);

}  // namespace tcrcg

#endif  // TCRCG_TUBE_TRANSFORM_HPP
