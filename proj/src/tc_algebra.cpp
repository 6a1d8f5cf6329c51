// SPDX-License-Identifier: Apache-2.0

#include "tcrcg/tc_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tcrcg/kernels.hpp"
#include "tcrcg/tube_transform.hpp"

namespace tcrcg {

TransformSlices TransformSlices::from_spatial(const Tensor3& a) {
  return from_transformed(dct3(a));
}

TransformSlices TransformSlices::from_transformed(Tensor3 ahat) {
  TransformSlices s;
  s.hat_ = std::move(ahat);
  return s;
}

Tensor3 TransformSlices::to_spatial() const { return idct3(hat_); }

Tensor3 tprod(const Tensor3& a, const Tensor3& b) {
  const Dims da = a.dims();
  const Dims db = b.dims();
  if (da.n2 != db.n1 || da.n3 != db.n3) {
    throw ShapeError("tprod: cannot multiply " + to_string(da) + " by " + to_string(db));
  }
  const Tensor3 ahat = dct3(a);
  const Tensor3 bhat = dct3(b);
  Tensor3 chat(Dims{da.n1, db.n2, da.n3});
  for (std::size_t k = 0; k < da.n3; ++k) {
    chat.slice(k).noalias() = ahat.slice(k) * bhat.slice(k);
  }
  return idct3(chat);
}

Tensor3 ttranspose(const Tensor3& a) {
  // The DCT acts along tubes only, so transposing every transform slice is
  // the same as transposing every spatial slice.
  const Dims d = a.dims();
  Tensor3 out(Dims{d.n2, d.n1, d.n3});
  for (std::size_t k = 0; k < d.n3; ++k) out.slice(k) = a.slice(k).transpose();
  return out;
}

Tensor3 identity(std::size_t n, std::size_t n3) {
  Tensor3 ihat(Dims{n, n, n3});
  for (std::size_t k = 0; k < n3; ++k) ihat.slice(k).setIdentity();
  return idct3(ihat);
}

double inner(const Tensor3& a, const Tensor3& b) {
  require_same_dims(a.dims(), b.dims(), "inner");
  return kernels::dot(a.values(), b.values());
}

double fro_norm(const Tensor3& a) { return std::sqrt(kernels::sum_squares(a.values())); }

double inf_norm(const Tensor3& a) { return kernels::max_abs(a.values()); }

std::vector<Eigen::VectorXd> slice_singular_values(const Tensor3& a) {
  const Tensor3 ahat = dct3(a);
  std::vector<Eigen::VectorXd> out;
  out.reserve(a.dims().n3);
  for (std::size_t k = 0; k < a.dims().n3; ++k) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(ahat.slice(k));
    out.push_back(svd.singularValues());
  }
  return out;
}

double spectral_norm(const Tensor3& a) {
  double m = 0.0;
  for (const auto& sv : slice_singular_values(a)) {
    if (sv.size() > 0) m = std::max(m, sv(0));
  }
  return m;
}

double default_nonzero_tolerance(const Dims& d) {
  return static_cast<double>(std::max(d.n1, d.n2)) * std::numeric_limits<double>::epsilon();
}

double condition_number(const Tensor3& a, std::optional<double> rel_tol) {
  const auto svs = slice_singular_values(a);
  double smax = 0.0;
  for (const auto& sv : svs) {
    if (sv.size() > 0) smax = std::max(smax, sv(0));
  }
  if (smax == 0.0) throw std::invalid_argument("condition_number: zero tensor");
  const double cutoff = rel_tol.value_or(default_nonzero_tolerance(a.dims())) * smax;
  double smin = smax;
  for (const auto& sv : svs) {
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > cutoff) smin = std::min(smin, sv(i));
    }
  }
  return smax / smin;
}

}  // namespace tcrcg
