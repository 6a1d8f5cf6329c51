// SPDX-License-Identifier: Apache-2.0

#include "tcrcg/manifold.hpp"

#include <algorithm>

#include "tcrcg/tube_transform.hpp"

namespace tcrcg {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }

SliceSvd leading(const MatrixXd& u, const VectorXd& sigma, const MatrixXd& v, std::size_t keep) {
  keep = std::min<std::size_t>(keep, static_cast<std::size_t>(sigma.size()));
  return SliceSvd{u.leftCols(idx(keep)), sigma.head(idx(keep)), v.leftCols(idx(keep))};
}

SliceSvd dense_retract_slice(const MatrixXd& w, std::size_t target, std::size_t k) {
  if (target == 0) return SliceSvd{MatrixXd(w.rows(), 0), VectorXd(0), MatrixXd(w.cols(), 0)};
  SliceSvd full = svd_of_slice(w, k);
  return leading(full.u, full.sigma, full.v, target);
}

// Orthonormal basis of range(p) inside the complement of `basis`; returns
// (Q, R) with p = Q R.
std::pair<MatrixXd, MatrixXd> complement_qr(const MatrixXd& basis, MatrixXd p) {
  p -= basis * (basis.transpose() * p);
  const Eigen::Index k = p.cols();
  Eigen::HouseholderQR<MatrixXd> qr(p);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(p.rows(), k);
  MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return {std::move(q), std::move(r)};
}

SliceSvd structured_retract_slice(const SliceSvd& x, const MatrixXd& xi, std::size_t target,
                                  std::size_t slice_index) {
  const Eigen::Index k = x.sigma.size();
  const MatrixXd xi_v = xi * x.v;
  const MatrixXd xit_u = xi.transpose() * x.u;
  const MatrixXd m = x.u.transpose() * xi_v;
  auto [qu, ru] = complement_qr(x.u, xi_v - x.u * m);
  auto [qv, rv] = complement_qr(x.v, xit_u - x.v * m.transpose());

  MatrixXd core = MatrixXd::Zero(2 * k, 2 * k);
  core.topLeftCorner(k, k) = m;
  core.topLeftCorner(k, k).diagonal() += x.sigma;
  core.topRightCorner(k, k) = rv.transpose();
  core.bottomLeftCorner(k, k) = ru;

  const SliceSvd small = svd_of_slice(core, slice_index);
  MatrixXd left(x.u.rows(), 2 * k);
  left << x.u, qu;
  MatrixXd right(x.v.rows(), 2 * k);
  right << x.v, qv;
  const std::size_t keep = std::min<std::size_t>(target, static_cast<std::size_t>(2 * k));
  return SliceSvd{left * small.u.leftCols(idx(keep)), small.sigma.head(idx(keep)),
                  right * small.v.leftCols(idx(keep))};
}

}  // namespace

TangentPoint::TangentPoint(SkinnyTcSvd factors)
    : factors_(std::move(factors)),
      value_hat_(factors_.reconstruct_transformed()),
      value_(idct3(value_hat_)) {}

TangentPoint TangentPoint::from_tensor(const Tensor3& x, const MultiRank& r, double rel_tol) {
  return TangentPoint(truncated_tcsvd(x, r, rel_tol));
}

Tensor3 tangent_project_transformed(const TangentPoint& at, const Tensor3& ahat) {
  require_same_dims(at.dims(), ahat.dims(), "tangent_project");
  Tensor3 out(ahat.dims());
  for (std::size_t k = 0; k < ahat.dims().n3; ++k) {
    const SliceSvd& f = at.factors().slice(k);
    if (f.rank() == 0) continue;
    const auto a = ahat.slice(k);
    const MatrixXd ut_a = f.u.transpose() * a;
    const MatrixXd a_v = a * f.v;
    const MatrixXd core = ut_a * f.v;
    auto dst = out.slice(k);
    dst.noalias() = f.u * ut_a;
    dst.noalias() += (a_v - f.u * core) * f.v.transpose();
  }
  return out;
}

Tensor3 tangent_project(const TangentPoint& at, const Tensor3& a) {
  require_same_dims(at.dims(), a.dims(), "tangent_project");
  return idct3(tangent_project_transformed(at, dct3(a)));
}

Tensor3 riemannian_gradient(const TangentPoint& at, const Tensor3& euclidean_grad) {
  return tangent_project(at, euclidean_grad);
}

Retraction retract_transformed(const TangentPoint& at, const Tensor3& xi_hat, const MultiRank& r,
                               double rel_tol) {
  const Dims d = at.dims();
  require_same_dims(d, xi_hat.dims(), "retract");
  r.require_feasible(d, "retract");
  const std::size_t cap = std::min(d.n1, d.n2);

  std::vector<SliceSvd> slices;
  slices.reserve(d.n3);
  for (std::size_t k = 0; k < d.n3; ++k) {
    const SliceSvd& x = at.factors().slice(k);
    const std::size_t rank_k = x.rank();
    if (r[k] == 0) {
      slices.push_back(SliceSvd{MatrixXd(d.n1, 0), VectorXd(0), MatrixXd(d.n2, 0)});
    } else if (rank_k == 0 || 2 * rank_k > cap) {
      const MatrixXd w = at.value_transformed().slice(k) + xi_hat.slice(k);
      slices.push_back(dense_retract_slice(w, r[k], k));
    } else {
      slices.push_back(structured_retract_slice(x, xi_hat.slice(k), r[k], k));
    }
  }

  // Scale reference includes the foot point so a step that cancels it
  // entirely is reported as a rank drop instead of keeping roundoff.
  double smax = at.factors().sigma_max();
  for (const auto& s : slices) {
    if (s.sigma.size() > 0) smax = std::max(smax, s.sigma(0));
  }
  const double cutoff = rel_tol * smax;
  bool drop = false;
  for (std::size_t k = 0; k < d.n3; ++k) {
    auto& s = slices[k];
    std::size_t keep = 0;
    while (keep < s.rank() && s.sigma(idx(keep)) > cutoff) ++keep;
    if (keep < r[k]) drop = true;
    if (keep < s.rank()) s = leading(s.u, s.sigma, s.v, keep);
  }
  return Retraction{TangentPoint(SkinnyTcSvd(d, std::move(slices))), drop};
}

Retraction retract(const TangentPoint& at, const Tensor3& xi, const MultiRank& r, double rel_tol) {
  require_same_dims(at.dims(), xi.dims(), "retract");
  return retract_transformed(at, dct3(xi), r, rel_tol);
}

Tensor3 vector_transport(const TangentPoint& from, const TangentPoint& to, const Tensor3& xi) {
  require_same_dims(from.dims(), to.dims(), "vector_transport");
  return tangent_project(to, xi);
}

std::size_t manifold_dim(const Dims& dims, const MultiRank& r) {
  r.require_feasible(dims, "manifold_dim");
  std::size_t total = 0;
  for (std::size_t k = 0; k < r.size(); ++k) total += (dims.n1 + dims.n2) * r[k] - r[k] * r[k];
  return total;
}

}  // namespace tcrcg
