// SPDX-License-Identifier: Apache-2.0

#include "tcrcg/tc_svd.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "tcrcg/tube_transform.hpp"

namespace tcrcg {
namespace {

Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }

std::size_t parse_count(std::string_view token) {
  std::size_t value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end || token.empty()) {
    throw std::invalid_argument("invalid rank entry '" + std::string(token) + "'");
  }
  return value;
}

SliceSvd keep_leading(const SliceSvd& full, std::size_t keep) {
  keep = std::min(keep, full.rank());
  SliceSvd out;
  out.u = full.u.leftCols(idx(keep));
  out.sigma = full.sigma.head(idx(keep));
  out.v = full.v.leftCols(idx(keep));
  return out;
}

double pooled_max(const std::vector<SliceSvd>& slices) {
  double m = 0.0;
  for (const auto& s : slices) {
    if (s.sigma.size() > 0) m = std::max(m, s.sigma(0));
  }
  return m;
}

std::size_t count_above(const Eigen::VectorXd& sigma, double cutoff) {
  std::size_t n = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) ++n;
  }
  return n;
}

// Assembles n_rows x width x n3 from per-slice column blocks, zero padded.
Tensor3 assemble_factor(const Dims& d, std::size_t n_rows, std::size_t width,
                        const std::vector<SliceSvd>& slices, bool left) {
  Tensor3 hat(Dims{n_rows, width, d.n3});
  for (std::size_t k = 0; k < d.n3; ++k) {
    const auto& block = left ? slices[k].u : slices[k].v;
    if (block.cols() > 0) hat.slice(k).leftCols(block.cols()) = block;
  }
  return idct3(hat);
}

}  // namespace

MultiRank MultiRank::parse(std::string_view text, std::size_t n3) {
  std::vector<std::size_t> ranks;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t stop = comma == std::string_view::npos ? text.size() : comma;
    ranks.push_back(parse_count(text.substr(start, stop - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (ranks.size() == 1) return uniform(n3, ranks.front());
  if (ranks.size() != n3) {
    throw std::invalid_argument("rank list has " + std::to_string(ranks.size()) +
                                " entries, expected 1 or " + std::to_string(n3));
  }
  return MultiRank(std::move(ranks));
}

std::size_t MultiRank::tubal() const {
  return ranks_.empty() ? 0 : *std::max_element(ranks_.begin(), ranks_.end());
}

std::size_t MultiRank::total() const {
  std::size_t t = 0;
  for (auto r : ranks_) t += r;
  return t;
}

void MultiRank::require_feasible(const Dims& d, const char* op) const {
  if (ranks_.size() != d.n3) {
    throw ShapeError(std::string(op) + ": multi-rank has " + std::to_string(ranks_.size()) +
                     " entries but tensor " + tcrcg::to_string(d) + " has " + std::to_string(d.n3) +
                     " slices");
  }
  const std::size_t cap = std::min(d.n1, d.n2);
  for (std::size_t k = 0; k < ranks_.size(); ++k) {
    if (ranks_[k] > cap) {
      throw ShapeError(std::string(op) + ": rank " + std::to_string(ranks_[k]) + " of slice " +
                       std::to_string(k) + " exceeds min(n1, n2) = " + std::to_string(cap));
    }
  }
}

std::string MultiRank::to_string() const {
  std::string s = "(";
  for (std::size_t k = 0; k < ranks_.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(ranks_[k]);
  }
  return s + ")";
}

SliceSvd svd_of_slice(const Eigen::MatrixXd& m, std::size_t slice_index) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw SvdError(slice_index, "SVD did not converge on transform slice " +
                                    std::to_string(slice_index));
  }
  SliceSvd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  if (!out.sigma.allFinite() || !out.u.allFinite() || !out.v.allFinite()) {
    throw SvdError(slice_index,
                   "SVD produced non-finite values on transform slice " + std::to_string(slice_index));
  }
  return out;
}

SkinnyTcSvd::SkinnyTcSvd(Dims dims, std::vector<SliceSvd> slices)
    : dims_(dims), slices_(std::move(slices)) {
  if (slices_.size() != dims_.n3) {
    throw ShapeError("SkinnyTcSvd: " + std::to_string(slices_.size()) + " slices for tensor " +
                     to_string(dims_));
  }
  std::vector<std::size_t> ranks;
  ranks.reserve(slices_.size());
  for (const auto& s : slices_) {
    if (static_cast<std::size_t>(s.u.rows()) != dims_.n1 ||
        static_cast<std::size_t>(s.v.rows()) != dims_.n2 || s.u.cols() != s.sigma.size() ||
        s.v.cols() != s.sigma.size()) {
      throw ShapeError("SkinnyTcSvd: slice factors do not match tensor " + to_string(dims_));
    }
    ranks.push_back(s.rank());
  }
  rank_ = MultiRank(std::move(ranks));
}

Tensor3 SkinnyTcSvd::u() const { return assemble_factor(dims_, dims_.n1, tubal_rank(), slices_, true); }

Tensor3 SkinnyTcSvd::v() const { return assemble_factor(dims_, dims_.n2, tubal_rank(), slices_, false); }

Tensor3 SkinnyTcSvd::s() const {
  const std::size_t r = tubal_rank();
  Tensor3 hat(Dims{r, r, dims_.n3});
  for (std::size_t k = 0; k < dims_.n3; ++k) {
    for (Eigen::Index i = 0; i < slices_[k].sigma.size(); ++i) hat.slice(k)(i, i) = slices_[k].sigma(i);
  }
  return idct3(hat);
}

Tensor3 SkinnyTcSvd::reconstruct_transformed() const {
  Tensor3 hat(dims_);
  for (std::size_t k = 0; k < dims_.n3; ++k) {
    const auto& s = slices_[k];
    if (s.rank() == 0) continue;
    hat.slice(k).noalias() = s.u * s.sigma.asDiagonal() * s.v.transpose();
  }
  return hat;
}

Tensor3 SkinnyTcSvd::reconstruct() const { return idct3(reconstruct_transformed()); }

double SkinnyTcSvd::sigma_max() const { return pooled_max(slices_); }

double SkinnyTcSvd::sigma_min() const {
  double m = 0.0;
  bool any = false;
  for (const auto& s : slices_) {
    if (s.rank() == 0) continue;
    const double last = s.sigma(s.sigma.size() - 1);
    m = any ? std::min(m, last) : last;
    any = true;
  }
  return m;
}

SkinnyTcSvd tcsvd(const Tensor3& a, double rel_tol) {
  const Dims d = a.dims();
  const Tensor3 ahat = dct3(a);
  std::vector<SliceSvd> full;
  full.reserve(d.n3);
  for (std::size_t k = 0; k < d.n3; ++k) full.push_back(svd_of_slice(ahat.slice(k), k));
  const double cutoff = rel_tol * pooled_max(full);
  std::vector<SliceSvd> kept;
  kept.reserve(d.n3);
  for (const auto& s : full) kept.push_back(keep_leading(s, count_above(s.sigma, cutoff)));
  return SkinnyTcSvd(d, std::move(kept));
}

FullTcSvd full_tcsvd(const Tensor3& a) {
  const Dims d = a.dims();
  const Tensor3 ahat = dct3(a);
  Tensor3 uhat(Dims{d.n1, d.n1, d.n3});
  Tensor3 shat(d);
  Tensor3 vhat(Dims{d.n2, d.n2, d.n3});
  for (std::size_t k = 0; k < d.n3; ++k) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(ahat.slice(k), Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success) {
      throw SvdError(k, "SVD did not converge on transform slice " + std::to_string(k));
    }
    uhat.slice(k) = svd.matrixU();
    vhat.slice(k) = svd.matrixV();
    const auto& sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i) shat.slice(k)(i, i) = sv(i);
  }
  return {idct3(uhat), idct3(shat), idct3(vhat)};
}

SkinnyTcSvd truncated_tcsvd_transformed(const Tensor3& ahat, const MultiRank& r, double rel_tol) {
  const Dims d = ahat.dims();
  r.require_feasible(d, "truncate");
  std::vector<SliceSvd> kept;
  kept.reserve(d.n3);
  for (std::size_t k = 0; k < d.n3; ++k) {
    if (r[k] == 0) {
      kept.push_back(SliceSvd{Eigen::MatrixXd(d.n1, 0), Eigen::VectorXd(0), Eigen::MatrixXd(d.n2, 0)});
      continue;
    }
    kept.push_back(keep_leading(svd_of_slice(ahat.slice(k), k), r[k]));
  }
  const double cutoff = rel_tol * pooled_max(kept);
  for (auto& s : kept) s = keep_leading(s, count_above(s.sigma, cutoff));
  return SkinnyTcSvd(d, std::move(kept));
}

SkinnyTcSvd truncated_tcsvd(const Tensor3& a, const MultiRank& r, double rel_tol) {
  r.require_feasible(a.dims(), "truncate");
  return truncated_tcsvd_transformed(dct3(a), r, rel_tol);
}

Tensor3 truncate_h_r(const Tensor3& a, const MultiRank& r) {
  // rel_tol 0 keeps every requested triplet; zero singular values add nothing.
  return truncated_tcsvd(a, r, 0.0).reconstruct();
}

MultiRank multi_rank_of(const Tensor3& a, double tol) {
  if (tol < 0) throw std::invalid_argument("multi_rank_of: tolerance must be non-negative");
  return tcsvd(a, tol).multi_rank();
}

}  // namespace tcrcg
