// SPDX-License-Identifier: Apache-2.0

#include "tcrcg/tube_transform.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <fftw3.h>

#include "tcrcg/kernels.hpp"

namespace tcrcg {
namespace {

// FFTW planning is not thread-safe; execution with the new-array interface
// is. Plans are created once per (kind, length, tube count) and kept for the
// life of the process.
class PlanCache {
 public:
  fftw_plan get(fftw_r2r_kind kind, std::size_t n, std::size_t howmany) {
    const auto key = std::make_tuple(static_cast<int>(kind), n, howmany);
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    std::vector<double> scratch(n * howmany);
    const int len = static_cast<int>(n);
    const int stride = static_cast<int>(howmany);
    fftw_plan plan = fftw_plan_many_r2r(1, &len, static_cast<int>(howmany), scratch.data(), nullptr,
                                        stride, 1, scratch.data(), nullptr, stride, 1, &kind,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("FFTW failed to create a DCT plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<int, std::size_t, std::size_t>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

double ortho_weight(std::size_t k, std::size_t n) {
  return k == 0 ? std::sqrt(1.0 / static_cast<double>(n)) : std::sqrt(2.0 / static_cast<double>(n));
}

Tensor3 transform_fast(const Tensor3& in, bool inverse) {
  const Dims d = in.dims();
  Tensor3 out = in;
  if (d.n3 <= 1 || d.size() == 0) return out;
  const std::size_t tubes = d.slice_size();

  if (inverse) {
    for (std::size_t k = 0; k < d.n3; ++k) {
      const double w = k == 0 ? ortho_weight(0, d.n3) : 0.5 * ortho_weight(k, d.n3);
      kernels::scale(w, out.slice_values(k));
    }
  }
  fftw_plan plan = plan_cache().get(inverse ? FFTW_REDFT01 : FFTW_REDFT10, d.n3, tubes);
  double* data = out.values().data();
  fftw_execute_r2r(plan, data, data);
  if (!inverse) {
    for (std::size_t k = 0; k < d.n3; ++k) {
      kernels::scale(0.5 * ortho_weight(k, d.n3), out.slice_values(k));
    }
  }
  return out;
}

// out slice k = sum_t coeff(k, t) * in slice t
Tensor3 transform_matrix(const Tensor3& in, const Eigen::MatrixXd& coeff) {
  Tensor3 out(in.dims());
  const std::size_t n3 = in.dims().n3;
  for (std::size_t k = 0; k < n3; ++k) {
    auto dst = out.slice_values(k);
    for (std::size_t t = 0; t < n3; ++t) {
      kernels::axpy(coeff(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(t)),
                    in.slice_values(t), dst);
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd dct_matrix(std::size_t n) {
  if (n == 0) throw std::invalid_argument("dct_matrix: n must be positive");
  Eigen::MatrixXd c(n, n);
  const double nn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c(i, j) = i == 0 ? std::sqrt(1.0 / nn)
                       : std::sqrt(2.0 / nn) *
                             std::cos(std::numbers::pi * (2.0 * j + 1.0) * i / (2.0 * nn));
    }
  }
  return c;
}

Tensor3 dct3(const Tensor3& a, TransformPath path) {
  if (path == TransformPath::Matrix) return transform_matrix(a, dct_matrix(std::max<std::size_t>(a.dims().n3, 1)));
  return transform_fast(a, false);
}

Tensor3 idct3(const Tensor3& ahat, TransformPath path) {
  if (path == TransformPath::Matrix) {
    return transform_matrix(ahat, dct_matrix(std::max<std::size_t>(ahat.dims().n3, 1)).transpose());
  }
  return transform_fast(ahat, true);
}

}  // namespace tcrcg
