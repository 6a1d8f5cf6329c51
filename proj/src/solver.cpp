// SPDX-License-Identifier: Apache-2.0

#include "tcrcg/solver.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "tcrcg/rng.hpp"
#include "tcrcg/tc_algebra.hpp"
#include "tcrcg/tube_transform.hpp"

namespace tcrcg {
namespace {

using Eigen::MatrixXd;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// R_Omega (observed - x), nonzero only on the support.
Tensor3 sampled_residual(const SamplingSet& omega, const Tensor3& observed, const Tensor3& x) {
  Tensor3 g(observed.dims());
  auto gv = g.values();
  auto av = observed.values();
  auto xv = x.values();
  for (const auto& e : omega.support()) gv[e.linear] = e.count * (av[e.linear] - xv[e.linear]);
  return g;
}

double observed_norm(const SamplingSet& omega, const Tensor3& observed) {
  double s = 0.0;
  auto av = observed.values();
  for (const auto& e : omega.support()) s += av[e.linear] * av[e.linear];
  return std::sqrt(s);
}

// Resampled gradient step P_T R_Omega (observed - x) scaled either by 1/p or
// by the exact minimizer along it of the group's objective.
Tensor3 resampled_step(const TangentPoint& at, const Tensor3& observed, const SamplingSet& omega,
                       ResampleStep rule) {
  const Tensor3 g = sampled_residual(omega, observed, at.value());
  Tensor3 pg_hat = tangent_project_transformed(at, dct3(g));
  double scale = 1.0 / omega.sampling_ratio();
  if (rule == ResampleStep::LineSearch) {
    const double num = inner(pg_hat, pg_hat);
    const Tensor3 pg = idct3(pg_hat);
    const double den = sampled_inner(omega, pg, pg);
    if (den > 0.0 && num > 0.0) scale = num / den;
  }
  pg_hat *= scale;
  return pg_hat;
}

std::pair<MatrixXd, MatrixXd> thin_qr(const MatrixXd& a) {
  const Eigen::Index k = a.cols();
  Eigen::HouseholderQR<MatrixXd> qr(a);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(a.rows(), k);
  MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return {std::move(q), std::move(r)};
}

// Row scale factors clipping the horizontal-slice norms of a factor.
Eigen::VectorXd clip_factors(const std::vector<SliceSvd>& slices, bool left, std::size_t rows,
                             double bound) {
  Eigen::VectorXd norms2 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows));
  for (const auto& s : slices) {
    const MatrixXd& f = left ? s.u : s.v;
    if (f.cols() > 0) norms2 += f.rowwise().squaredNorm();
  }
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(norms2.size());
  for (Eigen::Index i = 0; i < norms2.size(); ++i) {
    const double norm = std::sqrt(norms2(i));
    if (norm > bound && norm > 0.0) scale(i) = bound / norm;
  }
  return scale;
}

double factor_coherence(const std::vector<SliceSvd>& slices, bool left, std::size_t rows,
                        std::size_t n3, std::size_t r) {
  Eigen::VectorXd norms2 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows));
  for (const auto& s : slices) {
    const MatrixXd& f = left ? s.u : s.v;
    if (f.cols() > 0) norms2 += f.rowwise().squaredNorm();
  }
  // ||F^T * e_i||_F^2 = (1/n3) * sum_k ||row_i(F_k)||^2
  return static_cast<double>(rows) / static_cast<double>(r) * norms2.maxCoeff() /
         static_cast<double>(n3);
}

}  // namespace

void SolverConfig::validate() const {
  if (!(k1 >= 0.0 && k1 < 1.0)) throw std::invalid_argument("solver: k1 must lie in [0, 1)");
  if (!(k2 > 0.0)) throw std::invalid_argument("solver: k2 must be positive");
  if (!(rel_change_tol > 0.0) || !(success_res_tol > 0.0)) {
    throw std::invalid_argument("solver: tolerances must be positive");
  }
  if (!(grad_floor >= 0.0) || !(rank_tol >= 0.0)) {
    throw std::invalid_argument("solver: grad_floor and rank_tol must be non-negative");
  }
  if (max_iters == 0) throw std::invalid_argument("solver: max_iters must be positive");
  if (const auto* rt = std::get_if<ResampleTrim>(&init)) {
    if (rt->groups == 0) throw std::invalid_argument("solver: resample init needs at least one step");
    if (rt->mu && !(*rt->mu > 0.0)) throw std::invalid_argument("solver: mu must be positive");
  }
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::RelativeChange:
      return "relative_change";
    case StopReason::GradientFloor:
      return "gradient_floor";
    case StopReason::MaxIterations:
      return "max_iterations";
  }
  return "unknown";
}

double objective(const Tensor3& x, const Tensor3& observed, const SamplingSet& omega) {
  require_same_dims(x.dims(), observed.dims(), "objective");
  require_same_dims(x.dims(), omega.dims(), "objective");
  auto xv = x.values();
  auto av = observed.values();
  double f = 0.0;
  for (const auto& e : omega.support()) {
    const double diff = xv[e.linear] - av[e.linear];
    f += e.count * diff * diff;
  }
  return 0.5 * f;
}

TangentPoint init_hard_threshold(const Tensor3& observed, const SamplingSet& omega,
                                 const MultiRank& r, double rank_tol) {
  require_same_dims(observed.dims(), omega.dims(), "init_hard_threshold");
  r.require_feasible(observed.dims(), "init_hard_threshold");
  Tensor3 scaled = apply_r_omega(omega, observed);
  scaled *= 1.0 / omega.sampling_ratio();
  return TangentPoint::from_tensor(scaled, r, rank_tol);
}

SkinnyTcSvd trim(const SkinnyTcSvd& z, double mu, const MultiRank& r) {
  if (!(mu > 0.0)) throw std::invalid_argument("trim: mu must be positive");
  const Dims d = z.dims();
  r.require_feasible(d, "trim");
  const double rt = static_cast<double>(r.tubal());
  const double n3 = static_cast<double>(d.n3);
  // ||F^[i]||_F / sqrt(n3) is the row's transformed-basis norm.
  const double bound_u = std::sqrt(mu * rt / static_cast<double>(d.n1) * n3);
  const double bound_v = std::sqrt(mu * rt / static_cast<double>(d.n2) * n3);
  const Eigen::VectorXd cu = clip_factors(z.slices(), true, d.n1, bound_u);
  const Eigen::VectorXd cv = clip_factors(z.slices(), false, d.n2, bound_v);

  std::vector<SliceSvd> out;
  out.reserve(d.n3);
  for (std::size_t k = 0; k < d.n3; ++k) {
    const SliceSvd& s = z.slice(k);
    if (s.rank() == 0) {
      out.push_back(s);
      continue;
    }
    const MatrixXd a = cu.asDiagonal() * s.u;
    const MatrixXd b = cv.asDiagonal() * s.v;
    auto [qa, ra] = thin_qr(a);
    auto [qb, rb] = thin_qr(b);
    const MatrixXd core = ra * s.sigma.asDiagonal() * rb.transpose();
    const SliceSvd small = svd_of_slice(core, k);
    out.push_back(SliceSvd{qa * small.u, small.sigma, qb * small.v});
  }
  return SkinnyTcSvd(d, std::move(out));
}

double incoherence_mu0(const SkinnyTcSvd& x) {
  const std::size_t r = x.tubal_rank();
  if (r == 0) throw std::invalid_argument("incoherence_mu0: factors have tubal rank 0");
  const Dims d = x.dims();
  return std::max(factor_coherence(x.slices(), true, d.n1, d.n3, r),
                  factor_coherence(x.slices(), false, d.n2, d.n3, r));
}

double joint_mu1(const Tensor3& x, std::size_t r) {
  const double spec = spectral_norm(x);
  if (spec == 0.0) throw std::invalid_argument("joint_mu1: zero tensor");
  if (r == 0) throw std::invalid_argument("joint_mu1: rank must be positive");
  return inf_norm(x) * std::sqrt(static_cast<double>(x.dims().size()) / static_cast<double>(r)) / spec;
}

double sampling_deviation(const TangentPoint& at, const SamplingSet& omega, std::size_t iterations,
                          std::uint64_t seed) {
  const Dims d = at.dims();
  require_same_dims(d, omega.dims(), "sampling_deviation");
  const double inv_p = 1.0 / omega.sampling_ratio();
  SplitMix64 rng(seed);
  Tensor3 x(d);
  for (double& v : x.values()) v = rng.normal();
  x = tangent_project(at, x);
  double nx = fro_norm(x);
  if (nx == 0.0) return 0.0;
  x *= 1.0 / nx;
  double estimate = 0.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    // x is tangent, so P_T x = x.
    Tensor3 y = tangent_project(at, apply_r_omega(omega, x));
    y *= -inv_p;
    y += x;
    estimate = fro_norm(y);
    if (estimate == 0.0) return 0.0;
    y *= 1.0 / estimate;
    x = std::move(y);
  }
  return estimate;
}

TangentPoint init_resample_trim(const Tensor3& observed, const SamplingSet& omega,
                                const MultiRank& r, std::optional<double> mu, std::size_t groups,
                                ResampleStep rule, double rank_tol, std::vector<TangentPoint>* iterates) {
  require_same_dims(observed.dims(), omega.dims(), "init_resample_trim");
  r.require_feasible(observed.dims(), "init_resample_trim");
  const auto parts = partition_omega(omega, groups + 1);

  TangentPoint z = init_hard_threshold(observed, parts[0], r, rank_tol);
  if (iterates) iterates->push_back(z);
  if (z.multi_rank().tubal() == 0) return z;
  const double level = mu.value_or(1.25 * incoherence_mu0(z.factors()));

  for (std::size_t l = 0; l < groups; ++l) {
    const TangentPoint trimmed(trim(z.factors(), level, r));
    const Tensor3 step = resampled_step(trimmed, observed, parts[l + 1], rule);
    z = retract_transformed(trimmed, step, r, rank_tol).point;
    if (iterates) iterates->push_back(z);
    if (z.multi_rank().tubal() == 0) break;
  }
  return z;
}

SolverReport rcg_from(const TangentPoint& start, const Tensor3& observed, const SamplingSet& omega,
                      const SolverConfig& cfg, const Tensor3* truth) {
  cfg.validate();
  const Dims d = observed.dims();
  require_same_dims(d, omega.dims(), "rcg_complete");
  require_same_dims(d, start.dims(), "rcg_complete");
  cfg.target_rank.require_feasible(d, "rcg_complete");
  if (truth) require_same_dims(d, truth->dims(), "rcg_complete");

  const auto t0 = Clock::now();
  const double inv_p = 1.0 / omega.sampling_ratio();
  const double floor = cfg.grad_floor * observed_norm(omega, observed);

  SolverReport report;
  TangentPoint x = start;
  Tensor3 q_prev_hat;
  bool have_prev = false;

  for (std::size_t l = 0; l < cfg.max_iters; ++l) {
    IterationRecord rec;
    rec.iter = l;
    const Tensor3 g = sampled_residual(omega, observed, x.value());
    rec.objective = objective(x.value(), observed, omega);
    const Tensor3 pg_hat = tangent_project_transformed(x, dct3(g));
    rec.grad_norm = fro_norm(pg_hat);
    if (rec.grad_norm <= floor) {
      report.stop = StopReason::GradientFloor;
      report.converged = true;
      break;
    }
    const Tensor3 pg = idct3(pg_hat);

    Tensor3 q_hat = pg_hat;
    Tensor3 q = pg;
    rec.restarted = true;
    if (have_prev) {
      const Tensor3 pq_hat = tangent_project_transformed(x, q_prev_hat);
      const Tensor3 pq = idct3(pq_hat);
      const double pq_norm = fro_norm(pq_hat);
      const double curvature = sampled_inner(omega, pq, pq);
      if (curvature > 0.0 && pq_norm > 0.0) {
        const double cosine = std::fabs(inner(pg_hat, pq_hat)) / (rec.grad_norm * pq_norm);
        if (cosine <= cfg.k1 && rec.grad_norm <= cfg.k2 * pq_norm) {
          rec.beta = -sampled_inner(omega, pg, pq) / curvature;
          rec.restarted = false;
        }
      }
      if (!rec.restarted) {
        q_hat.axpy(rec.beta, pq_hat);
        q.axpy(rec.beta, pq);
        const double scale = std::fabs(sampled_inner(omega, pg, pq)) + std::fabs(rec.beta) * curvature;
        rec.conjugacy = scale > 0.0 ? sampled_inner(omega, q, pq) / scale : 0.0;
      }
    }

    const double denom = sampled_inner(omega, q, q);
    rec.alpha = inner(pg_hat, q_hat) / denom;
    if (!(denom > 0.0) || !std::isfinite(rec.alpha)) {
      rec.alpha = inv_p;
      rec.alpha_fallback = true;
      report.alpha_fallbacks.push_back(l);
    }

    Tensor3 step = q_hat;
    step *= rec.alpha;
    Retraction next = retract_transformed(x, step, cfg.target_rank, cfg.rank_tol);
    rec.rank_drop = next.rank_drop;
    report.rank_drop = report.rank_drop || next.rank_drop;

    const double base = fro_norm(x.value_transformed());
    const double change = fro_norm(next.point.value_transformed() - x.value_transformed());
    rec.rel_change = base > 0.0 ? change / base : (change > 0.0 ? INFINITY : 0.0);

    if (rec.restarted) report.restarts.push_back(l);
    report.trace.push_back(rec);
    x = std::move(next.point);
    q_prev_hat = std::move(q_hat);
    have_prev = true;

    if (rec.rel_change <= cfg.rel_change_tol) {
      report.stop = StopReason::RelativeChange;
      report.converged = true;
      break;
    }
  }

  report.iterations = report.trace.size();
  report.recovered = x.value();
  report.final_rank = x.multi_rank();
  if (truth) {
    const double tn = fro_norm(*truth);
    if (tn > 0.0) report.res = fro_norm(report.recovered - *truth) / tn;
  }
  report.solve_seconds = seconds_since(t0);
  return report;
}

SolverReport rcg_complete(const Tensor3& observed, const SamplingSet& omega, const SolverConfig& cfg,
                          const Tensor3* truth) {
  cfg.validate();
  require_same_dims(observed.dims(), omega.dims(), "rcg_complete");
  cfg.target_rank.require_feasible(observed.dims(), "rcg_complete");
  const auto t0 = Clock::now();
  TangentPoint start;
  if (const auto* rt = std::get_if<ResampleTrim>(&cfg.init)) {
    start = init_resample_trim(observed, omega, cfg.target_rank, rt->mu, rt->groups, rt->step,
                               cfg.rank_tol);
  } else {
    start = init_hard_threshold(observed, omega, cfg.target_rank, cfg.rank_tol);
  }
  const double init_seconds = seconds_since(t0);
  SolverReport report = rcg_from(start, observed, omega, cfg, truth);
  report.init_seconds = init_seconds;
  return report;
}

void write_trace_jsonl(std::ostream& out, const SolverReport& report) {
  for (const auto& rec : report.trace) {
    nlohmann::ordered_json j;
    j["iter"] = rec.iter;
    j["obj"] = rec.objective;
    j["grad_norm"] = rec.grad_norm;
    j["alpha"] = rec.alpha;
    j["beta"] = rec.beta;
    j["restarted"] = rec.restarted;
    j["rel_change"] = rec.rel_change;
    j["rank_drop"] = rec.rank_drop;
    out << j.dump() << '\n';
  }
}

}  // namespace tcrcg
