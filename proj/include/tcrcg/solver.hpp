// SPDX-License-Identifier: Apache-2.0
//
// Tensor completion on the fixed multi-rank manifold: restarted Riemannian
// conjugate gradient, the two initialization schemes (hard thresholding and
// resampled gradient descent with trimming) and incoherence diagnostics.

#ifndef TCRCG_SOLVER_HPP
#define TCRCG_SOLVER_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "tcrcg/manifold.hpp"
#include "tcrcg/sampling.hpp"
#include "tcrcg/tc_svd.hpp"
#include "tcrcg/tensor.hpp"

namespace tcrcg {

struct HardThreshold {};

// Step length of the resampled gradient steps: the unbiased fixed step
// 1 / p_hat, or exact line search on the current group's samples.
enum class ResampleStep { Fixed, LineSearch };

struct ResampleTrim {
  // Number of resampled gradient steps; the sample is split into groups + 1
  // blocks. Theory asks for L >= 6 log(beta n log n / (24 eps0)), which
  // depends on an unobservable eps0, so this is a plain setting.
  std::size_t groups = 10;
  // Trimming level. When absent: 1.25 x incoherence_mu0 of the first
  // hard-threshold estimate.
  std::optional<double> mu;
  ResampleStep step = ResampleStep::LineSearch;
};

using InitScheme = std::variant<HardThreshold, ResampleTrim>;

struct SolverConfig {
  MultiRank target_rank;
  double k1 = 0.1;
  double k2 = 1.0;
  std::size_t max_iters = 500;
  double rel_change_tol = 1e-4;
  double success_res_tol = 1e-3;
  // Stop when ||P_T(G)||_F <= grad_floor * ||observed entries||_F.
  double grad_floor = 1e-12;
  // Relative singular-value cutoff used to detect rank drops at retraction.
  double rank_tol = kDefaultRankTol;
  InitScheme init = HardThreshold{};
  // Recorded for reproducibility; the solver itself draws no random numbers.
  std::uint64_t seed = 0;

  // Throws std::invalid_argument when k1 is outside [0, 1), k2 <= 0 or a
  // tolerance is not positive.
  void validate() const;
};

enum class StopReason { RelativeChange, GradientFloor, MaxIterations };

const char* to_string(StopReason r);

struct IterationRecord {
  std::size_t iter = 0;
  double objective = 0;   // 0.5 * <X_l - A, R_Omega (X_l - A)>
  double grad_norm = 0;   // ||P_T(G_l)||_F
  double alpha = 0;
  double beta = 0;
  bool restarted = false;  // beta forced to zero (always true at l = 0)
  double rel_change = 0;   // ||X_{l+1} - X_l||_F / ||X_l||_F
  bool alpha_fallback = false;
  // <Q_l, R_Omega P_T(Q_{l-1})> divided by the magnitude of its two terms;
  // zero up to roundoff when beta != 0.
  double conjugacy = 0;
  bool rank_drop = false;
};

struct SolverReport {
  std::size_t iterations = 0;
  std::vector<std::size_t> restarts;
  std::vector<std::size_t> alpha_fallbacks;
  std::vector<IterationRecord> trace;
  Tensor3 recovered;
  MultiRank final_rank;
  std::optional<double> res;
  bool converged = false;
  bool rank_drop = false;
  StopReason stop = StopReason::MaxIterations;
  double init_seconds = 0;
  double solve_seconds = 0;
};

double objective(const Tensor3& x, const Tensor3& observed, const SamplingSet& omega);

TangentPoint init_hard_threshold(const Tensor3& observed, const SamplingSet& omega,
                                 const MultiRank& r, double rank_tol = kDefaultRankTol);

// Resampled Riemannian gradient steps with trimming. When `iterates` is
// given it receives Z_0, ..., Z_L.
TangentPoint init_resample_trim(const Tensor3& observed, const SamplingSet& omega,
                                const MultiRank& r, std::optional<double> mu, std::size_t groups,
                                ResampleStep step = ResampleStep::LineSearch,
                                double rank_tol = kDefaultRankTol,
                                std::vector<TangentPoint>* iterates = nullptr);

// Clips the horizontal slices of both factors to the mu-incoherence level
// and re-factorizes the result into skinny form.
SkinnyTcSvd trim(const SkinnyTcSvd& z, double mu, const MultiRank& r);

// max over both factors of (n / r) * max_i ||factor^T * e_i||_F^2 with e_i
// the transformed column basis.
double incoherence_mu0(const SkinnyTcSvd& x);
// ||x||_inf * sqrt(n1 n2 n3 / r) / ||x||
double joint_mu1(const Tensor3& x, std::size_t r);

// Power-iteration estimate of ||P_T - p^{-1} P_T R_Omega P_T|| at a point.
double sampling_deviation(const TangentPoint& at, const SamplingSet& omega,
                          std::size_t iterations = 100, std::uint64_t seed = 1);

// Runs the configured initialization, then conjugate gradient.
SolverReport rcg_complete(const Tensor3& observed, const SamplingSet& omega,
                          const SolverConfig& cfg, const Tensor3* truth = nullptr);

// Conjugate gradient from a given starting point.
SolverReport rcg_from(const TangentPoint& start, const Tensor3& observed, const SamplingSet& omega,
                      const SolverConfig& cfg, const Tensor3* truth = nullptr);

// One JSON object per iteration:
// {"iter","obj","grad_norm","alpha","beta","restarted"}.
void write_trace_jsonl(std::ostream& out, const SolverReport& report);

}  // namespace tcrcg

#endif  // TCRCG_SOLVER_HPP
