// SPDX-License-Identifier: Apache-2.0
//
// Experiment harness: synthetic instances, recovery metrics, phase-diagram
// sweeps and image completion.

#ifndef TCRCG_BENCH_HPP
#define TCRCG_BENCH_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tcrcg/solver.hpp"
#include "tcrcg/tc_svd.hpp"
#include "tcrcg/tensor.hpp"

namespace tcrcg {

// Reported in place of +inf when the error is exactly zero.
inline constexpr double kPsnrCap = 99.0;

// S * W with S (n x r x n) and W (r x n x n) standard Gaussian.
Tensor3 gen_synthetic(std::size_t n, std::size_t r, std::uint64_t seed);

// ||x - truth||_F / ||truth||_F; throws for a zero truth.
double metrics_res(const Tensor3& x, const Tensor3& truth);
// 10 log10(N (max - min)^2 / ||x - truth||_F^2), range taken over truth.
double metrics_psnr(const Tensor3& x, const Tensor3& truth);

enum class ExperimentKind { Synthetic, PhaseDiagram, ImageCompletion };

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::PhaseDiagram;
  std::vector<std::size_t> n_list{20, 30, 40, 50, 60, 70, 80, 90, 100};
  std::size_t tubal_rank = 2;
  // Sample-size grid: m = round(s * n^3) for each s in sr_list, or, when
  // dim_multiples is non-empty, m = round(c * manifold_dim) for each c.
  std::vector<double> sr_list{0.05, 0.10, 0.15, 0.20, 0.25, 0.30,
                              0.35, 0.40, 0.45, 0.50, 0.55, 0.60};
  std::vector<double> dim_multiples;
  std::size_t trials = 10;
  std::uint64_t base_seed = 0;
  SolverConfig solver;
  // Worker threads; 0 picks the hardware concurrency.
  std::size_t threads = 0;

  // Throws std::invalid_argument when the grid is empty, trials == 0, an
  // entry of sr_list lies outside (0, 1] or some m would be zero.
  void validate() const;
  std::vector<std::size_t> m_grid(std::size_t n) const;
};

struct TrialResult {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t trial = 0;
  bool success = false;
  bool failed = false;  // the solver threw
  std::string error;
  double res = 0;
  std::size_t iterations = 0;
  double init_seconds = 0;
  double solve_seconds = 0;
};

// Seeds of the ground truth and the sample for one keyed trial.
std::uint64_t truth_seed(std::uint64_t base, std::size_t n, std::size_t m, std::size_t trial);
std::uint64_t omega_seed(std::uint64_t base, std::size_t n, std::size_t m, std::size_t trial);

// One isolated trial; exceptions are captured in the result.
TrialResult run_trial(std::size_t n, std::size_t r, std::size_t m, std::size_t trial,
                      std::uint64_t base_seed, const SolverConfig& cfg);

// Every (n, m, trial) of the experiment, ordered by n, then m, then trial.
std::vector<TrialResult> run_trials(const ExperimentSpec& spec);

struct PhaseCell {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t successes = 0;
  std::size_t trials = 0;
  double fraction = 0;
};

std::vector<PhaseCell> run_phase_diagram(const ExperimentSpec& spec);
std::vector<PhaseCell> summarize_cells(const std::vector<TrialResult>& trials);

// Header "n,m,success_fraction".
void write_phase_csv(std::ostream& out, const std::vector<PhaseCell>& cells);
// One raster row per n, one column per grid point; black = 0, white = 1.
void write_phase_pgm(std::ostream& out, const std::vector<PhaseCell>& cells);

struct ImageResult {
  Tensor3 truth;
  Tensor3 recovered;
  std::size_t m = 0;
  double psnr = 0;
  double res = 0;
  std::size_t iterations = 0;
  double init_seconds = 0;
  double solve_seconds = 0;
  double total_seconds = 0;
};

// Truth = truncate_h_r(image, r); samples round(sr * N) entries of it.
ImageResult image_complete(const Tensor3& image, const MultiRank& r, double sr,
                           const SolverConfig& cfg, std::uint64_t seed);

}  // namespace tcrcg

#endif  // TCRCG_BENCH_HPP
