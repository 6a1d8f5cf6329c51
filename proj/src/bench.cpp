// SPDX-License-Identifier: Apache-2.0

#include "tcrcg/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "tcrcg/io.hpp"
#include "tcrcg/manifold.hpp"
#include "tcrcg/rng.hpp"
#include "tcrcg/sampling.hpp"
#include "tcrcg/tc_algebra.hpp"

namespace tcrcg {
namespace {

constexpr std::uint64_t kTruthTag = 1;
constexpr std::uint64_t kOmegaTag = 2;

std::uint64_t trial_key(std::uint64_t base, std::size_t n, std::size_t m, std::size_t trial) {
  return derive_seed(derive_seed(derive_seed(base, n), m), trial);
}

Tensor3 gaussian(Dims d, SplitMix64& rng) {
  Tensor3 a(d);
  for (double& v : a.values()) v = rng.normal();
  return a;
}

std::size_t cube(std::size_t n) { return n * n * n; }

}  // namespace

Tensor3 gen_synthetic(std::size_t n, std::size_t r, std::uint64_t seed) {
  if (r > n) throw std::invalid_argument("gen_synthetic: rank exceeds n");
  if (n == 0) throw ShapeError("gen_synthetic: n must be positive");
  if (r == 0) return Tensor3(Dims{n, n, n});
  SplitMix64 rng(seed);
  const Tensor3 s = gaussian(Dims{n, r, n}, rng);
  const Tensor3 w = gaussian(Dims{r, n, n}, rng);
  return tprod(s, w);
}

double metrics_res(const Tensor3& x, const Tensor3& truth) {
  require_same_dims(x.dims(), truth.dims(), "metrics_res");
  const double tn = fro_norm(truth);
  if (tn == 0.0) throw std::invalid_argument("metrics_res: zero truth");
  return fro_norm(x - truth) / tn;
}

double metrics_psnr(const Tensor3& x, const Tensor3& truth) {
  require_same_dims(x.dims(), truth.dims(), "metrics_psnr");
  require_nonempty(truth.dims(), "metrics_psnr");
  const auto tv = truth.values();
  const auto [lo, hi] = std::minmax_element(tv.begin(), tv.end());
  const double range = *hi - *lo;
  const double err = fro_norm(x - truth);
  if (err == 0.0) return kPsnrCap;
  const double psnr =
      10.0 * std::log10(static_cast<double>(truth.size()) * range * range / (err * err));
  return std::min(psnr, kPsnrCap);
}

void ExperimentSpec::validate() const {
  if (n_list.empty()) throw std::invalid_argument("experiment: empty n grid");
  if (trials == 0) throw std::invalid_argument("experiment: trials must be at least 1");
  if (tubal_rank == 0) throw std::invalid_argument("experiment: rank must be positive");
  if (dim_multiples.empty()) {
    if (sr_list.empty()) throw std::invalid_argument("experiment: empty sampling grid");
    for (double s : sr_list) {
      if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("experiment: Sr must lie in (0, 1]");
    }
  } else {
    for (double c : dim_multiples) {
      if (!(c > 0.0)) throw std::invalid_argument("experiment: dimension multiples must be positive");
    }
  }
  for (std::size_t n : n_list) {
    if (tubal_rank > n) throw std::invalid_argument("experiment: rank exceeds n");
    for (std::size_t m : m_grid(n)) {
      if (m == 0) throw std::invalid_argument("experiment: grid yields m = 0 at n = " + std::to_string(n));
    }
  }
  solver.validate();
}

std::vector<std::size_t> ExperimentSpec::m_grid(std::size_t n) const {
  std::vector<std::size_t> ms;
  if (dim_multiples.empty()) {
    for (double s : sr_list) ms.push_back(static_cast<std::size_t>(std::llround(s * static_cast<double>(cube(n)))));
  } else {
    const double dim = static_cast<double>(manifold_dim(Dims{n, n, n}, MultiRank::uniform(n, tubal_rank)));
    for (double c : dim_multiples) ms.push_back(static_cast<std::size_t>(std::llround(c * dim)));
  }
  return ms;
}

std::uint64_t truth_seed(std::uint64_t base, std::size_t n, std::size_t m, std::size_t trial) {
  return derive_seed(trial_key(base, n, m, trial), kTruthTag);
}

std::uint64_t omega_seed(std::uint64_t base, std::size_t n, std::size_t m, std::size_t trial) {
  return derive_seed(trial_key(base, n, m, trial), kOmegaTag);
}

TrialResult run_trial(std::size_t n, std::size_t r, std::size_t m, std::size_t trial,
                      std::uint64_t base_seed, const SolverConfig& cfg) {
  TrialResult out;
  out.n = n;
  out.m = m;
  out.trial = trial;
  try {
    const Tensor3 truth = gen_synthetic(n, r, truth_seed(base_seed, n, m, trial));
    const Dims d = truth.dims();
    const SamplingSet omega = sample_omega(d, m, omega_seed(base_seed, n, m, trial));
    SolverConfig c = cfg;
    c.target_rank = MultiRank::uniform(n, r);
    c.seed = omega.seed().value_or(0);
    const SolverReport rep = rcg_complete(truth, omega, c, &truth);
    out.res = rep.res.value_or(INFINITY);
    out.success = std::isfinite(out.res) && out.res < c.success_res_tol;
    out.iterations = rep.iterations;
    out.init_seconds = rep.init_seconds;
    out.solve_seconds = rep.solve_seconds;
  } catch (const std::exception& e) {
    out.failed = true;
    out.success = false;
    out.error = e.what();
    out.res = INFINITY;
  }
  return out;
}

std::vector<TrialResult> run_trials(const ExperimentSpec& spec) {
  spec.validate();
  struct Task {
    std::size_t n, m, trial;
  };
  std::vector<Task> tasks;
  for (std::size_t n : spec.n_list)
    for (std::size_t m : spec.m_grid(n))
      for (std::size_t t = 0; t < spec.trials; ++t) tasks.push_back(Task{n, m, t});

  std::vector<TrialResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      results[i] = run_trial(t.n, spec.tubal_rank, t.m, t.trial, spec.base_seed, spec.solver);
    }
  };
  std::size_t threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, tasks.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  return results;
}

std::vector<PhaseCell> summarize_cells(const std::vector<TrialResult>& trials) {
  std::vector<PhaseCell> cells;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  for (const auto& t : trials) {
    auto [it, fresh] = index.try_emplace({t.n, t.m}, cells.size());
    if (fresh) cells.push_back(PhaseCell{t.n, t.m, 0, 0, 0.0});
    PhaseCell& c = cells[it->second];
    ++c.trials;
    if (t.success) ++c.successes;
  }
  for (auto& c : cells) c.fraction = static_cast<double>(c.successes) / static_cast<double>(c.trials);
  return cells;
}

std::vector<PhaseCell> run_phase_diagram(const ExperimentSpec& spec) {
  if (spec.kind != ExperimentKind::PhaseDiagram) {
    throw std::invalid_argument("run_phase_diagram: experiment kind is not PhaseDiagram");
  }
  return summarize_cells(run_trials(spec));
}

void write_phase_csv(std::ostream& out, const std::vector<PhaseCell>& cells) {
  out << "n,m,success_fraction\n";
  char buf[32];
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof buf, "%.4f", c.fraction);
    out << c.n << ',' << c.m << ',' << buf << '\n';
  }
}

void write_phase_pgm(std::ostream& out, const std::vector<PhaseCell>& cells) {
  std::vector<std::size_t> ns;
  std::map<std::size_t, std::vector<double>> rows;
  for (const auto& c : cells) {
    if (!rows.count(c.n)) ns.push_back(c.n);
    rows[c.n].push_back(c.fraction);
  }
  std::size_t cols = 0;
  for (const auto& [n, r] : rows) cols = std::max(cols, r.size());
  std::vector<double> values;
  values.reserve(ns.size() * cols);
  for (std::size_t n : ns) {
    auto r = rows[n];
    r.resize(cols, 0.0);
    values.insert(values.end(), r.begin(), r.end());
  }
  write_pgm(out, ns.size(), cols, values);
}

ImageResult image_complete(const Tensor3& image, const MultiRank& r, double sr, const SolverConfig& cfg,
                           std::uint64_t seed) {
  if (!(sr > 0.0 && sr <= 1.0)) throw std::invalid_argument("image_complete: Sr must lie in (0, 1]");
  require_nonempty(image.dims(), "image_complete");
  r.require_feasible(image.dims(), "image_complete");
  const auto t0 = std::chrono::steady_clock::now();
  ImageResult out;
  out.truth = truncate_h_r(image, r);
  out.m = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(sr * static_cast<double>(image.size()))));
  const SamplingSet omega = sample_omega(image.dims(), out.m, seed);
  SolverConfig c = cfg;
  c.target_rank = r;
  c.seed = seed;
  const SolverReport rep = rcg_complete(out.truth, omega, c, &out.truth);
  out.recovered = rep.recovered;
  out.psnr = metrics_psnr(out.recovered, out.truth);
  out.res = rep.res.value_or(0.0);
  out.iterations = rep.iterations;
  out.init_seconds = rep.init_seconds;
  out.solve_seconds = rep.solve_seconds;
  out.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace tcrcg
