// SPDX-License-Identifier: Apache-2.0
//
// tcrcg: generate, complete, sweep and inspect third-order tensors.
// Results go to stdout as JSON; wall-clock timings go to stderr.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tcrcg/bench.hpp"
#include "tcrcg/io.hpp"
#include "tcrcg/manifold.hpp"
#include "tcrcg/rng.hpp"
#include "tcrcg/sampling.hpp"
#include "tcrcg/solver.hpp"
#include "tcrcg/tc_algebra.hpp"
#include "tcrcg/tc_svd.hpp"

using namespace tcrcg;
using json = nlohmann::ordered_json;

namespace {

struct SolverFlags {
  std::string init = "hard";
  std::size_t groups = 10;
  std::optional<double> mu;
  std::string step = "linesearch";
  double k1 = 0.1;
  double k2 = 1.0;
  std::size_t max_iters = 500;
  double tol = 1e-4;
  double success_tol = 1e-3;

  void attach(CLI::App* app) {
    app->add_option("--init", init, "Initialization scheme")->check(CLI::IsMember({"hard", "resample"}));
    app->add_option("--groups", groups, "Resampled steps L for --init resample")->check(CLI::PositiveNumber);
    app->add_option("--mu", mu, "Trimming level for --init resample");
    app->add_option("--resample-step", step, "Step of the resampled gradient steps")
        ->check(CLI::IsMember({"fixed", "linesearch"}));
    app->add_option("--k1", k1, "Restart threshold on |cos| between successive gradients");
    app->add_option("--k2", k2, "Restart threshold on the gradient norm ratio");
    app->add_option("--max-iters", max_iters, "Iteration cap");
    app->add_option("--tol", tol, "Relative-change stopping tolerance");
    app->add_option("--success-tol", success_tol, "Res threshold for a successful recovery");
  }

  SolverConfig config(std::uint64_t seed) const {
    SolverConfig c;
    c.k1 = k1;
    c.k2 = k2;
    c.max_iters = max_iters;
    c.rel_change_tol = tol;
    c.success_res_tol = success_tol;
    c.seed = seed;
    if (init == "resample") {
      c.init = ResampleTrim{groups, mu, step == "fixed" ? ResampleStep::Fixed : ResampleStep::LineSearch};
    } else {
      c.init = HardThreshold{};
    }
    return c;
  }
};

json dims_json(const Dims& d) { return json::array({d.n1, d.n2, d.n3}); }

// A uniform multi-rank is reported as a single integer.
json rank_json(const MultiRank& r) {
  const auto v = r.ranks();
  if (!v.empty() && std::all_of(v.begin(), v.end(), [&](std::size_t x) { return x == v[0]; })) return v[0];
  return std::vector<std::size_t>(v.begin(), v.end());
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

SamplingSet load_omega(const std::string& path, const Dims& d) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  if (ends_with(path, ".csv")) return read_omega_csv(in, d);
  SamplingSet omega = read_omega_binary(in);
  if (!(omega.dims() == d)) throw ShapeError("omega dims " + to_string(omega.dims()) + " do not match " + to_string(d));
  return omega;
}

void save_omega(const std::string& path, const SamplingSet& omega) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  if (ends_with(path, ".csv")) {
    write_omega_csv(out, omega);
  } else {
    write_omega_binary(out, omega);
  }
}

std::size_t sample_count(double sr, std::size_t total) {
  if (!(sr > 0.0 && sr <= 1.0)) throw std::invalid_argument("--sr must lie in (0, 1]");
  const auto m = static_cast<std::size_t>(std::llround(sr * static_cast<double>(total)));
  if (m == 0) throw std::invalid_argument("--sr yields no samples");
  return m;
}

void report_timing(double init, double solve, double total) {
  std::cerr << "timing: init=" << init << "s solve=" << solve << "s total=" << total << "s\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank tensor completion with Riemannian conjugate gradient"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "tcrcg 0.1.0");

  std::uint64_t seed = 0;
  std::string out_path;
  std::string rank_text = "2";
  double sr = 0.4;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic low-tubal-rank tensor");
  std::size_t gen_n = 50;
  std::string gen_omega;
  gen->add_option("--n", gen_n, "Side length n of the n x n x n tensor")->check(CLI::PositiveNumber);
  gen->add_option("--rank", rank_text, "Tubal rank");
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--out", out_path, "Output T3B file")->required();
  gen->add_option("--omega", gen_omega, "Also write a sample of round(sr * n^3) entries (.csv or binary)");
  gen->add_option("--sr", sr, "Sampling ratio for --omega");

  // complete
  auto* complete = app.add_subcommand("complete", "Complete a tensor from sampled entries");
  std::string input, image, omega_path, trace_path, omega_out;
  std::size_t comp_n = 50;
  SolverFlags comp_flags;
  complete->add_option("--input", input, "Full tensor (T3B) to sample from; used as truth");
  complete->add_option("--image", image, "PPM image; truth is its rank-truncated version");
  complete->add_option("--n", comp_n, "Side length of a synthetic instance when no input is given")
      ->check(CLI::PositiveNumber);
  complete->add_option("--omega", omega_path, "Sample set to use instead of drawing one (.csv or binary)");
  complete->add_option("--save-omega", omega_out, "Write the drawn sample set");
  complete->add_option("--rank", rank_text, "Target rank: r or r_1,...,r_n3");
  complete->add_option("--sr", sr, "Sampling ratio m / (n1 n2 n3)");
  complete->add_option("--seed", seed, "Random seed");
  complete->add_option("--out", out_path, "Recovered tensor (T3B, or PPM with --image)");
  complete->add_option("--trace", trace_path, "Per-iteration JSON lines");
  comp_flags.attach(complete);
  complete->get_option("--input")->excludes("--image");
  complete->get_option("--n")->excludes("--input")->excludes("--image");

  // phase
  auto* phase = app.add_subcommand("phase", "Phase-diagram sweep of recovery rates");
  ExperimentSpec spec;
  std::string pgm_path;
  SolverFlags phase_flags;
  phase->add_option("--n-list", spec.n_list, "Side lengths")->delimiter(',');
  phase->add_option("--sr-list", spec.sr_list, "Sampling ratios m / n^3")->delimiter(',');
  phase->add_option("--dim-multiples", spec.dim_multiples, "m as multiples of the manifold dimension")
      ->delimiter(',');
  phase->add_option("--rank", spec.tubal_rank, "Tubal rank")->check(CLI::PositiveNumber);
  phase->add_option("--trials", spec.trials, "Trials per cell")->check(CLI::PositiveNumber);
  phase->add_option("--seed", spec.base_seed, "Base seed");
  phase->add_option("--threads", spec.threads, "Worker threads (0 = all cores)");
  phase->add_option("--out", out_path, "CSV grid n,m,success_fraction");
  phase->add_option("--pgm", pgm_path, "Grayscale raster of the grid");
  phase_flags.attach(phase);

  // tsvd
  auto* tsvd = app.add_subcommand("tsvd", "Transformed multi-rank and singular values of a tensor");
  std::string tsvd_rank;
  double tsvd_tol = kDefaultRankTol;
  tsvd->add_option("--input", input, "T3B tensor")->required();
  tsvd->add_option("--rank", tsvd_rank, "Truncate to this multi-rank");
  tsvd->add_option("--tol", tsvd_tol, "Relative tolerance for the numerical rank");
  tsvd->add_option("--out", out_path, "Write the (truncated) reconstruction as T3B");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Res and PSNR of an estimate against a truth");
  std::string x_path, truth_path;
  metrics->add_option("--x", x_path, "Estimate (T3B)")->required();
  metrics->add_option("--truth", truth_path, "Truth (T3B)")->required();

  CLI11_PARSE(app, argc, argv);


  try {
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
    json out;

    if (*gen) {
      const std::size_t r = std::stoul(rank_text);
      const Tensor3 x = gen_synthetic(gen_n, r, seed);
      save_t3b(out_path, x);
      out["command"] = "gen";
      out["dims"] = dims_json(x.dims());
      out["rank"] = r;
      out["seed"] = seed;
      out["fro_norm"] = fro_norm(x);
      if (!gen_omega.empty()) {
        const SamplingSet omega = sample_omega(x.dims(), sample_count(sr, x.size()), derive_seed(seed, 1));
        save_omega(gen_omega, omega);
        out["m"] = omega.size();
        out["max_multiplicity"] = max_multiplicity(omega);
      }
    } else if (*complete) {
      out["command"] = "complete";
      SolverConfig cfg = comp_flags.config(seed);
      if (!image.empty()) {
        const Tensor3 img = load_ppm(image);
        const MultiRank r = MultiRank::parse(rank_text, img.dims().n3);
        const ImageResult res = image_complete(img, r, sr, cfg, seed);
        if (!out_path.empty()) save_ppm(out_path, res.recovered);
        out["dims"] = dims_json(img.dims());
        out["rank"] = rank_json(r);
        out["m"] = res.m;
        out["iterations"] = res.iterations;
        out["res"] = res.res;
        out["psnr"] = res.psnr;
        report_timing(res.init_seconds, res.solve_seconds, res.total_seconds);
      } else {
        Tensor3 truth = input.empty() ? gen_synthetic(comp_n, std::stoul(rank_text), seed) : load_t3b(input);
        const Dims d = truth.dims();
        const MultiRank r = MultiRank::parse(rank_text, d.n3);
        const SamplingSet omega = omega_path.empty() ? sample_omega(d, sample_count(sr, d.size()), derive_seed(seed, 1))
                                                     : load_omega(omega_path, d);
        if (!omega_out.empty()) save_omega(omega_out, omega);
        cfg.target_rank = r;
        const SolverReport rep = rcg_complete(truth, omega, cfg, &truth);
        if (!out_path.empty()) save_t3b(out_path, rep.recovered);
        if (!trace_path.empty()) {
          std::ofstream tr(trace_path);
          if (!tr) throw std::runtime_error("cannot open '" + trace_path + "' for writing");
          write_trace_jsonl(tr, rep);
        }
        out["dims"] = dims_json(d);
        out["rank"] = rank_json(r);
        out["m"] = omega.size();
        out["init"] = comp_flags.init;
          out["iterations"] = rep.iterations;
        out["restarts"] = rep.restarts.size();
        out["stop"] = to_string(rep.stop);
        out["converged"] = rep.converged;
        out["rank_drop"] = rep.rank_drop;
        out["final_rank"] = rank_json(rep.final_rank);
        out["objective"] = objective(rep.recovered, truth, omega);
        out["res"] = rep.res ? json(*rep.res) : json(nullptr);
        out["psnr"] = metrics_psnr(rep.recovered, truth);
        out["success"] = rep.res && *rep.res < cfg.success_res_tol;
        report_timing(rep.init_seconds, rep.solve_seconds, elapsed());
      }
    } else if (*phase) {
      spec.kind = ExperimentKind::PhaseDiagram;
      spec.solver = phase_flags.config(spec.base_seed);
      const auto trials = run_trials(spec);
      const auto cells = summarize_cells(trials);
      if (!out_path.empty()) {
        std::ofstream csv(out_path);
        if (!csv) throw std::runtime_error("cannot open '" + out_path + "' for writing");
        write_phase_csv(csv, cells);
      }
      if (!pgm_path.empty()) {
        std::ofstream pgm(pgm_path, std::ios::binary);
        if (!pgm) throw std::runtime_error("cannot open '" + pgm_path + "' for writing");
        write_phase_pgm(pgm, cells);
      }
      out["command"] = "phase";
      out["rank"] = spec.tubal_rank;
      out["trials"] = spec.trials;
      out["init"] = phase_flags.init;
      json jc = json::array();
      for (const auto& c : cells) {
        jc.push_back(json{{"n", c.n}, {"m", c.m}, {"successes", c.successes}, {"fraction", c.fraction}});
      }
      out["cells"] = jc;
      std::size_t failures = 0;
      for (const auto& t : trials) failures += t.failed;
      out["solver_failures"] = failures;
      report_timing(0.0, elapsed(), elapsed());
    } else if (*tsvd) {
      const Tensor3 a = load_t3b(input);
      SkinnyTcSvd f = tsvd_rank.empty() ? tcsvd(a, tsvd_tol)
                                        : truncated_tcsvd(a, MultiRank::parse(tsvd_rank, a.dims().n3), tsvd_tol);
      if (!out_path.empty()) save_t3b(out_path, f.reconstruct());
      out["command"] = "tsvd";
      out["dims"] = dims_json(a.dims());
      out["multi_rank"] = rank_json(f.multi_rank());
      out["tubal_rank"] = f.tubal_rank();
      out["sigma_max"] = f.sigma_max();
      out["sigma_min"] = f.sigma_min();
      json sv = json::array();
      for (const auto& s : f.slices()) sv.push_back(std::vector<double>(s.sigma.data(), s.sigma.data() + s.sigma.size()));
      out["singular_values"] = sv;
    } else if (*metrics) {
      const Tensor3 x = load_t3b(x_path);
      const Tensor3 truth = load_t3b(truth_path);
      out["command"] = "metrics";
      out["res"] = finite_or_null(metrics_res(x, truth));
      out["psnr"] = metrics_psnr(x, truth);
    }
    std::cout << out.dump(2) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "tcrcg: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
