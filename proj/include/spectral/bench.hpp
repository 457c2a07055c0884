#pragma once

#include <string>
#include <vector>

#include "spectral/nksvd.hpp"
#include "spectral/signal_model.hpp"

namespace spectral {

// Monte Carlo sweep description. One variable ranges over `values`; trial t
// of every sweep point uses seed base_seed + t.
struct ExperimentConfig {
  // scenario block
  int n = 64;
  int m = 32;
  int t = 1;
  int k = 3;
  double psnr_db = 10.0;
  double mu = 2.0;  // min separation = mu * 2*pi/N
  std::string sensing = "row-subsampling";  // or "identity"

  // algorithm block
  int grid_r = 0;
  int gamma = 10;
  std::string eps_rule = "sqrtM_sigma";  // or "explicit"
  double eps = 0.0;
  int max_iter = 30;
  double tol = 1e-3;
  double lipschitz_floor = 1e-6;

  // sweep block
  std::string sweep_variable = "psnr_db";  // one of M, K, psnr_db, mu
  std::vector<double> sweep_values = {10.0};

  int trials = 50;
  std::uint64_t base_seed = 0;
  std::vector<std::string> baselines = {"omp_grid"};
  std::string output_path;

  void validate() const;
};

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig config_from_json_file(const std::string& path);

// On-grid OMP estimator over a fixed 2N-point DFT grid with residual-bound
// stopping; frequencies are the selected grid points, no refinement.
EstimationResult baseline_omp_grid(const ObservationSet& obs, double eps, int max_support = 0);

// Runs the sweep and returns the full CSV text (per-trial rows plus
// aggregate rows). Deterministic for a fixed base_seed; `threads` <= 0 uses
// SPECTRAL_DL_THREADS or the hardware count. zero_timings replaces the
// runtime column with 0 for byte-reproducible output.
std::string run_bench(const ExperimentConfig& config, int threads = 0,
                      bool zero_timings = false);

extern const char* const bench_csv_header;

}  // namespace spectral
