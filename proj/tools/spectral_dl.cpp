// Command-line front end: scenario synthesis, single estimation runs, and
// Monte Carlo benchmark sweeps. Exit codes: 0 ok, 2 input error,
// 3 degenerate result, 4 internal error.
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spectral/bench.hpp"
#include "spectral/errors.hpp"
#include "spectral/io.hpp"
#include "spectral/metrics.hpp"
#include "spectral/nksvd.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_input_error = 2;
constexpr int exit_degenerate = 3;
constexpr int exit_internal = 4;

struct SynthOptions {
  spectral::ScenarioParams params;
  std::string sensing = "identity";
  double psnr = 10.0;
  double mu = -1.0;  // min separation = mu * 2*pi/N when >= 0
  std::string out = "scenario";
};

int cmd_synth(const SynthOptions& opt) {
  spectral::ScenarioParams p = opt.params;
  p.psnr_db = opt.psnr;
  if (opt.mu >= 0.0) p.min_separation = opt.mu * spectral::two_pi / p.n_full;
  p.sensing_kind = opt.sensing == "identity" ? spectral::SensingOperator::Kind::identity
                                             : spectral::SensingOperator::Kind::row_subsampling;
  if (p.sensing_kind == spectral::SensingOperator::Kind::identity) p.n_meas = p.n_full;

  auto [scenario, obs] = spectral::generate_scenario(p);
  const std::string obs_path = opt.out + ".obs.txt";
  const std::string meta_path = opt.out + ".scenario.json";
  spectral::write_observations(obs_path, obs.y);
  spectral::write_scenario_json(meta_path, scenario);
  std::cout << obs_path << "\n" << meta_path << "\n";
  return exit_ok;
}

struct EstimateOptions {
  std::string obs_path;
  std::string scenario_path;
  std::string out;
  double eps = -1.0;
  double sigma = -1.0;
  spectral::RunParams params;
};

int cmd_estimate(const EstimateOptions& opt) {
  spectral::CMatrix y = spectral::read_observations(opt.obs_path);
  spectral::ObservationSet obs;
  obs.y = y;
  if (!opt.scenario_path.empty()) {
    spectral::ScenarioMeta meta = spectral::read_scenario_json(opt.scenario_path);
    obs.sensing = meta.sensing();
    if (obs.sensing.rows() != static_cast<int>(y.rows()))
      throw spectral::ParseError("estimate: observation rows do not match scenario sensing");
  } else {
    obs.sensing = spectral::SensingOperator::identity(static_cast<int>(y.rows()));
  }

  spectral::RunParams params = opt.params;
  if (opt.eps > 0.0)
    params.eps = opt.eps;
  else if (opt.sigma >= 0.0)
    params.eps = std::sqrt(static_cast<double>(y.rows())) * opt.sigma;
  if (!(params.eps > 0.0))
    throw spectral::ConfigurationError("estimate: supply --eps or a positive --sigma");

  spectral::EstimationResult result = spectral::run(obs, params);
  const std::string json = spectral::result_to_json(result);
  if (opt.out.empty()) {
    std::cout << json << "\n";
  } else {
    std::ofstream f(opt.out);
    if (!f) throw std::runtime_error("estimate: cannot open " + opt.out);
    f << json << "\n";
  }
  return exit_ok;
}

struct BenchOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out;
  std::vector<std::string> estimators;
  bool zero_timings = false;
  // per-parameter overrides, negative means "keep config value"
  std::optional<int> n, m, t, k, grid_r, gamma, max_iter;
  std::optional<double> psnr, mu, tol;
  std::optional<std::string> sweep_variable;
  std::optional<std::vector<double>> sweep_values;
};

int cmd_bench(const BenchOptions& opt) {
  spectral::ExperimentConfig cfg;
  if (!opt.config_path.empty()) cfg = spectral::config_from_json_file(opt.config_path);
  if (opt.seed) cfg.base_seed = *opt.seed;
  if (opt.trials) cfg.trials = *opt.trials;
  if (!opt.out.empty()) cfg.output_path = opt.out;
  if (!opt.estimators.empty()) {
    cfg.baselines.clear();
    for (const auto& e : opt.estimators)
      if (e != "cubic_nksvd") cfg.baselines.push_back(e);
  }
  if (opt.n) cfg.n = *opt.n;
  if (opt.m) cfg.m = *opt.m;
  if (opt.t) cfg.t = *opt.t;
  if (opt.k) cfg.k = *opt.k;
  if (opt.psnr) cfg.psnr_db = *opt.psnr;
  if (opt.mu) cfg.mu = *opt.mu;
  if (opt.grid_r) cfg.grid_r = *opt.grid_r;
  if (opt.gamma) cfg.gamma = *opt.gamma;
  if (opt.max_iter) cfg.max_iter = *opt.max_iter;
  if (opt.tol) cfg.tol = *opt.tol;
  if (opt.sweep_variable) cfg.sweep_variable = *opt.sweep_variable;
  if (opt.sweep_values) cfg.sweep_values = *opt.sweep_values;

  const std::string csv = spectral::run_bench(cfg, 0, opt.zero_timings);
  if (cfg.output_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(cfg.output_path);
    if (!f) throw std::runtime_error("bench: cannot open " + cfg.output_path);
    f << csv;
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parametric dictionary learning for line spectral estimation"};
  app.require_subcommand(1);

  SynthOptions synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic scenario and observation file");
  s->add_option("--n", synth.params.n_full, "Full aperture N");
  s->add_option("--m", synth.params.n_meas, "Measurements M");
  s->add_option("--t", synth.params.snapshots, "Snapshots T");
  s->add_option("--k", synth.params.k_true, "Number of sources K");
  s->add_option("--psnr", synth.psnr, "PSNR in dB");
  s->add_option("--mu", synth.mu, "Frequency spacing coefficient (min sep = mu*2pi/N)");
  s->add_option("--sensing", synth.sensing, "identity or row-subsampling")
      ->check(CLI::IsMember({"identity", "row-subsampling"}));
  s->add_option("--seed", synth.params.seed, "RNG seed");
  s->add_option("--out", synth.out, "Output path prefix");

  EstimateOptions est;
  auto* e = app.add_subcommand("estimate", "Run the estimator on an observation file");
  e->add_option("observations", est.obs_path, "Observation file")->required();
  e->add_option("--scenario", est.scenario_path, "Scenario JSON (sensing metadata)");
  e->add_option("--eps", est.eps, "Explicit OMP residual bound");
  e->add_option("--sigma", est.sigma, "Noise std; eps = sqrt(M)*sigma");
  e->add_option("--gamma", est.params.gamma, "Coarse grid oversampling factor");
  e->add_option("--grid-r", est.params.grid_r, "Initial grid resolution R (0 = N)");
  e->add_option("--max-iter", est.params.max_iter, "Maximum outer iterations");
  e->add_option("--tol", est.params.tol, "Stopping tolerance on the objective");
  e->add_option("--out", est.out, "Result JSON path (default stdout)");

  BenchOptions bench;
  auto* b = app.add_subcommand("bench", "Monte Carlo benchmark sweep (CSV output)");
  b->add_option("--config", bench.config_path, "Experiment config JSON");
  b->add_option("--seed", bench.seed, "Base seed (trial t uses base_seed + t)");
  b->add_option("--trials", bench.trials, "Trials per sweep value");
  b->add_option("--out", bench.out, "CSV output path (default stdout)");
  b->add_option("--estimators", bench.estimators, "Estimator list")->delimiter(',');
  b->add_option("--n", bench.n, "Full aperture N");
  b->add_option("--m", bench.m, "Measurements M");
  b->add_option("--t", bench.t, "Snapshots T");
  b->add_option("--k", bench.k, "Number of sources K");
  b->add_option("--psnr", bench.psnr, "PSNR in dB");
  b->add_option("--mu", bench.mu, "Frequency spacing coefficient");
  b->add_option("--gamma", bench.gamma, "Coarse grid oversampling factor");
  b->add_option("--grid-r", bench.grid_r, "Initial grid resolution R (0 = N)");
  b->add_option("--max-iter", bench.max_iter, "Maximum outer iterations");
  b->add_option("--tol", bench.tol, "Stopping tolerance");
  b->add_option("--sweep-variable", bench.sweep_variable, "Sweep variable (M,K,psnr_db,mu)");
  b->add_option("--sweep-values", bench.sweep_values, "Sweep value list")->delimiter(',');
  b->add_flag("--zero-timings", bench.zero_timings,
              "Write 0 in the runtime column for byte-reproducible CSVs");

  try {
    app.parse(argc, argv);
    if (s->parsed()) return cmd_synth(synth);
    if (e->parsed()) return cmd_estimate(est);
    if (b->parsed()) return cmd_bench(bench);
    return exit_internal;
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? exit_ok : exit_input_error;
  } catch (const spectral::ParseError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return exit_input_error;
  } catch (const spectral::ConfigurationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return exit_input_error;
  } catch (const spectral::DegenerateResultError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return exit_degenerate;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return exit_input_error;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return exit_internal;
  }
}
