#pragma once

#include <vector>

#include "spectral/atom_refinement.hpp"
#include "spectral/dictionary.hpp"
#include "spectral/sparse_coding.hpp"

namespace spectral {

enum class StopReason { tol, max_iter };

struct ConvergenceTrace {
  std::vector<double> outer_objectives;                    // post-encoding, per iteration
  std::vector<std::vector<double>> atom_stage_objectives;  // after each atom visit
  std::vector<int> pruned_counts;
  std::vector<std::vector<RefineRecord>> refine_records;
};

struct EstimationResult {
  int k_hat = 0;
  std::vector<double> frequencies;
  CMatrix gains;  // k_hat x T
  double residual_fro = 0.0;
  ConvergenceTrace trace;
  StopReason stop_reason = StopReason::max_iter;
};

struct RunParams {
  int grid_r = 0;   // 0 -> N
  int gamma = 10;
  double eps = 0.0; // per-column residual stopping bound for OMP
  int max_iter = 30;
  double tol = 1e-3;
  double lipschitz_floor = 1e-6;
  int max_support = 0;  // 0 -> M
  double sv_tol = 1e-10;
  int sv_max_iter = 200;
};

// Uniform r-point frequency grid with cached sensed atoms.
ParametricDictionary initialize(int n, int r, const SensingOperator& sensing);

// ||y - D X||_F^2 for the given code.
double objective(const CMatrix& y, const ParametricDictionary& dict, const SparseCode& code);

// Full alternation: OMP coding, sequential atom updates with pruning and
// duplicate merging, until the objective stalls or max_iter is reached.
EstimationResult run(const ObservationSet& obs, const RunParams& params);

}  // namespace spectral
