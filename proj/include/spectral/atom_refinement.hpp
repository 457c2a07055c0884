#pragma once

#include <utility>
#include <vector>

#include "spectral/dictionary.hpp"
#include "spectral/sparse_coding.hpp"

namespace spectral {

// State of one atom while its frequency and gains are being updated.
struct AtomContext {
  int atom_index = 0;
  double theta = 0.0;
  std::vector<int> support;      // snapshots using the atom (nonempty)
  CMatrix restricted_residual;   // M x |support|, columns ordered with support
  CVector gains_row;             // length |support|, the row of X restricted to support
};

struct RefineConfig {
  double lipschitz_floor = 1e-6;
  int max_doublings = 20;
  int max_inner_steps = 60;   // cap on (theta step, gain update) rounds per call
  double inner_tol = 1e-12;   // stop once |delta theta| falls below this
};

struct RefineRecord {
  double delta_theta = 0.0;
  double lip_used = 0.0;
  double decrease = 0.0;
  bool accepted = false;
};

// sqrt(2(N-1)(2N-1)/3): scale factor of the closed-form Hessian Lipschitz
// modulus for an aperture of n elements.
double hessian_lipschitz_coefficient(int n);

// Residual of y with atom k's contribution left in, M x T.
CMatrix residual_without_atom(const CMatrix& y, const ParametricDictionary& dict,
                              const SparseCode& code, int k);

// Argmax of |sensed_steering(theta)^H u1| over the gamma-oversampled DFT grid;
// ties keep the smallest grid index.
double coarse_estimate(const CVector& u1, const SensingOperator& sensing, int gamma, int n);

// Exact least-squares gain row for a fixed frequency: a^H E / ||a||^2.
CVector gain_update(double theta, const CMatrix& restricted_residual,
                    const SensingOperator& sensing);

// ||E - a(theta) * gains_row^T||_F^2.
double objective_S(double theta, const CVector& gains_row, const CMatrix& restricted_residual,
                   const SensingOperator& sensing);

// First and second theta-derivatives of objective_S at fixed gains.
std::pair<double, double> grad_hess_theta(double theta, const CVector& gains_row,
                                          const CMatrix& restricted_residual,
                                          const SensingOperator& sensing);

// Closed-form Hessian Lipschitz modulus, clamped at floor.
double lipschitz_modulus(const CVector& gains_row, const CMatrix& restricted_residual,
                         const SensingOperator& sensing, double floor);

// One safeguarded cubic Newton step on theta followed by the exact gain
// update; the objective never increases.
AtomContext refine_atom_step(const AtomContext& ctx, const SensingOperator& sensing,
                             const RefineConfig& config, RefineRecord* record = nullptr);

// Alternates cubic Newton steps on theta with exact gain updates until the
// step size falls below config.inner_tol or max_inner_steps is reached;
// monotone in the objective.
AtomContext refine_atom(const AtomContext& ctx, const SensingOperator& sensing,
                        const RefineConfig& config, RefineRecord* record = nullptr);

}  // namespace spectral
