#pragma once

#include "spectral/signal_model.hpp"

namespace spectral {

struct CubicStep {
  double delta = 0.0;           // global minimizer of the cubic model
  double model_decrease = 0.0;  // -xi(delta), >= lip/12 * |delta|^3
};

// Global minimizer of xi(d) = g*d + h/2*d^2 + lip/6*|d|^3 by closed-form
// enumeration of the two sign branches. Ties resolve to the smaller |d|.
CubicStep cubic_step(double g, double h, double lip);

struct LeadingVector {
  CVector u;             // unit norm
  bool converged = true;
  int iterations = 0;
};

// Dominant left singular vector of e by power iteration on the smaller Gram
// operator. For a single column returns e/||e|| exactly.
LeadingVector leading_left_singular_vector(const CMatrix& e, double tol = 1e-10,
                                           int max_iter = 200);

}  // namespace spectral
