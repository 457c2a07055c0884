#pragma once

#include <string>
#include <vector>

#include "spectral/signal_model.hpp"

namespace spectral {

// Trace of the exact two-block iteration on H(x, y) = ||E - a(x) y^H||_F^2:
// cubic Newton step on the frequency, closed-form minimization over y.
struct BcdTrace {
  std::vector<double> thetas;        // x^k
  std::vector<CVector> gains;        // y^k
  std::vector<double> objectives;    // H(z^k)
  std::vector<double> moduli;        // L(y^k) used for step k -> k+1
  std::vector<double> grad_theta;    // grad_x H(z^k)
  std::vector<double> grad_gain_norm;  // ||grad_y H(z^k)|| (0 after each gain step)
  double e_norm = 0.0;                 // ||E||_F of the generating matrix

  int steps() const { return static_cast<int>(thetas.size()) - 1; }
};

BcdTrace reference_bcd(const CMatrix& e, double theta0, int max_iter, double floor);

struct LemmaReport {
  bool pass = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  int violating_index = -1;  // first violating step, -1 when none
  std::string detail;
};

// Sufficient-decrease check: per step H(z^k) - H(z^{k+1}) covers the cubic
// frequency term plus the squared gain move, and the telescoped sum is
// bounded by the total objective drop.
LemmaReport assert_lemma1(const BcdTrace& trace);

// Gradient-bound check at each iterate: |grad_x H(z^{k+1})| must fall below
// rho2 * ||z^{k+1} - z^k|| with rho2 = max{largest modulus observed,
// 2 * sigma_bound}.
LemmaReport assert_lemma2(const BcdTrace& trace, double sigma_bound);

std::string report_to_json(const LemmaReport& report);

}  // namespace spectral
