#pragma once

#include <vector>

#include "spectral/nksvd.hpp"
#include "spectral/signal_model.hpp"

namespace spectral {

// Distance on the frequency torus, in [0, pi].
double wrap_distance(double a, double b);

// Mean over true frequencies of the squared wrap distance to the nearest
// estimate; +inf when the estimate list is empty.
double beta(const std::vector<double>& theta_true, const std::vector<double>& theta_hat);

// Reconstruction SNR in dB on the full noiseless aperture, snapshots stacked;
// capped at +300 dB.
double rsnr(const Scenario& scenario, const EstimationResult& result);

inline constexpr double rsnr_cap_db = 300.0;

bool success(const Scenario& scenario, const EstimationResult& result,
             double beta_threshold = 1e-3);

}  // namespace spectral
