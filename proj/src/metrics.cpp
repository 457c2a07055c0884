#include "spectral/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spectral {

double wrap_distance(double a, double b) {
  double d = std::fmod(std::fabs(a - b), two_pi);
  return std::min(d, two_pi - d);
}

double beta(const std::vector<double>& theta_true, const std::vector<double>& theta_hat) {
  if (theta_true.empty()) throw std::invalid_argument("beta: empty ground-truth list");
  if (theta_hat.empty()) return std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (double t : theta_true) {
    double nearest = std::numeric_limits<double>::infinity();
    for (double h : theta_hat) nearest = std::min(nearest, wrap_distance(t, h));
    sum += nearest * nearest;
  }
  return sum / static_cast<double>(theta_true.size());
}

double rsnr(const Scenario& scenario, const EstimationResult& result) {
  CMatrix truth = synthesize_signal(scenario.frequencies, scenario.gains, scenario.n_full);
  const double signal = truth.norm();
  if (signal == 0.0) throw std::invalid_argument("rsnr: zero true signal");
  CMatrix estimate = result.k_hat > 0
                         ? synthesize_signal(result.frequencies, result.gains, scenario.n_full)
                         : CMatrix::Zero(truth.rows(), truth.cols());
  const double err = (truth - estimate).norm();
  if (err == 0.0) return rsnr_cap_db;
  return std::min(20.0 * std::log10(signal / err), rsnr_cap_db);
}

bool success(const Scenario& scenario, const EstimationResult& result, double beta_threshold) {
  if (result.k_hat != scenario.k_true) return false;
  return beta(scenario.frequencies, result.frequencies) < beta_threshold;
}

}  // namespace spectral
