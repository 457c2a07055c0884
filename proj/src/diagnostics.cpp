#include "spectral/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "spectral/atom_refinement.hpp"
#include "spectral/numerics.hpp"

namespace spectral {

namespace {

// The reference scheme runs on the full aperture (identity sensing). The
// gains_row convention of atom_refinement is r = conj(y).
double grad_theta_at(const CMatrix& e, double theta, const CVector& y,
                     const SensingOperator& op) {
  return grad_hess_theta(theta, y.conjugate(), e, op).first;
}

}  // namespace

BcdTrace reference_bcd(const CMatrix& e, double theta0, int max_iter, double floor) {
  if (e.size() == 0 || e.norm() == 0.0)
    throw std::invalid_argument("reference_bcd: zero input matrix");
  const int n = static_cast<int>(e.rows());
  SensingOperator op = SensingOperator::identity(n);

  BcdTrace trace;
  trace.e_norm = e.norm();
  double theta = theta0;
  CVector y = e.adjoint() * steering_vector(theta, n);

  auto record = [&](double lip_placeholder) {
    trace.thetas.push_back(theta);
    trace.gains.push_back(y);
    trace.objectives.push_back((e - steering_vector(theta, n) * y.adjoint()).squaredNorm());
    trace.grad_theta.push_back(grad_theta_at(e, theta, y, op));
    trace.grad_gain_norm.push_back(2.0 * (y - e.adjoint() * steering_vector(theta, n)).norm());
    (void)lip_placeholder;
  };
  record(0.0);

  for (int k = 0; k < max_iter; ++k) {
    auto [g, h] = grad_hess_theta(theta, y.conjugate(), e, op);
    const double lip = lipschitz_modulus(y.conjugate(), e, op, floor);
    trace.moduli.push_back(lip);
    theta += cubic_step(g, h, lip).delta;  // stays on the real line by design
    y = e.adjoint() * steering_vector(theta, n);
    record(lip);
  }
  return trace;
}

LemmaReport assert_lemma1(const BcdTrace& trace) {
  LemmaReport report;
  if (trace.steps() < 1) {
    report.detail = "empty trace";
    return report;
  }
  const double lambda_minus =
      *std::min_element(trace.moduli.begin(), trace.moduli.end());
  double telescoped = 0.0;
  for (int k = 0; k < trace.steps(); ++k) {
    const double dx = std::fabs(trace.thetas[k + 1] - trace.thetas[k]);
    const double dy2 = (trace.gains[k + 1] - trace.gains[k]).squaredNorm();
    const double rhs = lambda_minus / 12.0 * dx * dx * dx + dy2;
    const double margin = (trace.objectives[k] - trace.objectives[k + 1]) - rhs;
    telescoped += rhs;
    if (margin < report.worst_margin) report.worst_margin = margin;
    if (margin < -1e-9 && report.violating_index < 0) {
      report.pass = false;
      report.violating_index = k;
    }
  }
  const double total = trace.objectives.front() - trace.objectives.back();
  if (telescoped > total + 1e-6) {
    report.pass = false;
    report.detail = "telescoped sum exceeds total objective drop";
  }
  return report;
}

LemmaReport assert_lemma2(const BcdTrace& trace, double sigma_bound) {
  LemmaReport report;
  for (std::size_t k = 0; k < trace.thetas.size(); ++k) {
    const double z = std::sqrt(trace.thetas[k] * trace.thetas[k] +
                               trace.gains[k].squaredNorm());
    if (z > sigma_bound) {
      report.pass = false;
      report.violating_index = static_cast<int>(k);
      report.detail = "iterate norm exceeds the assumed bound";
      return report;
    }
  }
  if (trace.steps() < 1) return report;
  const double lambda_plus =
      *std::max_element(trace.moduli.begin(), trace.moduli.end());
  const double rho2 = std::max(lambda_plus, 2.0 * sigma_bound);
  for (int k = 0; k < trace.steps(); ++k) {
    const double dx = std::fabs(trace.thetas[k + 1] - trace.thetas[k]);
    const double dy = (trace.gains[k + 1] - trace.gains[k]).norm();
    const double bound = rho2 * std::sqrt(dx * dx + dy * dy) + 1e-6;
    const double margin = bound - std::fabs(trace.grad_theta[k + 1]);
    if (margin < report.worst_margin) report.worst_margin = margin;
    if (margin < 0.0 && report.violating_index < 0) {
      report.pass = false;
      report.violating_index = k;
      report.detail = "frequency gradient bound violated";
    }
    if (trace.grad_gain_norm[k + 1] > 1e-10 * trace.e_norm && report.pass) {
      report.pass = false;
      report.violating_index = k;
      report.detail = "gain gradient not annihilated by the exact update";
    }
  }
  return report;
}

std::string report_to_json(const LemmaReport& report) {
  nlohmann::json j;
  j["pass"] = report.pass;
  j["worst_margin"] = report.worst_margin;
  j["violating_index"] = report.violating_index;
  j["detail"] = report.detail;
  return j.dump();
}

}  // namespace spectral
