#include "spectral/atom_refinement.hpp"

#include <cmath>
#include <stdexcept>

#include "spectral/numerics.hpp"

namespace spectral {

double hessian_lipschitz_coefficient(int n) {
  // 2 * sqrt(sum_{m<n} m^2 / n) = sqrt(2(n-1)(2n-1)/3): Cauchy-Schwarz bound
  // on the third derivative of the frequency objective.
  return std::sqrt(2.0 * (n - 1.0) * (2.0 * n - 1.0) / 3.0);
}

CMatrix residual_without_atom(const CMatrix& y, const ParametricDictionary& dict,
                              const SparseCode& code, int k) {
  if (k < 0 || k >= dict.size())
    throw std::invalid_argument("residual_without_atom: atom index out of range");
  CMatrix e = y;
  for (int t = 0; t < code.snapshots(); ++t) {
    const auto& s = code.supports[t];
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] != k) e.col(t) -= dict.atoms.col(s[i]) * code.coeffs[t](static_cast<int>(i));
  }
  return e;
}

double coarse_estimate(const CVector& u1, const SensingOperator& sensing, int gamma, int n) {
  if (gamma < 1) throw std::invalid_argument("coarse_estimate: gamma must be >= 1");
  const int grid = gamma * n;
  double best_val = -1.0;
  int best_k = 0;
  for (int k = 0; k < grid; ++k) {
    const double theta = k * two_pi / grid;
    double val = std::abs(sensed_steering(sensing, theta).dot(u1));
    if (val > best_val) {
      best_val = val;
      best_k = k;
    }
  }
  return best_k * two_pi / grid;
}

CVector gain_update(double theta, const CMatrix& restricted_residual,
                    const SensingOperator& sensing) {
  if (restricted_residual.cols() < 1)
    throw std::invalid_argument("gain_update: empty residual");
  CVector a = sensed_steering(sensing, theta);
  // Row a^H E, stored as a column of its entries.
  return (restricted_residual.adjoint() * a).conjugate() / a.squaredNorm();
}

double objective_S(double theta, const CVector& gains_row, const CMatrix& restricted_residual,
                   const SensingOperator& sensing) {
  CVector a = sensed_steering(sensing, theta);
  return (restricted_residual - a * gains_row.transpose()).squaredNorm();
}

std::pair<double, double> grad_hess_theta(double theta, const CVector& gains_row,
                                          const CMatrix& restricted_residual,
                                          const SensingOperator& sensing) {
  // S(theta) = ||E||^2 - 2 Re{r^T E^H a(theta)} + ||r||^2 ||a||^2 with the
  // last term theta-independent (constant-modulus atoms), so only the cross
  // term differentiates.
  CVector w = restricted_residual * gains_row.conjugate();  // E y, an M-vector
  CVector d1 = sensed_derivative(sensing, theta, 1);
  CVector d2 = sensed_derivative(sensing, theta, 2);
  double g = -2.0 * std::real(w.dot(d1));  // w.dot(x) = w^H x = r^T E^H x
  double h = -2.0 * std::real(w.dot(d2));
  return {g, h};
}

double lipschitz_modulus(const CVector& gains_row, const CMatrix& restricted_residual,
                         const SensingOperator& sensing, double floor) {
  if (!(floor > 0.0)) throw std::invalid_argument("lipschitz_modulus: floor must be positive");
  // ||D^2 E y|| with y = conj(gains_row); row m of D^2 scales by -m^2, with m
  // the full-aperture index of the measurement row.
  CVector v = restricted_residual * gains_row.conjugate();
  double sum = 0.0;
  const int m = static_cast<int>(v.size());
  for (int i = 0; i < m; ++i) {
    const double idx = sensing.kind == SensingOperator::Kind::identity
                           ? static_cast<double>(i)
                           : static_cast<double>(sensing.indices[i]);
    sum += idx * idx * idx * idx * std::norm(v(i));
  }
  const double l = hessian_lipschitz_coefficient(sensing.n_full) * std::sqrt(sum);
  return std::max(l, floor);
}

AtomContext refine_atom_step(const AtomContext& ctx, const SensingOperator& sensing,
                             const RefineConfig& config, RefineRecord* record) {
  const double s0 = objective_S(ctx.theta, ctx.gains_row, ctx.restricted_residual, sensing);
  auto [g, h] = grad_hess_theta(ctx.theta, ctx.gains_row, ctx.restricted_residual, sensing);
  double lip =
      lipschitz_modulus(ctx.gains_row, ctx.restricted_residual, sensing, config.lipschitz_floor);

  AtomContext out = ctx;
  RefineRecord rec;
  for (int attempt = 0; attempt <= config.max_doublings; ++attempt, lip *= 2.0) {
    CubicStep step = cubic_step(g, h, lip);
    if (step.delta == 0.0) {
      rec.accepted = true;
      rec.lip_used = lip;
      break;
    }
    const double theta_next = wrap_two_pi(ctx.theta + step.delta);
    const double s_next = objective_S(theta_next, ctx.gains_row, ctx.restricted_residual, sensing);
    // Accept only when the modulus delivered the cubic-regularization descent
    // guarantee; otherwise the modulus was too small, double it.
    if (s0 - s_next >= lip / 12.0 * std::pow(std::fabs(step.delta), 3) - 1e-9) {
      out.theta = theta_next;
      rec.accepted = true;
      rec.delta_theta = step.delta;
      rec.lip_used = lip;
      break;
    }
  }

  out.gains_row = gain_update(out.theta, out.restricted_residual, sensing);
  const double s_final = objective_S(out.theta, out.gains_row, out.restricted_residual, sensing);
  if (s_final > s0) {
    // Gain refit is the exact minimizer at out.theta, so this can only occur
    // through rounding at the original theta; keep the incoming context.
    out = ctx;
    rec = RefineRecord{};
  } else {
    rec.decrease = s0 - s_final;
  }
  if (record) *record = rec;
  return out;
}

AtomContext refine_atom(const AtomContext& ctx, const SensingOperator& sensing,
                        const RefineConfig& config, RefineRecord* record) {
  AtomContext cur = ctx;
  RefineRecord total;
  for (int step = 0; step < config.max_inner_steps; ++step) {
    RefineRecord rec;
    AtomContext next = refine_atom_step(cur, sensing, config, &rec);
    total.decrease += rec.decrease;
    if (rec.accepted) {
      total.accepted = true;
      total.lip_used = rec.lip_used;
    }
    cur = std::move(next);
    if (!rec.accepted || std::fabs(rec.delta_theta) < config.inner_tol) break;
  }
  // Net frequency motion on the torus.
  double d = cur.theta - ctx.theta;
  if (d > two_pi / 2.0) d -= two_pi;
  if (d < -two_pi / 2.0) d += two_pi;
  total.delta_theta = d;
  if (record) *record = total;
  return cur;
}

}  // namespace spectral
