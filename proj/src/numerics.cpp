#include "spectral/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "spectral/errors.hpp"

namespace spectral {

namespace {

double cubic_model(double g, double h, double lip, double d) {
  return g * d + 0.5 * h * d * d + lip / 6.0 * std::fabs(d) * d * d;
}

}  // namespace

CubicStep cubic_step(double g, double h, double lip) {
  if (!(lip > 0.0)) throw std::invalid_argument("cubic_step: lip must be positive");
  if (!std::isfinite(g) || !std::isfinite(h) || !std::isfinite(lip))
    throw std::invalid_argument("cubic_step: non-finite input");

  double best = 0.0;
  double best_val = 0.0;
  auto consider = [&](double d) {
    double v = cubic_model(g, h, lip, d);
    if (v < best_val || (v == best_val && std::fabs(d) < std::fabs(best))) {
      best = d;
      best_val = v;
    }
  };

  // Stationary points: (lip/2) d^2 + h d + g = 0 for d >= 0 and
  // -(lip/2) d^2 + h d + g = 0 for d <= 0.
  {
    double disc = h * h - 2.0 * lip * g;
    if (disc >= 0.0) {
      double s = std::sqrt(disc);
      for (double d : {(-h + s) / lip, (-h - s) / lip})
        if (d >= 0.0) consider(d);
    }
  }
  {
    double disc = h * h + 2.0 * lip * g;
    if (disc >= 0.0) {
      double s = std::sqrt(disc);
      for (double d : {(h + s) / lip, (h - s) / lip})
        if (d <= 0.0) consider(d);
    }
  }

  CubicStep step;
  step.delta = best;
  step.model_decrease = std::max(-best_val, 0.0);
  return step;
}

LeadingVector leading_left_singular_vector(const CMatrix& e, double tol, int max_iter) {
  if (e.size() == 0 || e.norm() == 0.0)
    throw std::invalid_argument("leading_left_singular_vector: degenerate (zero) input");
  if (!(tol > 0.0)) throw std::invalid_argument("leading_left_singular_vector: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("leading_left_singular_vector: max_iter must be >= 1");

  const int m = static_cast<int>(e.rows());
  const int p = static_cast<int>(e.cols());

  LeadingVector out;
  if (p == 1) {
    out.u = e.col(0) / e.col(0).norm();
    return out;
  }

  // Deterministic start: the largest-norm column of e.
  int start = 0;
  double best_norm = -1.0;
  for (int j = 0; j < p; ++j) {
    double nj = e.col(j).norm();
    if (nj > best_norm) {
      best_norm = nj;
      start = j;
    }
  }

  auto finish = [&](const CVector& u, bool converged, int iters) {
    out.u = u;
    out.converged = converged;
    out.iterations = iters;
  };

  if (m <= p) {
    // Iterate on the M x M Gram operator e e^H.
    CMatrix gram = e * e.adjoint();
    CVector u = e.col(start) / best_norm;
    for (int it = 1; it <= max_iter; ++it) {
      CVector w = gram * u;
      double lambda = w.norm();
      if (lambda == 0.0) break;
      CVector next = w / lambda;
      double resid = (gram * next - next.dot(gram * next) * next).norm();
      u = next;
      if (resid <= tol * lambda) {
        finish(u, true, it);
        return out;
      }
    }
    finish(u, false, max_iter);
  } else {
    // Iterate on the smaller P x P Gram e^H e, then map back through e.
    CMatrix gram = e.adjoint() * e;
    CVector v = e.adjoint() * e.col(start);
    v /= v.norm();
    bool converged = false;
    int iters = max_iter;
    for (int it = 1; it <= max_iter; ++it) {
      CVector w = gram * v;
      double lambda = w.norm();
      if (lambda == 0.0) break;
      CVector next = w / lambda;
      double resid = (gram * next - next.dot(gram * next) * next).norm();
      v = next;
      if (resid <= tol * lambda) {
        converged = true;
        iters = it;
        break;
      }
    }
    CVector u = e * v;
    finish(u / u.norm(), converged, iters);
  }
  return out;
}

}  // namespace spectral
