#include "spectral/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "spectral/errors.hpp"

namespace spectral {

double wrap_two_pi(double theta) {
  double w = std::fmod(theta, two_pi);
  if (w < 0.0) w += two_pi;
  if (w >= two_pi) w = 0.0;  // fmod can land exactly on 2*pi after the add
  return w;
}

SensingOperator SensingOperator::identity(int n) {
  if (n < 1) throw std::invalid_argument("SensingOperator: n must be >= 1");
  SensingOperator op;
  op.kind = Kind::identity;
  op.n_full = n;
  return op;
}

SensingOperator SensingOperator::subsampling(int n, std::vector<int> idx) {
  if (n < 1) throw std::invalid_argument("SensingOperator: n must be >= 1");
  if (idx.empty()) throw std::invalid_argument("SensingOperator: empty index set");
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= n)
      throw std::invalid_argument("SensingOperator: index out of range");
    if (i > 0 && idx[i] <= idx[i - 1])
      throw std::invalid_argument("SensingOperator: indices must be strictly increasing");
  }
  SensingOperator op;
  op.kind = Kind::row_subsampling;
  op.n_full = n;
  op.indices = std::move(idx);
  return op;
}

CVector steering_vector(double theta, int n) {
  if (n < 1) throw std::invalid_argument("steering_vector: n must be >= 1");
  CVector a(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int m = 0; m < n; ++m)
    a(m) = std::polar(scale, m * theta);
  return a;
}

CVector steering_derivative(double theta, int n, int order) {
  if (n < 1) throw std::invalid_argument("steering_derivative: n must be >= 1");
  if (order < 1 || order > 3)
    throw std::invalid_argument("steering_derivative: order must be in {1,2,3}");
  CVector a = steering_vector(theta, n);
  for (int m = 0; m < n; ++m) {
    Complex f(0.0, static_cast<double>(m));
    Complex p = f;
    for (int k = 1; k < order; ++k) p *= f;
    a(m) *= p;
  }
  return a;
}

CVector apply_sensing(const SensingOperator& op, const CVector& v) {
  if (static_cast<int>(v.size()) != op.n_full)
    throw std::invalid_argument("apply_sensing: dimension mismatch");
  if (op.kind == SensingOperator::Kind::identity) return v;
  CVector out(op.indices.size());
  for (std::size_t i = 0; i < op.indices.size(); ++i) out(i) = v(op.indices[i]);
  return out;
}

CVector sensed_steering(const SensingOperator& op, double theta) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(op.n_full));
  if (op.kind == SensingOperator::Kind::identity) return steering_vector(theta, op.n_full);
  CVector out(op.indices.size());
  for (std::size_t i = 0; i < op.indices.size(); ++i)
    out(i) = std::polar(scale, op.indices[i] * theta);
  return out;
}

CVector sensed_derivative(const SensingOperator& op, double theta, int order) {
  if (op.kind == SensingOperator::Kind::identity)
    return steering_derivative(theta, op.n_full, order);
  CVector a = sensed_steering(op, theta);
  for (std::size_t i = 0; i < op.indices.size(); ++i) {
    Complex f(0.0, static_cast<double>(op.indices[i]));
    Complex p = f;
    for (int k = 1; k < order; ++k) p *= f;
    a(i) *= p;
  }
  return a;
}

double psnr_to_sigma(double psnr_db) { return std::pow(10.0, -psnr_db / 20.0); }

CMatrix synthesize_signal(const std::vector<double>& frequencies, const CMatrix& gains, int n) {
  const int k = static_cast<int>(frequencies.size());
  if (gains.rows() != k)
    throw std::invalid_argument("synthesize_signal: gains rows must match frequency count");
  CMatrix out = CMatrix::Zero(n, gains.cols());
  for (int i = 0; i < k; ++i)
    out.noalias() += steering_vector(frequencies[i], n) * gains.row(i);
  return out;
}

namespace {

double min_wrap_gap(const std::vector<double>& freqs, double candidate) {
  double best = two_pi;
  for (double f : freqs) {
    double d = std::fabs(candidate - f);
    d = std::fmod(d, two_pi);
    d = std::min(d, two_pi - d);
    best = std::min(best, d);
  }
  return best;
}

}  // namespace

std::pair<Scenario, ObservationSet> generate_scenario(const ScenarioParams& params) {
  if (params.n_full < 1 || params.n_meas < 1 || params.snapshots < 1 || params.k_true < 1)
    throw std::invalid_argument("generate_scenario: dimensions must be positive");
  if (params.n_meas > params.n_full)
    throw std::invalid_argument("generate_scenario: M must not exceed N");
  if (params.k_true * params.min_separation >= two_pi)
    throw ConfigurationError("generate_scenario: infeasible separation request");

  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unif(0.0, two_pi);

  Scenario sc;
  sc.n_full = params.n_full;
  sc.n_meas = params.n_meas;
  sc.snapshots = params.snapshots;
  sc.k_true = params.k_true;
  sc.min_separation = params.min_separation;
  sc.seed = params.seed;
  sc.noise_sigma =
      params.noise_sigma >= 0.0 ? params.noise_sigma : psnr_to_sigma(params.psnr_db);

  // Frequencies: rejection sampling against the wrap-around separation.
  constexpr long kMaxAttempts = 100000;
  long attempts = 0;
  sc.frequencies.reserve(params.k_true);
  while (static_cast<int>(sc.frequencies.size()) < params.k_true) {
    if (++attempts > kMaxAttempts)
      throw ConfigurationError("generate_scenario: separation rejection sampling exhausted");
    double cand = unif(rng);
    if (sc.frequencies.empty() || min_wrap_gap(sc.frequencies, cand) >= params.min_separation)
      sc.frequencies.push_back(cand);
  }

  // Gains: one positive amplitude per source, independent phase per snapshot.
  std::normal_distribution<double> amp_dist(10.0, std::sqrt(3.0));
  sc.gains.resize(params.k_true, params.snapshots);
  for (int k = 0; k < params.k_true; ++k) {
    double amp = std::max(amp_dist(rng), 1e-3);
    for (int t = 0; t < params.snapshots; ++t)
      sc.gains(k, t) = std::polar(amp, unif(rng));
  }

  if (params.sensing_kind == SensingOperator::Kind::identity) {
    if (params.n_meas != params.n_full)
      throw std::invalid_argument("generate_scenario: identity sensing requires M == N");
    sc.sensing = SensingOperator::identity(params.n_full);
  } else {
    // M indices uniformly without replacement, sorted.
    std::vector<int> pool(params.n_full);
    for (int i = 0; i < params.n_full; ++i) pool[i] = i;
    for (int i = 0; i < params.n_meas; ++i) {
      std::uniform_int_distribution<int> pick(i, params.n_full - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    std::vector<int> idx(pool.begin(), pool.begin() + params.n_meas);
    std::sort(idx.begin(), idx.end());
    sc.sensing = SensingOperator::subsampling(params.n_full, std::move(idx));
  }

  ObservationSet obs;
  obs.sensing = sc.sensing;
  const int m = sc.sensing.rows();
  obs.y.resize(m, params.snapshots);
  CMatrix clean = synthesize_signal(sc.frequencies, sc.gains, params.n_full);
  for (int t = 0; t < params.snapshots; ++t)
    obs.y.col(t) = apply_sensing(sc.sensing, clean.col(t));

  if (sc.noise_sigma > 0.0) {
    std::normal_distribution<double> part(0.0, sc.noise_sigma / std::sqrt(2.0));
    for (int t = 0; t < params.snapshots; ++t)
      for (int i = 0; i < m; ++i)
        obs.y(i, t) += Complex(part(rng), part(rng));
  }

  obs.scenario = sc;
  return {std::move(sc), std::move(obs)};
}

}  // namespace spectral
