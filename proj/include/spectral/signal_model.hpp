#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace spectral {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Reduce an angle to [0, 2*pi).
double wrap_two_pi(double theta);

// Linear measurement operator: either the identity on C^N or a selection of
// M rows of the full aperture.
struct SensingOperator {
  enum class Kind { identity, row_subsampling };

  Kind kind = Kind::identity;
  int n_full = 0;
  std::vector<int> indices;  // sorted, distinct, in [0, n_full); empty for identity

  int rows() const {
    return kind == Kind::identity ? n_full : static_cast<int>(indices.size());
  }

  static SensingOperator identity(int n);
  static SensingOperator subsampling(int n, std::vector<int> idx);
};

// Unit-norm Fourier atom: entry m is exp(j*m*theta)/sqrt(n).
CVector steering_vector(double theta, int n);

// Elementwise theta-derivative of the steering vector, order in {1,2,3}:
// entry m is (j*m)^order * exp(j*m*theta)/sqrt(n).
CVector steering_derivative(double theta, int n, int order);

CVector apply_sensing(const SensingOperator& op, const CVector& v);

// apply_sensing(steering_vector(theta, op.n_full)) without the temporary.
CVector sensed_steering(const SensingOperator& op, double theta);
CVector sensed_derivative(const SensingOperator& op, double theta, int order);

// PSNR = 10*log10(1/sigma^2)  =>  sigma = 10^(-psnr/20).
double psnr_to_sigma(double psnr_db);

struct Scenario {
  int n_full = 0;
  int n_meas = 0;
  int snapshots = 1;
  int k_true = 1;
  std::vector<double> frequencies;  // K values in [0, 2*pi)
  CMatrix gains;                    // K x T
  double noise_sigma = 0.0;         // per-entry complex noise std
  SensingOperator sensing;
  double min_separation = 0.0;
  std::uint64_t seed = 0;
};

struct ObservationSet {
  CMatrix y;  // M x T
  SensingOperator sensing;
  std::optional<Scenario> scenario;  // absent for externally loaded data
};

struct ScenarioParams {
  int n_full = 64;
  int n_meas = 64;
  int snapshots = 1;
  int k_true = 1;
  double psnr_db = 10.0;
  double noise_sigma = -1.0;  // if >= 0, overrides psnr_db
  double min_separation = 0.0;
  SensingOperator::Kind sensing_kind = SensingOperator::Kind::identity;
  std::uint64_t seed = 0;
};

// Draws frequencies by rejection sampling (pairwise wrap-around separation
// >= min_separation), gains with uniform phase per snapshot and positive
// amplitudes ~ N(10, 3) shared across snapshots, and circular complex
// Gaussian noise of per-entry variance sigma^2. Deterministic per seed.
std::pair<Scenario, ObservationSet> generate_scenario(const ScenarioParams& params);

// Noiseless full-aperture signal A(theta) * gains for a frequency/gain set.
CMatrix synthesize_signal(const std::vector<double>& frequencies, const CMatrix& gains, int n);

}  // namespace spectral
