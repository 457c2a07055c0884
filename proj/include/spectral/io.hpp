#pragma once

#include <string>

#include "spectral/nksvd.hpp"
#include "spectral/signal_model.hpp"

namespace spectral {

// Text observation format: line 1 is "M T", then M lines of 2T floats
// (re, im interleaved per snapshot).
void write_observations(const std::string& path, const CMatrix& y);
CMatrix read_observations(const std::string& path);

std::string scenario_to_json(const Scenario& scenario);
void write_scenario_json(const std::string& path, const Scenario& scenario);

// Metadata needed to interpret an observation file.
struct ScenarioMeta {
  int n_full = 0;
  int n_meas = 0;
  int snapshots = 0;
  int k_true = 0;
  std::vector<double> frequencies;
  double noise_sigma = 0.0;
  std::vector<int> sensing_indices;  // empty for identity sensing
  std::uint64_t seed = 0;

  SensingOperator sensing() const;
};

ScenarioMeta read_scenario_json(const std::string& path);

std::string result_to_json(const EstimationResult& result);

}  // namespace spectral
