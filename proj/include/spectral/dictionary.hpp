#pragma once

#include <vector>

#include "spectral/signal_model.hpp"

namespace spectral {

// Frequency-parameterized dictionary with the sensed atom matrix cached.
struct ParametricDictionary {
  std::vector<double> frequencies;  // R values in [0, 2*pi)
  CMatrix atoms;                    // M x R, column j = sensed steering(frequencies[j])
  SensingOperator sensing;

  int size() const { return static_cast<int>(frequencies.size()); }

  void rebuild_atom(int j) { atoms.col(j) = sensed_steering(sensing, frequencies[j]); }

  static ParametricDictionary from_frequencies(std::vector<double> freqs,
                                               const SensingOperator& sensing);
};

}  // namespace spectral
