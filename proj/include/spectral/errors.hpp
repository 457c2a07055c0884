#pragma once

#include <stdexcept>
#include <string>

namespace spectral {

// Infeasible or inconsistent user-supplied configuration (e.g. a frequency
// separation request that cannot be satisfied).
class ConfigurationError : public std::runtime_error {
public:
  explicit ConfigurationError(const std::string& what) : std::runtime_error(what) {}
};

// The estimator produced no usable output (e.g. every atom was pruned).
class DegenerateResultError : public std::runtime_error {
public:
  explicit DegenerateResultError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spectral
