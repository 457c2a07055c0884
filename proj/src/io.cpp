#include "spectral/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spectral/errors.hpp"

namespace spectral {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_observations(const std::string& path, const CMatrix& y) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_observations: cannot open " + path);
  out << y.rows() << " " << y.cols() << "\n";
  for (int i = 0; i < static_cast<int>(y.rows()); ++i) {
    for (int t = 0; t < static_cast<int>(y.cols()); ++t) {
      if (t > 0) out << " ";
      out << format_double(y(i, t).real()) << " " << format_double(y(i, t).imag());
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write_observations: write failed for " + path);
}

CMatrix read_observations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("read_observations: cannot open " + path);
  int m = 0, t = 0;
  if (!(in >> m >> t) || m < 1 || t < 1)
    throw ParseError("read_observations: malformed header in " + path);
  CMatrix y(m, t);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < t; ++j) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im))
        throw ParseError("read_observations: truncated data in " + path);
      y(i, j) = Complex(re, im);
    }
  return y;
}

std::string scenario_to_json(const Scenario& scenario) {
  nlohmann::json j;
  j["n_full"] = scenario.n_full;
  j["n_meas"] = scenario.n_meas;
  j["snapshots"] = scenario.snapshots;
  j["k_true"] = scenario.k_true;
  j["frequencies"] = scenario.frequencies;
  j["noise_sigma"] = scenario.noise_sigma;
  j["sensing_indices"] = scenario.sensing.indices;
  j["seed"] = scenario.seed;
  return j.dump(2);
}

void write_scenario_json(const std::string& path, const Scenario& scenario) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_scenario_json: cannot open " + path);
  out << scenario_to_json(scenario) << "\n";
}

SensingOperator ScenarioMeta::sensing() const {
  if (sensing_indices.empty()) return SensingOperator::identity(n_full);
  return SensingOperator::subsampling(n_full, sensing_indices);
}

ScenarioMeta read_scenario_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("read_scenario_json: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
    ScenarioMeta meta;
    meta.n_full = j.at("n_full").get<int>();
    meta.n_meas = j.at("n_meas").get<int>();
    meta.snapshots = j.at("snapshots").get<int>();
    meta.k_true = j.at("k_true").get<int>();
    meta.frequencies = j.at("frequencies").get<std::vector<double>>();
    meta.noise_sigma = j.at("noise_sigma").get<double>();
    meta.sensing_indices = j.at("sensing_indices").get<std::vector<int>>();
    meta.seed = j.at("seed").get<std::uint64_t>();
    return meta;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("read_scenario_json: ") + e.what());
  }
}

std::string result_to_json(const EstimationResult& result) {
  nlohmann::json j;
  j["k_hat"] = result.k_hat;
  j["frequencies"] = result.frequencies;
  nlohmann::json gains_re = nlohmann::json::array();
  nlohmann::json gains_im = nlohmann::json::array();
  for (int k = 0; k < static_cast<int>(result.gains.rows()); ++k) {
    nlohmann::json row_re = nlohmann::json::array();
    nlohmann::json row_im = nlohmann::json::array();
    for (int t = 0; t < static_cast<int>(result.gains.cols()); ++t) {
      row_re.push_back(result.gains(k, t).real());
      row_im.push_back(result.gains(k, t).imag());
    }
    gains_re.push_back(std::move(row_re));
    gains_im.push_back(std::move(row_im));
  }
  j["gains_re"] = std::move(gains_re);
  j["gains_im"] = std::move(gains_im);
  j["residual_fro"] = result.residual_fro;
  j["stop_reason"] = result.stop_reason == StopReason::tol ? "tol" : "max_iter";
  j["iterations"] = result.trace.outer_objectives.size();
  j["outer_objectives"] = result.trace.outer_objectives;
  j["pruned_counts"] = result.trace.pruned_counts;
  return j.dump(2);
}

}  // namespace spectral
