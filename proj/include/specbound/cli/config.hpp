#pragma once

#include "specbound/types.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace specbound::cli {

// Invalid configuration; carries the file and (when known) the offending line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::string path = {}, int line = 0);

  const std::string& path() const { return path_; }
  int line() const { return line_; }

 private:
  std::string path_;
  int line_;
};

struct ModelConfig {
  // geometric | white_noise | state_space | example2 | none (context values only)
  std::string kind = "geometric";
  double rho = 0.3;
  Index channels = 1;
  Matrix A, B, C, D;
  // Target rate for the state-space decay certificate.
  std::optional<double> rho_target;
};

struct EstimatorConfig {
  // biased_periodogram | unbiased_periodogram | blackman_tukey | bartlett | welch
  std::string kind = "welch";
  Index N = 0;
  Index M = 32;
  Index K = 16;
  Index S = 64;
  Index L = 1;
  std::string window = "hann";
};

// Overrides for the model-derived certificate inputs.
struct ContextConfig {
  std::optional<double> phi_inf;
  std::optional<double> r1;
  std::optional<double> gamma;
  std::optional<double> rho;
};

struct GridConfig {
  std::size_t points = 101;
  bool full_band = false;
  std::vector<double> values;  // explicit frequencies; overrides points/band
};

struct ConcentrationConfig {
  std::vector<Index> dims{4, 16};
  std::size_t trials = 100000;
  std::size_t points = 20;
};

struct ExperimentConfig {
  ModelConfig model;
  std::string noise = "gaussian";  // gaussian | uniform
  std::optional<double> sigma;     // sub-Gaussian parameter; sqrt(3) for uniform noise
  EstimatorConfig estimator;
  std::string sweep_variable = "S";
  std::vector<Index> sweep{8, 16, 32, 64, 128};
  GridConfig grid;
  std::size_t trials = 100;
  double delta = 0.05;
  std::uint64_t seed = 0;
  std::string output = "out";
  ContextConfig context;
  double epsilon = 1.0;
  std::string estimate_file;  // estimate CSV for the data-driven bound
  std::string data_file;      // sample CSV (t, y1, ..., yn) for estimate
  ConcentrationConfig concentration;
};

ExperimentConfig parse_config(const std::string& text, const std::string& path = "<config>");
ExperimentConfig load_config(const std::string& path);

// Checks cross-field invariants; throws ConfigError.
void validate(const ExperimentConfig& config, const std::string& path = "<config>");

// Canonical JSON of the effective configuration (sorted keys, defaults filled).
std::string canonical_json(const ExperimentConfig& config);

// FNV-1a of canonical_json with the seed and output directory excluded.
std::uint64_t config_hash(const ExperimentConfig& config);

std::vector<double> frequency_grid(const ExperimentConfig& config);

}  // namespace specbound::cli
