#pragma once

#include "specbound/bounds.hpp"
#include "specbound/cli/config.hpp"
#include "specbound/estimators.hpp"
#include "specbound/signals.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace specbound::cli {

NoiseKind noise_kind(const ExperimentConfig& config);
// Gaussian noise -> Gaussian; uniform noise -> sub-Gaussian with sigma (default sqrt(3)).
NoiseAssumption noise_assumption(const ExperimentConfig& config);

// Empty for model kind "none". State-space models get a certified decay pair
// when rho_target is set (example2 defaults to 0.5).
std::optional<SpectrumModel> build_model(const ExperimentConfig& config);

EstimatorSpec build_estimator(const ExperimentConfig& config);
// Overrides the block count: S for Welch, L for Bartlett.
EstimatorSpec build_estimator(const ExperimentConfig& config, Index blocks);

// Model-derived context with config overrides. Throws ConfigError naming the
// absent fields when the certificates cannot be evaluated.
BoundContext build_context(const ExperimentConfig& config, const std::optional<SpectrumModel>& model);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

SpectralEstimate run_estimate(const EstimatorSpec& spec, const DataMatrix& Y, std::span<const double> grid,
                              bool oracle);

// max over the grid of ||Phi^(s) - Phi(s)||_2.
double sup_error(const SpectralEstimate& estimate, const SpectrumModel& model);
// max over the grid of ||Phi^(s)||_2.
double sup_norm(const SpectralEstimate& estimate);

struct ErrorSample {
  std::vector<double> per_trial;  // sup-grid error of each realization
  double mean = 0.0;
  double max = 0.0;
};

// Trial i draws path i of the stream keyed by `seed`.
ErrorSample monte_carlo_sup_error(const EstimatorSpec& spec, const SpectrumModel& model, NoiseKind noise,
                                  std::span<const double> grid, std::size_t trials, std::uint64_t seed,
                                  bool oracle = false);

struct TotalBound {
  double variance = 0.0;  // worst-case concentration part
  double bias = 0.0;      // geometric-decay bias part
  double total = 0.0;
};

// Corollary parts 2 + 3 for a structured estimator under ctx.decay.
TotalBound total_worst_case_bound(const EstimatorSpec& spec, double delta, const BoundContext& ctx);

struct SweepRow {
  Index blocks = 0;
  Index samples = 0;
  double empirical_mean = 0.0;
  double empirical_max = 0.0;
  double variance_bound = 0.0;
  double bias_bound = 0.0;
  double certificate = 0.0;
  double exact_bias = 0.0;  // grid maximum of ||Phi - E Phi^||
};

struct ReproduceSettings {
  std::vector<Index> blocks{8, 16, 32, 64, 128};
  Index M = 32;
  Index K = 16;
  double delta = 0.05;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::vector<double> grid = half_band_grid();
  double rho_target = 0.5;
  bool oracle = false;
};

ReproduceSettings reproduce_settings(const ExperimentConfig& config);

// Scalar AR(1) with rho = 0.3, Welch-Hann sweep over S.
std::vector<SweepRow> reproduce_example1(NoiseKind noise, const ReproduceSettings& settings);
// Three-output state-space system, Gaussian, Welch-Hann sweep over S.
std::vector<SweepRow> reproduce_example2(const ReproduceSettings& settings);

struct ValidityResult {
  TotalBound bound;
  std::size_t trials = 0;
  std::size_t exceedances = 0;
  double frequency = 0.0;
  double max_error = 0.0;
};

// Counts realizations whose sup-grid error exceeds the total certificate.
ValidityResult certificate_validity(const EstimatorSpec& spec, const SpectrumModel& model, NoiseKind noise,
                                    NoiseAssumption assumption, double delta, std::span<const double> grid,
                                    std::size_t trials, std::uint64_t seed);

}  // namespace specbound::cli
