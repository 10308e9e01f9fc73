#include "specbound/cli/experiments.hpp"

#include "specbound/rng.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>

namespace specbound::cli {

NoiseKind noise_kind(const ExperimentConfig& config) { return noise_kind_from_string(config.noise); }

NoiseAssumption noise_assumption(const ExperimentConfig& config) {
  if (config.noise == "gaussian") return NoiseAssumption::gaussian();
  return NoiseAssumption::sub_gaussian(config.sigma.value_or(std::sqrt(3.0)));
}

std::optional<SpectrumModel> build_model(const ExperimentConfig& config) {
  const ModelConfig& m = config.model;
  try {
    if (m.kind == "none") return std::nullopt;
    if (m.kind == "geometric") return SpectrumModel::geometric(m.rho);
    if (m.kind == "white_noise") return SpectrumModel::white_noise(m.channels);
    SpectrumModel model = m.kind == "example2" ? SpectrumModel::example2()
                                               : SpectrumModel::state_space(m.A, m.B, m.C, m.D);
    std::optional<double> target = m.rho_target;
    if (!target && m.kind == "example2") target = 0.5;
    if (target) {
      const DecayCertificate cert = certify_decay(model, *target);
      model = model.with_decay({cert.gamma, cert.rho});
    }
    return model;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

EstimatorSpec build_estimator(const ExperimentConfig& config) {
  const EstimatorConfig& e = config.estimator;
  return build_estimator(config, e.kind == "bartlett" ? e.L : e.S);
}

EstimatorSpec build_estimator(const ExperimentConfig& config, Index blocks) {
  const EstimatorConfig& e = config.estimator;
  try {
    if (e.kind == "biased_periodogram") return EstimatorSpec::biased_periodogram(e.N);
    if (e.kind == "unbiased_periodogram") return EstimatorSpec::unbiased_periodogram(e.N);
    const WindowKind window = window_kind_from_string(e.window);
    if (e.kind == "blackman_tukey") return EstimatorSpec::blackman_tukey(e.N, e.M, window);
    if (e.kind == "bartlett") return EstimatorSpec::bartlett(e.M, blocks);
    return EstimatorSpec::welch(e.M, e.K, blocks, window);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("estimator: ") + err.what());
  }
}

BoundContext build_context(const ExperimentConfig& config, const std::optional<SpectrumModel>& model_in) {
  const NoiseAssumption assumption = noise_assumption(config);
  const ContextConfig& over = config.context;
  std::vector<std::string> missing;
  if (over.gamma.has_value() != over.rho.has_value()) missing.push_back(over.gamma ? "context.rho" : "context.gamma");

  std::optional<DecayPair> decay;
  if (over.gamma && over.rho) decay = DecayPair{*over.gamma, *over.rho};

  BoundContext ctx;
  try {
    if (model_in) {
      SpectrumModel model = *model_in;
      if (decay && !model.decay()) model = model.with_decay(*decay);
      if (model.as_state_space() != nullptr && !model.decay()) {
        if (!over.r1) missing.push_back("context.r1");
        missing.push_back("model.rho_target (or context.gamma and context.rho)");
      } else if (missing.empty()) {
        ctx = make_context(model, assumption);
      }
    } else {
      if (!over.phi_inf) missing.push_back("context.phi_inf");
      if (!over.r1) missing.push_back("context.r1");
    }
    if (!missing.empty()) {
      std::string list;
      for (const auto& f : missing) list += (list.empty() ? "" : ", ") + f;
      throw ConfigError("missing context fields: " + list);
    }
    if (!model_in) {
      ctx = make_context(assumption, *over.phi_inf, *over.r1, config.model.channels, decay);
    } else {
      if (over.phi_inf) ctx.phi_inf = *over.phi_inf;
      if (over.r1) {
        ctx.r1 = *over.r1;
        ctx.r1_source = R1Source::Supplied;
      }
      if (decay) ctx.decay = decay;
      // Re-validate the overridden values.
      make_context(assumption, ctx.phi_inf, ctx.r1, ctx.channels, ctx.decay);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("context: ") + e.what());
  }
  return ctx;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return CounterRng::mix(seed ^ CounterRng::mix(tag + 0x632be59bd9b4e019ULL));
}

SpectralEstimate run_estimate(const EstimatorSpec& spec, const DataMatrix& Y, std::span<const double> grid,
                              bool oracle) {
  if (oracle) return evaluate_generic(Y, build_matrix(spec, Y.samples()), grid);
  return evaluate_fast(spec, Y, grid);
}

double sup_error(const SpectralEstimate& estimate, const SpectrumModel& model) {
  double worst = 0.0;
  for (std::size_t i = 0; i < estimate.frequencies.size(); ++i) {
    const CMatrix gap = estimate.matrices[i] - psd(model, estimate.frequencies[i]);
    worst = std::max(worst, spectral_norm(gap));
  }
  return worst;
}

double sup_norm(const SpectralEstimate& estimate) {
  double worst = 0.0;
  for (const auto& m : estimate.matrices) worst = std::max(worst, spectral_norm(m));
  return worst;
}

ErrorSample monte_carlo_sup_error(const EstimatorSpec& spec, const SpectrumModel& model, NoiseKind noise,
                                  std::span<const double> grid, std::size_t trials, std::uint64_t seed,
                                  bool oracle) {
  if (trials < 1) throw std::invalid_argument("monte_carlo_sup_error: trials must be >= 1");
  validate_grid(grid);
  const Index N = spec.samples();
  std::optional<QuadraticForm> dense;
  if (oracle) dense.emplace(build_matrix(spec));
  ErrorSample out;
  out.per_trial.assign(trials, 0.0);
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(trials); ++t) {
    try {
      const DataMatrix Y = sample(model, N, noise, seed, static_cast<std::uint64_t>(t));
      const SpectralEstimate est = dense ? evaluate_generic(Y, *dense, grid) : evaluate_fast(spec, Y, grid);
      out.per_trial[static_cast<std::size_t>(t)] = sup_error(est, model);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  out.mean = std::accumulate(out.per_trial.begin(), out.per_trial.end(), 0.0) / static_cast<double>(trials);
  out.max = *std::max_element(out.per_trial.begin(), out.per_trial.end());
  return out;
}

TotalBound total_worst_case_bound(const EstimatorSpec& spec, double delta, const BoundContext& ctx) {
  const auto params = certificate_params(spec);
  if (!params) throw CapabilityError(spec.name() + ": no worst-case concentration certificate");
  if (!ctx.decay) throw CapabilityError("total bound needs a decay pair (gamma, rho)");
  TotalBound out;
  out.variance = corollary1_worst(params->g, params->n_hat, delta, ctx);
  out.bias = corollary1_bias_geometric(closed_form_bias(spec), params->n_hat, ctx.decay->gamma, ctx.decay->rho);
  out.total = out.variance + out.bias;
  return out;
}

ReproduceSettings reproduce_settings(const ExperimentConfig& config) {
  ReproduceSettings s;
  s.blocks = config.sweep;
  s.M = config.estimator.M;
  s.K = config.estimator.K;
  s.delta = config.delta;
  s.trials = config.trials;
  s.seed = config.seed;
  s.grid = frequency_grid(config);
  if (config.model.rho_target) s.rho_target = *config.model.rho_target;
  return s;
}

namespace {

std::vector<SweepRow> sweep(const SpectrumModel& model, NoiseKind noise, const BoundContext& ctx,
                            const ReproduceSettings& settings) {
  std::vector<SweepRow> rows;
  for (Index S : settings.blocks) {
    const EstimatorSpec spec = EstimatorSpec::welch(settings.M, settings.K, S, WindowKind::Hann);
    const ErrorSample err = monte_carlo_sup_error(spec, model, noise, settings.grid, settings.trials,
                                                  derive_seed(settings.seed, static_cast<std::uint64_t>(S)),
                                                  settings.oracle);
    const TotalBound bound = total_worst_case_bound(spec, settings.delta, ctx);
    SweepRow row;
    row.blocks = S;
    row.samples = spec.samples();
    row.empirical_mean = err.mean;
    row.empirical_max = err.max;
    row.variance_bound = bound.variance;
    row.bias_bound = bound.bias;
    row.certificate = bound.total;
    row.exact_bias = grid_bias(closed_form_bias(spec), model, settings.grid);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::vector<SweepRow> reproduce_example1(NoiseKind noise, const ReproduceSettings& settings) {
  const SpectrumModel model = SpectrumModel::geometric(0.3);
  const NoiseAssumption assumption =
      noise == NoiseKind::Gaussian ? NoiseAssumption::gaussian() : NoiseAssumption::sub_gaussian(std::sqrt(3.0));
  return sweep(model, noise, make_context(model, assumption), settings);
}

std::vector<SweepRow> reproduce_example2(const ReproduceSettings& settings) {
  SpectrumModel model = SpectrumModel::example2();
  const DecayCertificate cert = certify_decay(model, settings.rho_target);
  model = model.with_decay({cert.gamma, cert.rho});
  return sweep(model, NoiseKind::Gaussian, make_context(model, NoiseAssumption::gaussian()), settings);
}

ValidityResult certificate_validity(const EstimatorSpec& spec, const SpectrumModel& model, NoiseKind noise,
                                    NoiseAssumption assumption, double delta, std::span<const double> grid,
                                    std::size_t trials, std::uint64_t seed) {
  ValidityResult out;
  out.bound = total_worst_case_bound(spec, delta, make_context(model, assumption));
  const ErrorSample err = monte_carlo_sup_error(spec, model, noise, grid, trials, seed);
  out.trials = trials;
  out.exceedances = static_cast<std::size_t>(std::count_if(
      err.per_trial.begin(), err.per_trial.end(), [&](double e) { return e > out.bound.total; }));
  out.frequency = static_cast<double>(out.exceedances) / static_cast<double>(trials);
  out.max_error = err.max;
  return out;
}

}  // namespace specbound::cli
