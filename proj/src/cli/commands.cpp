#include "specbound/cli/commands.hpp"

#include "specbound/cli/csv.hpp"
#include "specbound/cli/experiments.hpp"
#include "specbound/cli/svg.hpp"
#include "specbound/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <type_traits>
#include <variant>

namespace specbound::cli {

namespace fs = std::filesystem;

namespace {

std::string output_path(const ExperimentConfig& config, const std::string& name) {
  fs::create_directories(config.output);
  return (fs::path(config.output) / name).string();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file", path);
  return out;
}

Certificate unavailable(const std::string& statement, double eps, double delta, const std::string& why) {
  Certificate c;
  c.statement = statement;
  c.epsilon = eps;
  c.delta = delta;
  c.status = CertificateStatus::Unavailable;
  c.note = why;
  return c;
}

Certificate value_row(const std::string& statement, double delta, double value,
                      std::vector<std::pair<std::string, double>> inputs) {
  Certificate c;
  c.statement = statement;
  c.delta = delta;
  c.epsilon = value;
  c.conclusion_epsilon = value;
  c.status = CertificateStatus::Value;
  c.value = value;
  c.inputs = std::move(inputs);
  return c;
}

// Evaluates `make`, turning capability gaps into an unavailable row.
Certificate guarded(const std::string& statement, double eps, double delta, const std::function<Certificate()>& make) {
  try {
    return make();
  } catch (const CapabilityError& e) {
    return unavailable(statement, eps, delta, e.what());
  }
}

DataMatrix load_samples(const std::string& path) {
  const CsvTable table = read_numeric_csv(path);
  if (table.header.size() < 2 || table.rows.empty()) throw ConfigError("data file needs t plus at least one channel", path);
  const Index n = static_cast<Index>(table.header.size()) - 1;
  Matrix Y(n, static_cast<Index>(table.rows.size()));
  for (std::size_t t = 0; t < table.rows.size(); ++t) {
    for (Index c = 0; c < n; ++c) Y(c, static_cast<Index>(t)) = table.rows[t][static_cast<std::size_t>(c + 1)];
  }
  try {
    return DataMatrix(std::move(Y));
  } catch (const std::exception& e) {
    throw ConfigError(e.what(), path);
  }
}

DataMatrix config_samples(const ExperimentConfig& config, const EstimatorSpec& spec) {
  if (!config.data_file.empty()) return load_samples(config.data_file);
  const auto model = build_model(config);
  if (!model) throw ConfigError("estimate needs either a data_file or a model to simulate");
  return sample(*model, spec.samples(), noise_kind(config), config.seed);
}

// sup_s ||Phi^(s)||_2 from an estimate CSV (s, re_1_1, im_1_1, ...).
double estimate_sup_from_file(const std::string& path) {
  const CsvTable table = read_numeric_csv(path);
  const std::size_t entries = (table.header.size() - 1) / 2;
  const Index n = static_cast<Index>(std::lround(std::sqrt(static_cast<double>(entries))));
  if (table.header.size() < 3 || static_cast<std::size_t>(n * n) * 2 + 1 != table.header.size()) {
    throw ConfigError("estimate file must hold s plus re/im columns for every channel pair", path);
  }
  double worst = 0.0;
  for (const auto& row : table.rows) {
    CMatrix m(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        const std::size_t col = 1 + 2 * static_cast<std::size_t>(i * n + j);
        m(i, j) = Complex(row[col], row[col + 1]);
      }
    }
    worst = std::max(worst, spectral_norm(m));
  }
  return worst;
}

void write_sweep(const std::string& path, const ExperimentConfig& config, const std::vector<SweepRow>& rows,
                 const std::string& metadata) {
  auto out = open_output(path);
  CsvWriter csv(out, config_hash(config), config.seed,
                {"S", "N", "empirical_mean", "empirical_max", "certificate", "variance_bound", "bias_bound", "exact_bias"},
                metadata);
  for (const auto& r : rows) {
    csv.field(static_cast<long long>(r.blocks)).field(static_cast<long long>(r.samples));
    csv.field(r.empirical_mean).field(r.empirical_max).field(r.certificate);
    csv.field(r.variance_bound).field(r.bias_bound).field(r.exact_bias);
    csv.end_row();
  }
}

void write_plot(const std::string& path, const std::string& title, const std::vector<SweepRow>& rows,
                bool bias_is_bound) {
  PlotSpec plot;
  plot.title = title;
  plot.x_label = "number of data blocks S";
  plot.y_label = "spectral error";
  PlotSeries empirical{"max error over grid (max over trials)", {}, {}, "#1f77b4", ""};
  PlotSeries certificate{"worst-case certificate", {}, {}, "#000000", "2,4"};
  PlotSeries bias{bias_is_bound ? "bias upper bound" : "exact bias", {}, {}, "#d62728", "8,4"};
  for (const auto& r : rows) {
    const double S = static_cast<double>(r.blocks);
    empirical.x.push_back(S);
    empirical.y.push_back(r.empirical_max);
    certificate.x.push_back(S);
    certificate.y.push_back(r.certificate);
    bias.x.push_back(S);
    bias.y.push_back(bias_is_bound ? r.bias_bound : r.exact_bias);
  }
  plot.series = {empirical, certificate, bias};
  auto out = open_output(path);
  out << render_svg(plot);
}

// The result each estimator's specific conditions come from.
std::string estimator_statement(const EstimatorSpec& spec) {
  return std::visit(
      [](const auto& e) -> std::string {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, BiasedPeriodogram>) return "proposition1";
        if constexpr (std::is_same_v<T, UnbiasedPeriodogram>) return "proposition2";
        if constexpr (std::is_same_v<T, BlackmanTukey>) return "theorem2";
        if constexpr (std::is_same_v<T, Bartlett>) return "theorem3";
        return "theorem4";
      },
      spec.variant());
}

}  // namespace

std::vector<Certificate> certificate_table(const ExperimentConfig& config) {
  const auto model = build_model(config);
  const EstimatorSpec spec = build_estimator(config);
  const BoundContext ctx = build_context(config, model);
  const double eps = config.epsilon;
  const double delta = config.delta;
  const Theorem1Inputs inputs = Theorem1Inputs::from_spec(spec);
  const auto params = certificate_params(spec);

  std::vector<Certificate> rows;
  for (int part = 1; part <= 5; ++part) {
    const std::string id = "theorem1.part" + std::to_string(part);
    rows.push_back(guarded(id, eps, delta, [&] { return check_theorem1(part, inputs, eps, delta, ctx); }));
  }
  for (int part = 1; part <= 5; ++part) {
    const std::string id = estimator_statement(spec) + ".part" + std::to_string(part);
    rows.push_back(guarded(id, eps, delta, [&] {
      Certificate c = check_estimator(spec, part, eps, delta, ctx);
      c.statement = id;
      return c;
    }));
  }

  rows.push_back(guarded("corollary1.part1", eps, delta, [&] {
    if (!inputs.xi) throw CapabilityError(spec.name() + ": xi(A) >= 1, no pointwise certificate");
    return value_row("corollary1.part1", delta, corollary1_pointwise(*inputs.xi, delta, ctx), {{"xi", *inputs.xi}});
  }));
  rows.push_back(guarded("corollary1.part2", eps, delta, [&] {
    if (!params) throw CapabilityError(spec.name() + ": no g / N^ for the worst-case certificate");
    return value_row("corollary1.part2", delta, corollary1_worst(params->g, params->n_hat, delta, ctx),
                     {{"g", params->g}, {"n_hat", static_cast<double>(params->n_hat)}});
  }));
  std::optional<double> bias_bound;
  rows.push_back(guarded("corollary1.part3", eps, delta, [&] {
    if (!ctx.decay) throw CapabilityError("no decay pair (gamma, rho) for the bias certificate");
    const Index n_hat = params ? params->n_hat : spec.samples();
    bias_bound = corollary1_bias_geometric(*inputs.b, n_hat, ctx.decay->gamma, ctx.decay->rho);
    return value_row("corollary1.part3", delta, *bias_bound,
                     {{"gamma", ctx.decay->gamma}, {"rho", ctx.decay->rho}, {"n_hat", static_cast<double>(n_hat)}});
  }));
  rows.push_back(guarded("corollary1.part4", eps, delta, [&] {
    if (!params) throw CapabilityError(spec.name() + ": no g / N^ for the data-driven certificate");
    if (!bias_bound) throw CapabilityError("data-driven certificate needs the bias bound");
    double est_sup = 0.0;
    std::string source;
    if (!config.estimate_file.empty()) {
      est_sup = estimate_sup_from_file(config.estimate_file);
      source = "estimate_file";
    } else {
      if (!model) throw CapabilityError("data-driven certificate needs an estimate_file or a model");
      const auto grid = frequency_grid(config);
      est_sup = sup_norm(evaluate_fast(spec, sample(*model, spec.samples(), noise_kind(config), config.seed), grid));
      source = "simulated";
    }
    const double a = data_driven_a(params->g, params->n_hat, delta, ctx);
    Certificate c = corollary1_data_driven(a, *bias_bound, est_sup);
    c.delta = delta;
    c.note = c.note.empty() ? "estimate=" + source : c.note + ",estimate=" + source;
    return c;
  }));
  return rows;
}

std::vector<std::string> cmd_certify(const ExperimentConfig& config, const CommandOptions& options) {
  const auto rows = certificate_table(config);
  for (const auto& id : options.require) {
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const Certificate& c) { return c.statement == id; });
    if (it == rows.end()) throw ConfigError("--require names an unknown statement '" + id + "'");
  }
  const std::string path = output_path(config, "certificate.csv");
  {
    auto out = open_output(path);
    CsvWriter csv(out, config_hash(config), config.seed,
                  {"statement", "status", "value", "epsilon", "conclusion_epsilon", "delta", "lhs", "rhs", "inputs", "note"});
    for (const auto& c : rows) {
      std::string inputs;
      for (const auto& [k, v] : c.inputs) inputs += (inputs.empty() ? "" : "|") + k + ":" + format_number(v);
      const bool cond = c.status == CertificateStatus::Holds || c.status == CertificateStatus::Fails;
      csv.field(c.statement).field(to_string(c.status));
      if (c.status == CertificateStatus::Value) {
        csv.field(c.value);
      } else {
        csv.field(std::string());
      }
      csv.field(c.epsilon).field(c.conclusion_epsilon).field(c.delta);
      if (cond) {
        csv.field(c.lhs).field(c.rhs);
      } else {
        csv.field(std::string()).field(std::string());
      }
      csv.field(inputs).field(c.note);
      csv.end_row();
    }
  }
  for (const auto& id : options.require) {
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const Certificate& c) { return c.statement == id; });
    if (it->status != CertificateStatus::Holds && it->status != CertificateStatus::Value) {
      throw InfeasibleRequirement("required certificate " + id + " is " + to_string(it->status));
    }
  }
  return {path};
}

std::vector<std::string> cmd_estimate(const ExperimentConfig& config, const CommandOptions& options) {
  const EstimatorSpec spec = build_estimator(config);
  const DataMatrix Y = config_samples(config, spec);
  if (Y.samples() != spec.samples()) {
    throw ConfigError(spec.name() + " needs " + std::to_string(spec.samples()) + " samples, data has " +
                      std::to_string(Y.samples()));
  }
  const auto grid = frequency_grid(config);
  const SpectralEstimate est = run_estimate(spec, Y, grid, options.oracle);
  const Index n = Y.channels();
  std::vector<std::string> columns{"s"};
  for (Index i = 1; i <= n; ++i) {
    for (Index j = 1; j <= n; ++j) {
      columns.push_back("re_" + std::to_string(i) + "_" + std::to_string(j));
      columns.push_back("im_" + std::to_string(i) + "_" + std::to_string(j));
    }
  }
  const std::string path = output_path(config, "estimate.csv");
  auto out = open_output(path);
  CsvWriter csv(out, config_hash(config), config.seed, columns,
                std::string("path=") + (options.oracle ? "generic" : "fast"));
  for (std::size_t f = 0; f < est.frequencies.size(); ++f) {
    csv.field(est.frequencies[f]);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) csv.field(est.matrices[f](i, j).real()).field(est.matrices[f](i, j).imag());
    }
    csv.end_row();
  }
  return {path};
}

std::vector<std::string> cmd_reproduce(const ExperimentConfig& config, const CommandOptions& options) {
  ReproduceSettings settings = reproduce_settings(config);
  settings.oracle = options.oracle;
  const std::string meta = "trials=" + std::to_string(settings.trials) + ",example=" + std::to_string(options.example);
  std::vector<std::string> written;
  if (options.example == 1) {
    for (NoiseKind noise : {NoiseKind::Gaussian, NoiseKind::UniformScaled}) {
      const std::string tag = noise == NoiseKind::Gaussian ? "gaussian" : "subgaussian";
      const auto rows = reproduce_example1(noise, settings);
      written.push_back(output_path(config, "example1_" + tag + ".csv"));
      write_sweep(written.back(), config, rows, meta + ",noise=" + tag);
      written.push_back(output_path(config, "example1_" + tag + ".svg"));
      write_plot(written.back(), "Welch error, scalar " + tag + " process", rows, false);
    }
  } else if (options.example == 2) {
    const auto rows = reproduce_example2(settings);
    written.push_back(output_path(config, "example2.csv"));
    write_sweep(written.back(), config, rows, meta + ",rho_target=" + format_number(settings.rho_target));
    written.push_back(output_path(config, "example2.svg"));
    write_plot(written.back(), "Welch error, state-space process", rows, true);
  } else {
    throw ConfigError("--example must be 1 or 2");
  }
  return written;
}

std::vector<std::string> cmd_verify_concentration(const ExperimentConfig& config, const CommandOptions&) {
  const auto& cc = config.concentration;
  if (cc.trials < kMinTailTrials) {
    throw ConfigError("verify-concentration needs at least " + std::to_string(kMinTailTrials) + " trials, got " +
                      std::to_string(cc.trials));
  }
  const std::string path = output_path(config, "concentration.csv");
  auto out = open_output(path);
  CsvWriter csv(out, config_hash(config), config.seed, {"suite", "dim", "eps", "empirical", "bound", "flagged"},
                "trials=" + std::to_string(cc.trials));
  for (HansonWrightSuite suite : {HansonWrightSuite::Gaussian, HansonWrightSuite::Uniform}) {
    for (Index dim : cc.dims) {
      const auto report = hanson_wright_suite(suite, dim, cc.trials, derive_seed(config.seed, static_cast<std::uint64_t>(dim)),
                                              cc.points);
      for (const auto& row : report.rows) {
        csv.field(to_string(suite)).field(static_cast<long long>(dim)).field(row.eps).field(row.empirical);
        csv.field(row.bound).field(static_cast<long long>(row.flagged ? 1 : 0));
        csv.end_row();
      }
    }
  }
  return {path};
}

std::vector<std::string> cmd_simulate(const ExperimentConfig& config, const CommandOptions&) {
  const auto model = build_model(config);
  if (!model) throw ConfigError("simulate needs a model");
  const EstimatorSpec spec = build_estimator(config);
  const DataMatrix Y = sample(*model, spec.samples(), noise_kind(config), config.seed);
  std::vector<std::string> columns{"t"};
  for (Index c = 1; c <= Y.channels(); ++c) columns.push_back("y" + std::to_string(c));
  const std::string path = output_path(config, "simulate.csv");
  auto out = open_output(path);
  CsvWriter csv(out, config_hash(config), config.seed, columns, "model=" + model->name() + ",noise=" + config.noise);
  for (Index t = 0; t < Y.samples(); ++t) {
    csv.field(static_cast<long long>(t));
    for (Index c = 0; c < Y.channels(); ++c) csv.field(Y.values()(c, t));
    csv.end_row();
  }
  return {path};
}

int run_command(const std::string& name, const ExperimentConfig& config, const CommandOptions& options,
                std::ostream& out, std::ostream& err) {
  try {
    std::vector<std::string> written;
    if (name == "estimate") {
      written = cmd_estimate(config, options);
    } else if (name == "certify") {
      written = cmd_certify(config, options);
    } else if (name == "reproduce") {
      written = cmd_reproduce(config, options);
    } else if (name == "verify-concentration") {
      written = cmd_verify_concentration(config, options);
    } else if (name == "simulate") {
      written = cmd_simulate(config, options);
    } else {
      err << "unknown command '" << name << "'\n";
      return kExitConfig;
    }
    for (const auto& p : written) out << p << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InfeasibleRequirement& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const CapabilityError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace specbound::cli
