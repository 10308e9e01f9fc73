// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "specbound/bounds.hpp"
#include "specbound/cli/experiments.hpp"
#include "specbound/concentration.hpp"
#include "specbound/constants.hpp"
#include "specbound/estimators.hpp"
#include "specbound/quadform.hpp"
#include "specbound/rng.hpp"
#include "specbound/signals.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace specbound;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void run(int id, const char* title, double budget_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (elapsed > budget_seconds) {
    out.pass = false;
    out.detail += " [over time budget " + std::to_string(budget_seconds) + " s]";
  }
  if (!out.pass) ++failures;
  std::printf("%s criterion %d: %s (%.2f s) %s\n", out.pass ? "PASS" : "FAIL", id, title, elapsed,
              out.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

DataMatrix gaussian_data(Index rows, Index cols, std::uint64_t seed) {
  CounterRng rng(seed, 0xacce);
  std::normal_distribution<double> d;
  Matrix y(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) y(i, j) = d(rng);
  return DataMatrix(std::move(y));
}

std::vector<EstimatorSpec> families(Index N) {
  // Welch with S = 3 segments of length N / 2, hop N / 4.
  const Index M = N / 2, K = N / 4;
  return {EstimatorSpec::blackman_tukey(N, N / 4 + 1, WindowKind::Hann), EstimatorSpec::bartlett(N / 4, 4),
          EstimatorSpec::welch(M, K, 3, WindowKind::Hann), EstimatorSpec::biased_periodogram(N),
          EstimatorSpec::unbiased_periodogram(N)};
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome oracle_equivalence() {
  const std::vector<double> grid = linear_grid(-0.5, 0.5, 33);
  double worst = 0.0;
  std::uint64_t seed = 1;
  for (Index n : {1, 2, 3}) {
    for (Index N : {8, 16, 64}) {
      for (const EstimatorSpec& spec : families(N)) {
        const DataMatrix Y = gaussian_data(n, N, seed++);
        const SpectralEstimate fast = evaluate_fast(spec, Y, grid);
        const SpectralEstimate slow = evaluate_generic(Y, build_matrix(spec), grid);
        for (std::size_t i = 0; i < grid.size(); ++i)
          worst = std::max(worst, (fast.matrices[i] - slow.matrices[i]).cwiseAbs().maxCoeff());
      }
    }
  }
  return {worst <= 1e-10, fmt("max entry difference %.3e", worst)};
}

Outcome bias_identity() {
  std::mt19937_64 gen(2024);
  const WindowKind kinds[] = {WindowKind::Rectangular, WindowKind::Triangular, WindowKind::Hann, WindowKind::Hamming,
                              WindowKind::Blackman};
  auto pick = [&](Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(gen); };
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    EstimatorSpec spec = EstimatorSpec::biased_periodogram(1);
    const WindowKind kind = kinds[pick(0, 4)];
    switch (i % 5) {
      case 0: spec = EstimatorSpec::biased_periodogram(pick(1, 200)); break;
      case 1: spec = EstimatorSpec::unbiased_periodogram(pick(1, 200)); break;
      case 2: {
        const Index N = pick(2, 200);
        spec = EstimatorSpec::blackman_tukey(N, pick(1, N), kind);
        break;
      }
      case 3: spec = EstimatorSpec::bartlett(pick(1, 40), pick(1, 8)); break;
      default: {
        const Index M = pick(2, 48);
        spec = EstimatorSpec::welch(M, pick(1, M), pick(1, 8), kind);
        break;
      }
    }
    const Matrix A = build_matrix(spec).entries();
    const BiasCoefficients b = closed_form_bias(spec);
    const Index N = A.rows();
    for (Index k = -(N - 1); k <= N - 1; ++k) {
      double sum = 0.0;
      for (Index u = std::max<Index>(0, -k); u < N && u + k < N; ++u) sum += A(u + k, u);
      worst = std::max(worst, std::abs(sum - b[k]));
    }
  }
  return {worst <= 1e-12, fmt("max |b[k] - diagonal sum| %.3e", worst)};
}

Outcome norm_envelopes() {
  std::vector<EstimatorSpec> specs;
  for (Index N : {16, 64, 256, 512}) {
    specs.push_back(EstimatorSpec::bartlett(N / 8, 8));
    specs.push_back(EstimatorSpec::bartlett(N / 2, 2));
    specs.push_back(EstimatorSpec::blackman_tukey(N, N / 8, WindowKind::Rectangular));
    specs.push_back(EstimatorSpec::blackman_tukey(N, N / 4, WindowKind::Hann));
    specs.push_back(EstimatorSpec::blackman_tukey(N, N / 4, WindowKind::Triangular));
    specs.push_back(EstimatorSpec::welch(N / 4, N / 8, 7, WindowKind::Hann));
    specs.push_back(EstimatorSpec::welch(N / 4, N / 4, 4, WindowKind::Rectangular));
    specs.push_back(EstimatorSpec::welch(N / 8, N / 16, 15, WindowKind::Hamming));
  }
  bool pass = true;
  double worst_excess = -1.0, worst_equality = 0.0;
  for (const EstimatorSpec& spec : specs) {
    if (spec.samples() > 512) continue;
    const Matrix A = build_matrix(spec).entries();
    const auto params = certificate_params(spec);
    if (!params) return {false, "missing certificate parameters for " + spec.name()};
    const double g = params->g;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(A, Eigen::EigenvaluesOnly);
    const double spec_norm = eig.eigenvalues().cwiseAbs().maxCoeff();
    const double frob2 = A.squaredNorm();
    double diag_spec = 0.0, diag_frob2 = 0.0;
    const Index N = A.rows();
    for (Index k = -(N - 1); k <= N - 1; ++k) {
      const Vector d = A.diagonal(-k);
      diag_spec = std::max(diag_spec, d.cwiseAbs().maxCoeff());
      diag_frob2 = std::max(diag_frob2, d.squaredNorm());
    }
    for (double v : {spec_norm, frob2, diag_spec, diag_frob2}) worst_excess = std::max(worst_excess, v - g);
    if (std::holds_alternative<Bartlett>(spec.variant())) {
      const double gap = std::max(std::abs(spec_norm - g), std::abs(frob2 - g));
      worst_equality = std::max(worst_equality, gap);
      if (gap > 1e-9) pass = false;
    }
    if (std::max({spec_norm, frob2, diag_spec, diag_frob2}) > g + 1e-9) pass = false;
  }
  return {pass, fmt("max(norm - g) %.3e", worst_excess) + fmt(", Bartlett equality gap %.3e", worst_equality)};
}

Outcome certificate_validity() {
  const EstimatorSpec spec = EstimatorSpec::bartlett(16, 256);
  const double delta = 0.2;
  const cli::ValidityResult r =
      cli::certificate_validity(spec, SpectrumModel::white_noise(1), NoiseKind::Gaussian,
                                NoiseAssumption::gaussian(), delta, half_band_grid(), 300, 4);
  const double limit = delta + 3.0 * std::sqrt(delta * 0.8 / 300.0);
  return {r.trials == 300 && r.frequency <= limit,
          fmt("bound %.4f", r.bound.total) + fmt(", max error %.4f", r.max_error) +
              fmt(", frequency %.4f", r.frequency) + fmt(" <= %.4f", limit)};
}

Outcome hanson_wright() {
  std::size_t flags = 0, rows = 0;
  for (HansonWrightSuite suite : {HansonWrightSuite::Gaussian, HansonWrightSuite::Uniform}) {
    for (Index dim : {4, 16}) {
      const TailCheckReport r = hanson_wright_suite(suite, dim, 100000, 5 + static_cast<std::uint64_t>(dim), 20);
      flags += r.flags();
      rows += r.rows.size();
    }
  }
  return {flags == 0 && rows == 80, std::to_string(flags) + " flags over " + std::to_string(rows) + " grid points"};
}

Outcome example1() {
  const cli::ReproduceSettings settings;
  const auto gauss = cli::reproduce_example1(NoiseKind::Gaussian, settings);
  const auto sub = cli::reproduce_example1(NoiseKind::UniformScaled, settings);
  if (gauss.size() != 5 || sub.size() != 5) return {false, "sweep incomplete"};
  bool pass = true;
  std::string detail = "gaps (gaussian / sub-gaussian):";
  for (std::size_t i = 0; i < gauss.size(); ++i) {
    const double gg = gauss[i].certificate / gauss[i].empirical_mean;
    const double gs = sub[i].certificate / sub[i].empirical_mean;
    if (gauss[i].certificate < gauss[i].empirical_max || sub[i].certificate < sub[i].empirical_max) pass = false;
    if (gg < 10.0 || gg > 1000.0) pass = false;
    if (!(gs > gg)) pass = false;
    char buf[96];
    std::snprintf(buf, sizeof buf, " S=%lld %.1f/%.3g", static_cast<long long>(gauss[i].blocks), gg, gs);
    detail += buf;
  }
  return {pass, detail};
}

Outcome example2() {
  const SpectrumModel raw = SpectrumModel::example2();
  const DecayCertificate cert = certify_decay(raw, 0.5);
  bool pass = true;
  for (Index k = 0; k <= 64; ++k)
    if (spectral_norm(exact_autocov(raw, k)) > cert.gamma * std::pow(cert.rho, static_cast<double>(k))) pass = false;
  std::string detail = pass ? "envelope holds for k <= 64;" : "envelope violated;";

  const cli::ReproduceSettings settings;
  const auto rows = cli::reproduce_example2(settings);
  if (rows.size() != settings.blocks.size()) return {false, "sweep incomplete"};
  double min_margin = INFINITY;
  for (const cli::SweepRow& row : rows) {
    const EstimatorSpec spec = EstimatorSpec::welch(settings.M, settings.K, row.blocks, WindowKind::Hann);
    const std::vector<CMatrix> mean = expected_estimate(closed_form_bias(spec), raw, settings.grid);
    double bias = 0.0;
    for (std::size_t i = 0; i < settings.grid.size(); ++i)
      bias = std::max(bias, spectral_norm(CMatrix(psd(raw, settings.grid[i]) - mean[i])));
    if (row.bias_bound < bias) pass = false;
    min_margin = std::min(min_margin, row.bias_bound / bias);
  }
  return {pass, detail + fmt(" min bias_bound / exact_bias %.4f", min_margin)};
}

Outcome rate_law() {
  const BoundContext ctx = make_context(SpectrumModel::geometric(0.3), NoiseAssumption::gaussian());
  std::vector<double> logN, logM, logTotal, logDivisorM;
  bool decreasing = true;
  double prev = INFINITY;
  for (int p = 9; p <= 18; ++p) {
    const Index N = Index{1} << p;
    const ContinuousBartlettChoice c = optimize_bartlett_m_continuous(N, 0.05, ctx);
    const BartlettChoice d = optimize_bartlett_m(N, 0.05, ctx);
    logN.push_back(std::log(static_cast<double>(N)));
    logM.push_back(std::log(c.M));
    logTotal.push_back(std::log(c.total));
    logDivisorM.push_back(std::log(static_cast<double>(d.M)));
    if (!(c.total < prev)) decreasing = false;
    prev = c.total;
  }
  const double m_slope = slope(logN, logM);
  const double t_slope = slope(logN, logTotal);
  const bool pass = decreasing && m_slope >= 0.23 && m_slope <= 0.43 && std::abs(t_slope + 1.0 / 3.0) <= 0.1;
  return {pass, fmt("M* slope %.3f", m_slope) + fmt(", total slope %.3f", t_slope) +
                    fmt(", divisor M* slope %.3f", slope(logN, logDivisorM))};
}

Outcome constants_table() {
  const BoundConstants g = constants_for(NoiseAssumption::gaussian());
  const BoundConstants s = constants_for(NoiseAssumption::sub_gaussian(1.7));
  const bool pass = g.c_mult == 2.0 && g.c_exp == 1.0 / 32.0 && g.c_subgauss == 1.0 && s.c_mult == 4.0 &&
                    s.c_exp == std::ldexp(1.0, -19) && s.c_subgauss == 1.7 &&
                    constants::kHansonWrightExp == 1.0 / 2048.0 && constants::kGaussianHansonWrightExp == 1.0 / 8.0;
  return {pass, "(2, 1/32, 1), (4, 2^-19, sigma), 1/2048, 1/8"};
}

}  // namespace

int main() {
  run(1, "oracle equivalence", 10, oracle_equivalence);
  run(2, "bias-coefficient identity", 5, bias_identity);
  run(3, "norm envelopes", 30, norm_envelopes);
  run(4, "certificate validity", 300, certificate_validity);
  run(5, "Hanson-Wright never violated", 120, hanson_wright);
  run(6, "example 1 reproduction", 600, example1);
  run(7, "example 2 reproduction", 300, example2);
  run(8, "Bartlett rate law", 60, rate_law);
  run(9, "constants regression", 1, constants_table);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
