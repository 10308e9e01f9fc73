#include "specbound/concentration.hpp"

#include "specbound/constants.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <string>

namespace specbound {

namespace {

void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0) || std::isnan(x)) throw std::invalid_argument(std::string(what) + " must be >= 0");
}

void require_norms(double frob, double spec) {
  if (!(frob > 0.0) || !(spec > 0.0)) throw std::invalid_argument("matrix norms must be positive");
}

double cap(double p) { return std::min(1.0, p); }

double factorial(int k) { return std::tgamma(static_cast<double>(k) + 1.0); }

}  // namespace

SubGaussianSpec SubGaussianSpec::from_sigma(double sigma) {
  require_nonnegative(sigma, "sigma");
  return {sigma, 2.0 * sigma};
}

double hanson_wright_tail(double eps, double b, double frob, double spec) {
  require_nonnegative(eps, "eps");
  if (!(b > 0.0)) throw std::invalid_argument("psi_2 bound b must be positive");
  require_norms(frob, spec);
  const double b2 = b * b;
  const double exponent = std::min(eps * eps / (b2 * b2 * frob * frob), eps / (b2 * spec));
  return cap(constants::kHansonWrightMult * std::exp(-constants::kHansonWrightExp * exponent));
}

double gaussian_hw_tail(double eps, double frob, double spec) {
  require_nonnegative(eps, "eps");
  require_norms(frob, spec);
  const double exponent = std::min(eps * eps / (frob * frob), eps / spec);
  return cap(std::exp(-constants::kGaussianHansonWrightExp * exponent));
}

double subexp_tail(double t, const SubExponentialSpec& spec) {
  require_nonnegative(t, "t");
  if (!(spec.nu > 0.0) || !(spec.alpha_se > 0.0)) {
    throw std::invalid_argument("sub-exponential parameters must be positive");
  }
  return cap(std::exp(-0.5 * std::min(t * t / (spec.nu * spec.nu), t / spec.alpha_se)));
}

double lemma14_tail(double t, double b) {
  require_nonnegative(t, "t");
  if (!(b > 0.0)) throw std::invalid_argument("b must be positive");
  return cap(2.0 * std::exp(-t * t / (b * b)));
}

double lemma14_even_moment(int k, double b) {
  if (k < 1) throw std::invalid_argument("moment order k must be >= 1");
  require_nonnegative(b, "b");
  return 2.0 * std::pow(b, 2.0 * k) * factorial(k);
}

double lemma14_mgf(double lambda, double b) {
  require_nonnegative(b, "b");
  return std::exp(4.0 * lambda * lambda * b * b);
}

double lemma14_centered_square_moment(int k, double b) {
  if (k < 1) throw std::invalid_argument("moment order k must be >= 1");
  require_nonnegative(b, "b");
  return 2.0 * std::pow(2.0 * b * b, k) * factorial(k);
}

double lemma14_square_mgf(double lambda, double b) {
  if (!(b > 0.0)) throw std::invalid_argument("b must be positive");
  if (std::abs(lambda) > 1.0 / (4.0 * b * b)) {
    throw std::invalid_argument("square MGF bound needs |lambda| <= 1/(4 b^2)");
  }
  const double s = 4.0 * b * b;
  return std::exp(s * s * lambda * lambda);
}

double lemma14_psi2_from_sigma(double sigma) {
  require_nonnegative(sigma, "sigma");
  return std::sqrt(constants::kPsi2FromSigmaSquared) * sigma;
}

double lemma14_variance_bound(double sigma) {
  require_nonnegative(sigma, "sigma");
  return sigma * sigma;
}

double lemma14_numeric(Lemma14Fact fact, const Lemma14Params& p) {
  switch (fact) {
    case Lemma14Fact::Tail: return lemma14_tail(p.t, p.b);
    case Lemma14Fact::EvenMoment: return lemma14_even_moment(p.k, p.b);
    case Lemma14Fact::Mgf: return lemma14_mgf(p.lambda, p.b);
    case Lemma14Fact::CenteredSquareMoment: return lemma14_centered_square_moment(p.k, p.b);
    case Lemma14Fact::SquareMgf: return lemma14_square_mgf(p.lambda, p.b);
    case Lemma14Fact::Psi2FromSigma: return lemma14_psi2_from_sigma(p.sigma);
    case Lemma14Fact::Variance: return lemma14_variance_bound(p.sigma);
  }
  throw std::invalid_argument("unknown fact");
}

double data_matrix_tail(double eps, double frob, double spec, Index channels, double phi_inf,
                        const NoiseAssumption& assumption) {
  require_nonnegative(eps, "eps");
  require_norms(frob, spec);
  if (channels < 1) throw std::invalid_argument("channel count must be >= 1");
  if (!(phi_inf > 0.0)) throw std::invalid_argument("phi_inf must be positive");
  const auto c = constants_for(assumption);
  const double c3sq = c.c_subgauss * c.c_subgauss;
  const double quad = eps * eps / (c3sq * c3sq * frob * frob * phi_inf * phi_inf);
  const double lin = eps / (c3sq * spec * phi_inf);
  const double log_p = 2.0 * static_cast<double>(channels) * std::numbers::ln10 + std::log(c.c_mult) -
                       c.c_exp * std::min(quad, lin);
  return cap(std::exp(log_p));
}

std::size_t TailCheckReport::flags() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const TailCheckRow& r) { return r.flagged; }));
}

TailCheckReport monte_carlo_tail_check(const VectorSampler& sampler, const Statistic& statistic,
                                       const TailBound& bound_fn, const std::vector<double>& eps_grid,
                                       std::size_t trials, std::uint64_t seed) {
  if (trials < kMinTailTrials) {
    throw std::invalid_argument("monte_carlo_tail_check: needs at least " + std::to_string(kMinTailTrials) +
                                " trials, got " + std::to_string(trials));
  }
  if (eps_grid.empty()) throw std::invalid_argument("monte_carlo_tail_check: empty eps grid");
  for (double e : eps_grid) {
    if (!std::isfinite(e)) throw std::invalid_argument("monte_carlo_tail_check: non-finite eps");
  }

  std::vector<double> stats(trials);
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(trials); ++t) {
    try {
      CounterRng rng(seed, static_cast<std::uint64_t>(t));
      const Vector x = sampler(rng);
      if (x.size() == 0 || !x.allFinite()) throw DataError("monte_carlo_tail_check: degenerate sample");
      const double value = statistic(x);
      if (!std::isfinite(value)) throw DataError("monte_carlo_tail_check: non-finite statistic");
      stats[static_cast<std::size_t>(t)] = value;
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(stats.begin(), stats.end());
  TailCheckReport report;
  report.trials = trials;
  const double n = static_cast<double>(trials);
  for (double eps : eps_grid) {
    // Count of draws strictly above eps.
    const auto above = stats.end() - std::upper_bound(stats.begin(), stats.end(), eps);
    TailCheckRow row;
    row.eps = eps;
    row.empirical = static_cast<double>(above) / n;
    row.bound = bound_fn(eps);
    row.flagged = row.empirical > row.bound + 3.0 * std::sqrt(row.bound * (1.0 - row.bound) / n);
    report.rows.push_back(row);
  }
  return report;
}

std::string to_string(HansonWrightSuite suite) {
  return suite == HansonWrightSuite::Gaussian ? "gaussian" : "uniform";
}

Matrix random_symmetric(Index dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("random_symmetric: dim must be >= 1");
  CounterRng rng(seed, 0xa11ce);
  std::normal_distribution<double> normal;
  Matrix A(dim, dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j <= i; ++j) {
      A(i, j) = scale * normal(rng);
      A(j, i) = A(i, j);
    }
  }
  return A;
}

std::vector<double> hanson_wright_eps_grid(double frob, double spec, std::size_t points) {
  require_norms(frob, spec);
  if (points < 2) throw std::invalid_argument("eps grid needs at least 2 points");
  // exp(-t/8) = 1e-3 at t = 8 ln 1000.
  const double t = 8.0 * std::log(1000.0);
  const double top = std::max(std::sqrt(t) * frob, t * spec);
  return linear_grid(0.0, top, points);
}

TailCheckReport hanson_wright_suite(HansonWrightSuite suite, Index dim, std::size_t trials, std::uint64_t seed,
                                    std::size_t points) {
  const Matrix A = random_symmetric(dim, seed);
  const double frob = A.norm();
  const double spec = spectral_norm(A);
  const double trace = A.trace();  // E[x^T A x] for unit-variance entries
  const auto grid = hanson_wright_eps_grid(frob, spec, points);

  VectorSampler sampler;
  TailBound bound;
  if (suite == HansonWrightSuite::Gaussian) {
    sampler = [dim](CounterRng& rng) {
      std::normal_distribution<double> normal;
      Vector x(dim);
      for (Index i = 0; i < dim; ++i) x(i) = normal(rng);
      return x;
    };
    bound = [frob, spec](double eps) { return gaussian_hw_tail(eps, frob, spec); };
  } else {
    sampler = [dim](CounterRng& rng) {
      Vector x(dim);
      for (Index i = 0; i < dim; ++i) x(i) = std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
      return x;
    };
    const double b = SubGaussianSpec::from_sigma(std::sqrt(3.0)).b;
    bound = [b, frob, spec](double eps) { return hanson_wright_tail(eps, b, frob, spec); };
  }
  const Statistic statistic = [&A, trace](const Vector& x) { return x.dot(A * x) - trace; };
  TailCheckReport report = monte_carlo_tail_check(sampler, statistic, bound, grid, trials, seed + 1);
  report.suite = to_string(suite) + "_dim" + std::to_string(dim);
  return report;
}

}  // namespace specbound
