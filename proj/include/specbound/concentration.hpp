#pragma once

#include "specbound/bounds.hpp"
#include "specbound/rng.hpp"
#include "specbound/types.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace specbound {

struct SubGaussianSpec {
  double sigma = 0.0;  // MGF parameter
  double b = 0.0;      // psi_2 bound

  // b = 2 sigma, the rounded-up psi_2 bound used throughout the certificates.
  static SubGaussianSpec from_sigma(double sigma);
};

struct SubExponentialSpec {
  double nu = 0.0;
  double alpha_se = 0.0;
};

// All tails are one-sided upper deviations and are capped at 1.

// min(1, 2 exp(-(1/2048) min{eps^2 / (b^4 ||A||_F^2), eps / (b^2 ||A||_2)})).
double hanson_wright_tail(double eps, double b, double frob, double spec);

// min(1, exp(-(1/8) min{eps^2 / ||A||_F^2, eps / ||A||_2})).
double gaussian_hw_tail(double eps, double frob, double spec);

// exp(-(1/2) min{t^2 / nu^2, t / alpha_se}).
double subexp_tail(double t, const SubExponentialSpec& spec);

// Right-hand sides of the scalar sub-Gaussian facts, parameterized by the
// psi_2 bound b or the MGF parameter sigma.
double lemma14_tail(double t, double b);                    // 2 e^{-t^2/b^2}, capped
double lemma14_even_moment(int k, double b);                // 2 b^{2k} k!
double lemma14_mgf(double lambda, double b);                // e^{4 lambda^2 b^2}
double lemma14_centered_square_moment(int k, double b);     // 2 (2 b^2)^k k!
double lemma14_square_mgf(double lambda, double b);         // e^{16 b^4 lambda^2}, |lambda| <= 1/(4 b^2)
double lemma14_psi2_from_sigma(double sigma);               // sqrt(8/3) sigma
double lemma14_variance_bound(double sigma);                // sigma^2

enum class Lemma14Fact { Tail, EvenMoment, Mgf, CenteredSquareMoment, SquareMgf, Psi2FromSigma, Variance };

struct Lemma14Params {
  double b = 0.0;
  double sigma = 0.0;
  double t = 0.0;
  double lambda = 0.0;
  int k = 0;
};

double lemma14_numeric(Lemma14Fact fact, const Lemma14Params& params);

// 10^{2n} c_mult exp(-c_exp min{eps^2/(c3^4 ||J||_F^2 Phi^2), eps/(c3^2 ||J||_2 Phi)}), capped at 1.
double data_matrix_tail(double eps, double frob, double spec, Index channels, double phi_inf,
                        const NoiseAssumption& assumption);

struct TailCheckRow {
  double eps = 0.0;
  double empirical = 0.0;
  double bound = 0.0;
  bool flagged = false;
};

struct TailCheckReport {
  std::string suite;
  std::size_t trials = 0;
  std::vector<TailCheckRow> rows;

  std::size_t flags() const;
};

using VectorSampler = std::function<Vector(CounterRng&)>;
using Statistic = std::function<double(const Vector&)>;
using TailBound = std::function<double(double)>;

// Empirical P(statistic > eps) over `trials` draws; trial i uses the stream
// (seed, i). Flags eps where empirical > bound + 3 sqrt(bound (1 - bound) / trials).
// Requires trials >= 10^4; throws DataError on empty or non-finite draws.
TailCheckReport monte_carlo_tail_check(const VectorSampler& sampler, const Statistic& statistic,
                                       const TailBound& bound_fn, const std::vector<double>& eps_grid,
                                       std::size_t trials, std::uint64_t seed);

inline constexpr std::size_t kMinTailTrials = 10000;

enum class HansonWrightSuite { Gaussian, Uniform };

std::string to_string(HansonWrightSuite suite);

// Symmetric dim x dim matrix with N(0, 1/dim) entries, fixed by the seed.
Matrix random_symmetric(Index dim, std::uint64_t seed);

// `points` deviations from 0 up to where the Gaussian bound reaches 1e-3.
std::vector<double> hanson_wright_eps_grid(double frob, double spec, std::size_t points = 20);

// x^T A x - E[x^T A x] for x standard normal (bounded by gaussian_hw_tail) or
// uniform on [-sqrt(3), sqrt(3)] (bounded by hanson_wright_tail at b = 2 sqrt(3)).
TailCheckReport hanson_wright_suite(HansonWrightSuite suite, Index dim, std::size_t trials, std::uint64_t seed,
                                    std::size_t points = 20);

}  // namespace specbound
