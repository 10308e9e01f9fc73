#include "doctest.h"

#include "specbound/bounds.hpp"
#include "specbound/concentration.hpp"
#include "specbound/constants.hpp"

#include <cmath>
#include <random>

using namespace specbound;

TEST_CASE("constants table") {
  CHECK(constants::kGaussian.c_mult == 2.0);
  CHECK(constants::kGaussian.c_exp == 1.0 / 32.0);
  CHECK(constants::kSubGaussian.c_mult == 4.0);
  CHECK(constants::kSubGaussian.c_exp == std::ldexp(1.0, -19));
  CHECK(constants::kHansonWrightExp == 1.0 / 2048.0);
  CHECK(constants::kGaussianHansonWrightExp == 1.0 / 8.0);
}

TEST_CASE("Hanson-Wright tail") {
  CHECK(hanson_wright_tail(0.0, 1.0, 1.0, 1.0) == 1.0);
  CHECK(hanson_wright_tail(2048.0, 1.0, 1.0, 1.0) == doctest::Approx(2.0 * std::exp(-1.0)));
  double prev = 1.0;
  for (double eps = 0.0; eps < 1e5; eps = eps * 1.5 + 1.0) {
    const double p = hanson_wright_tail(eps, 1.3, 2.0, 1.1);
    CHECK(p <= prev);
    CHECK(p > 0.0);
    CHECK(p <= 1.0);
    prev = p;
  }
  CHECK_THROWS_AS(hanson_wright_tail(-1.0, 1.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(hanson_wright_tail(1.0, 1.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("Gaussian Hanson-Wright tail") {
  // eps^2 / F^2 = eps / S = 8 at eps = 8, F = sqrt(8), S = 1.
  CHECK(gaussian_hw_tail(8.0, std::sqrt(8.0), 1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(gaussian_hw_tail(0.0, 1.0, 1.0) == 1.0);
  for (double eps = 0.01; eps < 1e5; eps *= 1.7)
    CHECK(gaussian_hw_tail(eps, 1.0, 1.0) <= hanson_wright_tail(eps, 1.0, 1.0, 1.0));
  for (double eps = 50.0; eps < 1e5; eps *= 1.7)
    CHECK(gaussian_hw_tail(eps, 1.0, 1.0) < hanson_wright_tail(eps, 1.0, 1.0, 1.0));
}

TEST_CASE("sub-exponential tail") {
  const SubExponentialSpec spec{2.0, 0.5};
  CHECK(subexp_tail(spec.nu * spec.nu / spec.alpha_se, spec) ==
        doctest::Approx(std::exp(-spec.nu * spec.nu / (2 * spec.alpha_se * spec.alpha_se))));
  CHECK(subexp_tail(0.0, spec) == 1.0);
  CHECK(subexp_tail(2.0, {1.0, 1.0}) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("scalar sub-Gaussian facts") {
  CHECK(lemma14_even_moment(1, 1.0) == 2.0);
  CHECK(lemma14_even_moment(3, 2.0) == doctest::Approx(2.0 * std::pow(2.0, 6) * 6.0));
  CHECK(lemma14_psi2_from_sigma(std::sqrt(3.0)) == doctest::Approx(std::sqrt(8.0)));
  CHECK(lemma14_psi2_from_sigma(std::sqrt(3.0)) <= 2.0 * std::sqrt(3.0));
  CHECK(lemma14_variance_bound(std::sqrt(3.0)) == doctest::Approx(3.0));
  CHECK(lemma14_tail(1.0, 1.0) == doctest::Approx(2.0 * std::exp(-1.0)));
  CHECK(lemma14_tail(0.0, 1.0) == 1.0);
  CHECK(lemma14_mgf(0.5, 1.0) == doctest::Approx(std::exp(1.0)));
  CHECK(lemma14_centered_square_moment(2, 1.0) == doctest::Approx(16.0));
  CHECK(lemma14_square_mgf(0.25, 1.0) == doctest::Approx(std::exp(1.0)));
  CHECK_THROWS_AS(lemma14_square_mgf(0.3, 1.0), std::invalid_argument);

  Lemma14Params p;
  p.sigma = std::sqrt(3.0);
  CHECK(lemma14_numeric(Lemma14Fact::Psi2FromSigma, p) == doctest::Approx(std::sqrt(8.0)));
  p.b = 1.0;
  p.k = 1;
  CHECK(lemma14_numeric(Lemma14Fact::EvenMoment, p) == 2.0);
  p.lambda = 1.0;
  CHECK_THROWS_AS(lemma14_numeric(Lemma14Fact::SquareMgf, p), std::invalid_argument);

  // Uniform on [-sqrt(3), sqrt(3)] has unit variance, below sigma^2 = 3.
  CHECK(1.0 <= lemma14_variance_bound(std::sqrt(3.0)));
  const SubGaussianSpec spec = SubGaussianSpec::from_sigma(std::sqrt(3.0));
  CHECK(spec.b == doctest::Approx(2.0 * std::sqrt(3.0)));
  CHECK(lemma14_psi2_from_sigma(spec.sigma) <= spec.b);
}

TEST_CASE("the data-matrix tail at the pointwise bound equals delta") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double phi = 0.2 + 4.0 * u(gen);
    const double xi = std::pow(10.0, -5.0 * u(gen));
    const double delta = 0.001 + 0.9 * u(gen);
    const Index n = 1 + i % 3;
    const NoiseAssumption a = i % 2 ? NoiseAssumption::gaussian() : NoiseAssumption::sub_gaussian(1.0 + 2.0 * u(gen));
    const BoundContext ctx = make_context(a, phi, 1.0, n);
    const double eps = corollary1_pointwise(xi, delta, ctx);
    // With ||J||_2 = ||J||_F^2 = xi the bound form inverts exactly.
    const double p = data_matrix_tail(eps, std::sqrt(xi), xi, n, phi, a);
    CHECK(std::abs(p - delta) <= 1e-9 * delta);
  }
}

TEST_CASE("Monte Carlo tail check plumbing") {
  const VectorSampler normal = [](CounterRng& rng) {
    std::normal_distribution<double> d;
    Vector x(3);
    for (Index i = 0; i < 3; ++i) x(i) = d(rng);
    return x;
  };
  SUBCASE("zero statistic never exceeds") {
    const TailCheckReport r = monte_carlo_tail_check(
        normal, [](const Vector&) { return 0.0; }, [](double) { return 0.5; }, {0.1, 1.0}, kMinTailTrials, 1);
    for (const auto& row : r.rows) CHECK(row.empirical == 0.0);
    CHECK(r.flags() == 0);
  }
  SUBCASE("a bound that is too small is flagged") {
    const TailCheckReport r = monte_carlo_tail_check(
        normal, [](const Vector& x) { return x(0); }, [](double) { return 0.01; }, {0.0}, kMinTailTrials, 1);
    CHECK(r.rows[0].empirical == doctest::Approx(0.5).epsilon(0.05));
    CHECK(r.flags() == 1);
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(monte_carlo_tail_check(normal, [](const Vector&) { return 0.0; }, [](double) { return 1.0; },
                                           {0.1}, 10, 1),
                    std::invalid_argument);
    const VectorSampler empty = [](CounterRng&) { return Vector(); };
    CHECK_THROWS_AS(monte_carlo_tail_check(empty, [](const Vector&) { return 0.0; }, [](double) { return 1.0; },
                                           {0.1}, kMinTailTrials, 1),
                    DataError);
  }
  SUBCASE("reports are reproducible") {
    const auto a = hanson_wright_suite(HansonWrightSuite::Gaussian, 4, kMinTailTrials, 3, 5);
    const auto b = hanson_wright_suite(HansonWrightSuite::Gaussian, 4, kMinTailTrials, 3, 5);
    REQUIRE(a.rows.size() == 5);
    for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].empirical == b.rows[i].empirical);
    CHECK(a.rows.front().eps == 0.0);
  }
}

TEST_CASE("random symmetric matrices and the deviation grid") {
  const Matrix A = random_symmetric(6, 11);
  CHECK((A - A.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(A == random_symmetric(6, 11));
  const std::vector<double> grid = hanson_wright_eps_grid(2.0, 1.0, 20);
  REQUIRE(grid.size() == 20);
  CHECK(grid.front() == 0.0);
  CHECK(gaussian_hw_tail(grid.back(), 2.0, 1.0) == doctest::Approx(1e-3).epsilon(1e-6));
}
