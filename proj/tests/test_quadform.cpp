#include "doctest.h"
#include "support.hpp"

#include "specbound/estimators.hpp"
#include "specbound/quadform.hpp"
#include "specbound/signals.hpp"

#include <cmath>
#include <numbers>

using namespace specbound;
using specbound::testing::expanded_sum;
using specbound::testing::gaussian_matrix;
using specbound::testing::max_abs;

namespace {

Matrix random_symmetric_matrix(Index N, std::uint64_t seed) {
  const Matrix G = gaussian_matrix(N, N, seed);
  return (G + G.transpose()) / 2.0;
}

Matrix bartlett_2x2() { return build_matrix(EstimatorSpec::bartlett(2, 2)).entries(); }

}  // namespace

TEST_CASE("DataMatrix rejects empty shapes and non-finite samples") {
  CHECK_THROWS_AS(DataMatrix(Matrix(0, 3)), std::invalid_argument);
  Matrix bad = Matrix::Ones(1, 3);
  bad(0, 1) = std::nan("");
  CHECK_THROWS_AS(DataMatrix{bad}, DataError);
}

TEST_CASE("QuadraticForm symmetrizes and caches norms") {
  Matrix A(2, 2);
  A << 1.0, 2.0, 0.0, 1.0;
  const QuadraticForm q(A);
  CHECK(q.entries()(0, 1) == doctest::Approx(1.0));
  CHECK(q.entries()(1, 0) == q.entries()(0, 1));
  CHECK(q.spectral_norm() == doctest::Approx(2.0));
  CHECK(q.frobenius_norm() == doctest::Approx(2.0));
  CHECK(q.truncation_width() == 2);
  CHECK(q.xi() == doctest::Approx(4.0));

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const QuadraticForm r(random_symmetric_matrix(9, seed));
    CHECK(r.spectral_norm() <= r.frobenius_norm() + 1e-12);
    CHECK(r.truncation_width() <= r.size());
  }
}

TEST_CASE("evaluate_generic small cases") {
  SUBCASE("2x2 hand expansion at s = 1/4") {
    const DataMatrix Y(Matrix::Ones(1, 2));
    const QuadraticForm A(Matrix::Constant(2, 2, 0.5));
    const CMatrix phi = evaluate_generic(Y, A, 0.25);
    CHECK(phi(0, 0).real() == doctest::Approx(1.0));
    CHECK(std::abs(phi(0, 0).imag()) < 1e-15);
  }
  SUBCASE("s = 0 reduces to Y A Y^T") {
    const Matrix Y = gaussian_matrix(2, 6, 3);
    const Matrix A = random_symmetric_matrix(6, 4);
    const CMatrix phi = evaluate_generic(DataMatrix(Y), QuadraticForm(A), 0.0);
    const Matrix direct = Y * A * Y.transpose();
    CHECK(max_abs(phi - direct.cast<Complex>()) < 1e-12);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(evaluate_generic(DataMatrix(Matrix::Ones(1, 3)), QuadraticForm(Matrix::Identity(4, 4)), 0.1),
                    std::invalid_argument);
  }
}

TEST_CASE("evaluate_generic matches the lag-expanded sum") {
  const std::vector<double> grid = linear_grid(-0.5, 0.5, 17);
  for (Index n : {1, 2, 3}) {
    const Matrix Y = gaussian_matrix(n, 12, static_cast<std::uint64_t>(n));
    const Matrix A = random_symmetric_matrix(12, 100 + static_cast<std::uint64_t>(n));
    const SpectralEstimate est = evaluate_generic(DataMatrix(Y), QuadraticForm(A), grid);
    REQUIRE(est.matrices.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(max_abs(est.matrices[i] - expanded_sum(Y, A, grid[i])) < 1e-10);
      CHECK(max_abs(est.matrices[i] - est.matrices[i].adjoint()) == 0.0);
    }
  }
}

TEST_CASE("estimates are conjugate-symmetric in frequency for real data") {
  const Matrix Y = gaussian_matrix(2, 10, 7);
  const QuadraticForm A(random_symmetric_matrix(10, 8));
  for (double s : {0.05, 0.17, 0.33, 0.5}) {
    const CMatrix plus = evaluate_generic(DataMatrix(Y), A, s);
    const CMatrix minus = evaluate_generic(DataMatrix(Y), A, -s);
    CHECK(max_abs(minus - plus.conjugate()) < 1e-12);
  }
}

TEST_CASE("diagonal_profile") {
  SUBCASE("scaled ones") {
    const Index N = 5;
    const QuadraticForm A(Matrix::Constant(N, N, 1.0 / N));
    for (Index k = -(N - 1); k < N; ++k) {
      const DiagonalProfile p = diagonal_profile(A, k);
      CHECK(p.entries.size() == N - std::abs(k));
      CHECK(p.spectral_norm == doctest::Approx(1.0 / N));
      CHECK(p.frobenius_norm * p.frobenius_norm == doctest::Approx(double(N - std::abs(k)) / (N * N)));
    }
  }
  SUBCASE("Bartlett M = 2, L = 2, first subdiagonal") {
    const DiagonalProfile p = diagonal_profile(QuadraticForm(bartlett_2x2()), 1);
    REQUIRE(p.entries.size() == 3);
    CHECK(p.entries(0) == doctest::Approx(0.25));
    CHECK(p.entries(1) == 0.0);
    CHECK(p.entries(2) == doctest::Approx(0.25));
    CHECK(p.spectral_norm == doctest::Approx(0.25));
    CHECK(p.frobenius_norm * p.frobenius_norm == doctest::Approx(2.0 / 16.0));
  }
  SUBCASE("out-of-range offset") {
    CHECK_THROWS_AS(diagonal_profile(QuadraticForm(Matrix::Identity(3, 3)), 3), std::invalid_argument);
    CHECK_THROWS_AS(diagonal_profile(QuadraticForm(Matrix::Identity(3, 3)), -3), std::invalid_argument);
  }
}

TEST_CASE("diagonal profile norms, symmetry and reconstruction") {
  const Index N = 11;
  const QuadraticForm A(random_symmetric_matrix(N, 21));
  Matrix rebuilt = Matrix::Zero(N, N);
  for (Index k = -(N - 1); k < N; ++k) {
    const DiagonalProfile p = diagonal_profile(A, k);
    CHECK(p.spectral_norm == p.entries.cwiseAbs().maxCoeff());
    CHECK(p.frobenius_norm == p.entries.norm());
    CHECK(p.spectral_norm <= p.frobenius_norm);
    CHECK(p.spectral_norm == diagonal_profile(A, -k).spectral_norm);
    for (Index i = 0; i < p.entries.size(); ++i) {
      if (k >= 0)
        rebuilt(i + k, i) += p.entries(i);
      else
        rebuilt(i, i - k) += p.entries(i);
    }
  }
  CHECK((rebuilt - A.entries()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bias_coefficients") {
  SUBCASE("biased periodogram, N = 4") {
    const BiasCoefficients b = bias_coefficients(QuadraticForm(Matrix::Constant(4, 4, 0.25)));
    CHECK(b[1] == doctest::Approx(0.75));
    CHECK(b[0] == doctest::Approx(1.0));
    CHECK(b[4] == 0.0);
    CHECK(b[-7] == 0.0);
  }
  SUBCASE("Bartlett M = 2, L = 2") {
    const BiasCoefficients b = bias_coefficients(QuadraticForm(bartlett_2x2()));
    CHECK(b[1] == doctest::Approx(0.5));
    CHECK(b[2] == 0.0);
  }
  SUBCASE("b[k] is the diagonal sum and is even") {
    const QuadraticForm A(random_symmetric_matrix(9, 5));
    const BiasCoefficients b = bias_coefficients(A);
    for (Index k = -8; k <= 8; ++k) {
      CHECK(b[k] == doctest::Approx(diagonal_profile(A, k).entries.sum()).epsilon(1e-14));
      CHECK(b[k] == doctest::Approx(specbound::testing::diagonal_sum(A.entries(), k)).epsilon(1e-14));
      CHECK(b[k] == b[-k]);
    }
  }
}

TEST_CASE("expected_estimate") {
  SUBCASE("white noise keeps only lag zero") {
    const QuadraticForm A(random_symmetric_matrix(6, 9));
    const double b0 = bias_coefficients(A)[0];
    const SpectrumModel white = SpectrumModel::white_noise(2);
    for (double s : {-0.4, 0.0, 0.21}) {
      const CMatrix e = expected_estimate(A, white, s);
      CHECK(max_abs(e - b0 * CMatrix::Identity(2, 2)) < 1e-12);
    }
  }
  SUBCASE("Bartlett on AR(1) matches the triangular-weighted sum") {
    const double rho = 0.3;
    const Index M = 4;
    const QuadraticForm A = build_matrix(EstimatorSpec::bartlett(M, 3));
    const SpectrumModel model = SpectrumModel::geometric(rho);
    for (double s : {0.0, 0.1, 0.37}) {
      Complex direct = 0.0;
      for (Index k = -(M - 1); k < M; ++k)
        direct += std::polar(1.0, -2.0 * std::numbers::pi * s * k) * (1.0 - std::abs(double(k)) / M) *
                  std::pow(rho, std::abs(double(k)));
      CHECK(std::abs(expected_estimate(A, model, s)(0, 0) - direct) < 1e-12);
    }
  }
  SUBCASE("Monte Carlo mean of the Bartlett estimate") {
    const double rho = 0.3;
    const EstimatorSpec spec = EstimatorSpec::bartlett(4, 2);
    const QuadraticForm A = build_matrix(spec);
    const SpectrumModel model = SpectrumModel::geometric(rho);
    const double s = 0.1;
    const int trials = 10000;
    double sum = 0.0, sum_sq = 0.0;
    for (int t = 0; t < trials; ++t) {
      const DataMatrix Y = sample(model, spec.samples(), NoiseKind::Gaussian, 77, static_cast<std::uint64_t>(t));
      const double v = evaluate_generic(Y, A, s)(0, 0).real();
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / trials;
    const double se = std::sqrt((sum_sq / trials - mean * mean) / trials);
    CHECK(std::abs(mean - expected_estimate(A, model, s)(0, 0).real()) < 3.0 * se);
  }
  SUBCASE("unit coefficients give the truncated transform") {
    const Index N = 6;
    const BiasCoefficients ones(N, std::vector<double>(2 * N - 1, 1.0));
    const SpectrumModel model = SpectrumModel::geometric(0.5);
    const double s = 0.2;
    Complex direct = 0.0;
    for (Index k = -(N - 1); k < N; ++k)
      direct += std::polar(1.0, -2.0 * std::numbers::pi * s * k) * std::pow(0.5, std::abs(double(k)));
    CHECK(std::abs(expected_estimate(ones, model, s)(0, 0) - direct) < 1e-12);
  }
}

TEST_CASE("exact_bias_sup") {
  SUBCASE("unit coefficients leave the truncation tail") {
    const Index N = 10;
    const double rho = 0.3;
    const EstimatorSpec spec = EstimatorSpec::unbiased_periodogram(N);
    const double bound = 2.0 * std::pow(rho, N) / (1.0 - rho);
    const double sup = exact_bias_sup(build_matrix(spec), SpectrumModel::geometric(rho), half_band_grid());
    // Equality at s = 0; Phi - E Phi^ cancels two O(1) terms, so allow O(1) rounding.
    CHECK(sup <= bound + 1e-14);
    CHECK(sup == doctest::Approx(bound).epsilon(1e-9));
    CHECK(sup > 0.0);
  }
  SUBCASE("single frequency, white noise") {
    const QuadraticForm A(Matrix::Constant(4, 4, 0.1));
    const std::vector<double> grid{0.0};
    CHECK(exact_bias_sup(A, SpectrumModel::white_noise(1), grid) == doctest::Approx(0.6));
  }
  SUBCASE("Welch Hann on the AR(1) model dominates the grid bias") {
    const EstimatorSpec spec = EstimatorSpec::welch(32, 16, 8, WindowKind::Hann);
    const SpectrumModel model = SpectrumModel::geometric(0.3);
    const BiasCoefficients b = closed_form_bias(spec);
    const double upper = exact_bias_sup(b, model, half_band_grid());
    const double exact = grid_bias(b, model, half_band_grid());
    CHECK(exact > 0.0);
    CHECK(exact <= upper * (1.0 + 1e-12));
  }
}
