#include "doctest.h"
#include "support.hpp"

#include "specbound/estimators.hpp"
#include "specbound/signals.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace specbound;
using specbound::testing::max_abs;

namespace {

// Mean and standard error of the lag-k sample autocovariance over `paths` paths.
std::pair<double, double> lag_statistics(const SpectrumModel& model, NoiseKind noise, Index N, int paths, Index k,
                                         std::uint64_t seed) {
  double sum = 0.0, sum_sq = 0.0;
  for (int p = 0; p < paths; ++p) {
    const Matrix y = sample(model, N, noise, seed, p).values();
    double acc = 0.0;
    for (Index t = k; t < N; ++t) acc += y(0, t) * y(0, t - k);
    const double v = acc / double(N - k);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / paths;
  return {mean, std::sqrt(std::max(sum_sq / paths - mean * mean, 0.0) / paths)};
}

}  // namespace

TEST_CASE("geometric model closed forms") {
  const SpectrumModel m = SpectrumModel::geometric(0.3);
  CHECK(exact_autocov(m, 2)(0, 0) == doctest::Approx(0.09));
  CHECK(exact_autocov(m, -3)(0, 0) == doctest::Approx(0.027));
  CHECK(psd(m, 0.0)(0, 0).real() == doctest::Approx(0.91 / 0.49));
  CHECK(psd(m, 0.0)(0, 0).real() == doctest::Approx(1.3 / 0.7));
  const PhiInf p = phi_inf(m);
  CHECK(p.exact);
  CHECK(p.value == doctest::Approx(13.0 / 7.0));
  const double grid = phi_inf_on_grid(m);
  CHECK(grid <= p.value + 1e-12);
  CHECK(p.value <= grid * 1.01);
  const R1Norm r1 = r1_norm(m);
  CHECK(r1.exact);
  CHECK(r1.value == doctest::Approx(13.0 / 7.0));
  CHECK(tail_sum(m, 3) == doctest::Approx(2.0 * 0.027 / 0.7));
  CHECK_THROWS_AS(SpectrumModel::geometric(1.0), std::invalid_argument);
  CHECK_THROWS_AS(SpectrumModel::geometric(-0.1), std::invalid_argument);
}

TEST_CASE("white noise model") {
  const SpectrumModel w = SpectrumModel::white_noise(3);
  CHECK(w.channels() == 3);
  CHECK(max_abs(psd(w, 0.27) - CMatrix::Identity(3, 3)) < 1e-15);
  CHECK(phi_inf(w).value == doctest::Approx(1.0));
  CHECK(r1_norm(w).value == doctest::Approx(1.0));
  CHECK(exact_autocov(w, 1).cwiseAbs().maxCoeff() == 0.0);
  CHECK(tail_sum(w, 1) == 0.0);
}

TEST_CASE("state-space example model") {
  const SpectrumModel m = SpectrumModel::example2();
  const StateSpace* ss = m.as_state_space();
  REQUIRE(ss != nullptr);
  CHECK(m.channels() == 3);
  CHECK(ss->A(0, 0) == 0.3);
  CHECK(ss->A(1, 0) == 1.0);
  CHECK(ss->A(1, 1) == 0.3);
  CHECK(ss->A(0, 1) == 0.0);

  SUBCASE("Gramian and lag zero") {
    const Matrix& X = ss->gramian;
    CHECK((X - (ss->A * X * ss->A.transpose() + ss->B * ss->B.transpose())).cwiseAbs().maxCoeff() < 1e-12);
    const Matrix R0 = ss->C * X * ss->C.transpose() + ss->D * ss->D.transpose();
    CHECK((exact_autocov(m, 0) - R0).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("lag reversal") {
    for (Index k = 1; k < 6; ++k)
      CHECK((exact_autocov(m, -k) - exact_autocov(m, k).transpose()).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("spectrum is Hermitian positive semidefinite") {
    for (double s : linear_grid(-0.5, 0.5, 1024)) {
      const CMatrix phi = psd(m, s);
      CHECK(max_abs(phi - phi.adjoint()) < 1e-12);
      Eigen::SelfAdjointEigenSolver<CMatrix> eig(phi);
      CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
    }
  }
  SUBCASE("spectrum equals the truncated transform within the tail") {
    const DecayCertificate cert = certify_decay(m, 0.5);
    const Index K = 64;
    const double remainder = 2.0 * cert.gamma * std::pow(cert.rho, K + 1) / (1.0 - cert.rho);
    for (double s : linear_grid(-0.5, 0.5, 256)) {
      CMatrix sum = CMatrix::Zero(3, 3);
      for (Index k = -K; k <= K; ++k)
        sum += std::polar(1.0, -2.0 * std::numbers::pi * s * k) * exact_autocov(m, k).cast<Complex>();
      CHECK(spectral_norm(CMatrix(psd(m, s) - sum)) <= remainder + 1e-12);
    }
  }
  SUBCASE("decay certificate") {
    const DecayCertificate cert = certify_decay(m, 0.5);
    CHECK(cert.rho == 0.5);
    CHECK(cert.kappa >= 1.0);
    for (Index k = 0; k <= 64; ++k)
      CHECK(spectral_norm(exact_autocov(m, k)) <= cert.gamma * std::pow(cert.rho, k) * (1.0 + 1e-12));
    CHECK_THROWS_AS(certify_decay(m, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(certify_decay(m, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(certify_decay(SpectrumModel::geometric(0.2), 0.5), std::invalid_argument);
  }
  SUBCASE("norms need a decay envelope") {
    CHECK_THROWS_AS(r1_norm(m), CapabilityError);
    const DecayCertificate cert = certify_decay(m, 0.5);
    const SpectrumModel certified = m.with_decay({cert.gamma, cert.rho});
    const R1Norm shallow = r1_norm(certified, 64);
    const R1Norm deep = r1_norm(certified, 256);
    CHECK(std::abs(shallow.value - deep.value) <= std::min(shallow.remainder, deep.remainder) + 1e-12);
    const PhiInf p = phi_inf(certified);
    CHECK_FALSE(p.exact);
    CHECK(p.value == doctest::Approx(1.01 * phi_inf_on_grid(certified)));
  }
}

TEST_CASE("static state-space system") {
  const SpectrumModel m =
      SpectrumModel::state_space(Matrix::Zero(1, 1), Matrix::Zero(1, 2), Matrix::Zero(2, 1), Matrix::Identity(2, 2));
  for (Index k = 1; k < 5; ++k) CHECK(exact_autocov(m, k).cwiseAbs().maxCoeff() == 0.0);
  CHECK((exact_autocov(m, 0) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
  const DecayCertificate cert = certify_decay(m, 0.1);
  CHECK(cert.gamma == doctest::Approx(1.0));
  CHECK_THROWS_AS(SpectrumModel::state_space(Matrix::Identity(2, 2), Matrix::Identity(2, 1), Matrix::Identity(1, 2),
                                             Matrix::Identity(1, 1)),
                  std::invalid_argument);
}

TEST_CASE("Lyapunov solver") {
  Matrix A(2, 2);
  A << 0.5, 0.1, -0.2, 0.4;
  const Matrix Q = Matrix::Identity(2, 2);
  const Matrix X = solve_discrete_lyapunov(A, Q);
  CHECK((X - A * X * A.transpose() - Q).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(spectral_radius(A) < 1.0);
}

TEST_CASE("sampling") {
  SUBCASE("determinism and stream separation") {
    const SpectrumModel m = SpectrumModel::geometric(0.3);
    const Matrix a = sample(m, 64, NoiseKind::Gaussian, 5, 2).values();
    const Matrix b = sample(m, 64, NoiseKind::Gaussian, 5, 2).values();
    const Matrix c = sample(m, 64, NoiseKind::Gaussian, 5, 3).values();
    CHECK(a == b);
    CHECK(a != c);
  }
  SUBCASE("white AR(1) has unit variance") {
    const SpectrumModel m = SpectrumModel::geometric(0.0);
    const Matrix y = sample(m, 100000, NoiseKind::Gaussian, 9).values();
    const double var = y.squaredNorm() / y.size();
    CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / y.size()));
  }
  SUBCASE("AR(1) autocovariance at lags 0..5") {
    const SpectrumModel m = SpectrumModel::geometric(0.3);
    for (NoiseKind noise : {NoiseKind::Gaussian, NoiseKind::UniformScaled}) {
      for (Index k = 0; k <= 5; ++k) {
        const auto [mean, se] = lag_statistics(m, noise, 4096, 200, k, 17);
        INFO("lag " << k);
        CHECK(std::abs(mean - std::pow(0.3, double(k))) < 3.0 * se);
      }
    }
  }
  SUBCASE("uniform noise is bounded by sqrt(3) when white") {
    const Matrix y = sample(SpectrumModel::geometric(0.0), 5000, NoiseKind::UniformScaled, 1).values();
    CHECK(y.cwiseAbs().maxCoeff() <= std::sqrt(3.0));
  }
  SUBCASE("state-space output covariance") {
    const SpectrumModel m = SpectrumModel::example2();
    const Matrix R0 = exact_autocov(m, 0);
    const int paths = 400;
    const Index N = 256;
    Matrix sum = Matrix::Zero(3, 3), sum_sq = Matrix::Zero(3, 3);
    for (int p = 0; p < paths; ++p) {
      const Matrix y = sample(m, N, NoiseKind::Gaussian, 23, p).values();
      const Matrix r = y * y.transpose() / double(N);
      sum += r;
      sum_sq += r.cwiseProduct(r);
    }
    const Matrix mean = sum / paths;
    const Matrix se = ((sum_sq / paths - mean.cwiseProduct(mean)) / paths).cwiseSqrt();
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 3; ++j) CHECK(std::abs(mean(i, j) - R0(i, j)) < 3.0 * se(i, j) + 1e-12);
  }
  SUBCASE("zero input with identity feedthrough is white") {
    const SpectrumModel m = SpectrumModel::state_space(Matrix::Constant(1, 1, 0.5), Matrix::Zero(1, 2),
                                                       Matrix::Ones(2, 1), Matrix::Identity(2, 2));
    const Matrix y = sample(m, 20000, NoiseKind::Gaussian, 4).values();
    const Matrix r1 = y.rightCols(19999) * y.leftCols(19999).transpose() / 19999.0;
    CHECK(r1.cwiseAbs().maxCoeff() < 4.0 / std::sqrt(19999.0));
  }
}

TEST_CASE("noise kind names") {
  CHECK(noise_kind_from_string("gaussian") == NoiseKind::Gaussian);
  CHECK(noise_kind_from_string("uniform") == NoiseKind::UniformScaled);
  CHECK_THROWS_AS(noise_kind_from_string("cauchy"), std::invalid_argument);
}
