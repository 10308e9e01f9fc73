#include "specbound/quadform.hpp"

#include "specbound/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace specbound {

namespace {

constexpr Index kDirectEigenLimit = 1024;

// ||A||_2 for symmetric A: direct eigensolve for small N, power iteration on
// A^2 (relative tolerance 1e-10) beyond.
double symmetric_spectral_norm(const Matrix& A) {
  const Index N = A.rows();
  if (N == 0) return 0.0;
  if (N <= kDirectEigenLimit) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(A, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().cwiseAbs().maxCoeff();
  }
  CounterRng rng(0x5eed, 0);
  Vector x(N);
  for (Index i = 0; i < N; ++i) x(i) = 1.0 + 0.1 * rng.uniform();
  x.normalize();
  double previous = 0.0;
  for (int iter = 0; iter < 20000; ++iter) {
    Vector y = A * x;
    const double estimate = y.norm();  // ||A x|| -> ||A||_2 along the dominant eigenvector
    if (estimate == 0.0) return 0.0;
    Vector z = A * y;
    x = z / z.norm();
    if (std::abs(estimate - previous) <= 1e-10 * estimate) return estimate;
    previous = estimate;
  }
  return previous;
}

// Largest |k| with a nonzero coefficient; -1 when b vanishes.
Index last_active_lag(const BiasCoefficients& b) {
  for (Index k = b.width() - 1; k >= 0; --k) {
    if (b[k] != 0.0 || b[-k] != 0.0) return k;
  }
  return -1;
}

CMatrix weighted_dtft(const std::vector<Matrix>& seq, Index last_lag, double s,
                      const auto& weight) {
  const Index n = seq.front().rows();
  CMatrix total = CMatrix::Zero(n, n);
  if (last_lag < 0) return total;
  total += weight(0) * seq[0].cast<Complex>();
  const CVector e = phasors(s, last_lag + 1);
  for (Index k = 1; k <= last_lag; ++k) {
    const double wp = weight(k);
    const double wm = weight(-k);
    if (wp == 0.0 && wm == 0.0) continue;
    const Matrix& R = seq[static_cast<std::size_t>(k)];
    total += (wp * e(k)) * R.cast<Complex>() + (wm * std::conj(e(k))) * R.transpose().cast<Complex>();
  }
  return total;
}

}  // namespace

QuadraticForm::QuadraticForm(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("QuadraticForm: A must be a non-empty square matrix");
  }
  if (!entries_.allFinite()) throw DataError("QuadraticForm: non-finite entry in A");
  if (entries_ != entries_.transpose()) {
    entries_ = 0.5 * (entries_ + entries_.transpose()).eval();
  }
  frobenius_norm_ = entries_.norm();
  spectral_norm_ = symmetric_spectral_norm(entries_);
  const Index N = size();
  truncation_width_ = 0;
  for (Index k = N - 1; k >= 0; --k) {
    if (entries_.diagonal(-k).cwiseAbs().maxCoeff() != 0.0) {
      truncation_width_ = k + 1;
      break;
    }
  }
}

double QuadraticForm::xi() const {
  return std::max(spectral_norm_, frobenius_norm_ * frobenius_norm_);
}

BiasCoefficients::BiasCoefficients(Index N, std::vector<double> values)
    : width_(N), values_(std::move(values)) {
  if (N < 0 || (N == 0 && !values_.empty()) ||
      (N > 0 && static_cast<Index>(values_.size()) != 2 * N - 1)) {
    throw std::invalid_argument("BiasCoefficients: expected 2N - 1 values");
  }
}

BiasCoefficients BiasCoefficients::symmetric(std::vector<double> nonnegative_lags) {
  const Index N = static_cast<Index>(nonnegative_lags.size());
  if (N == 0) return {};
  std::vector<double> values(static_cast<std::size_t>(2 * N - 1));
  for (Index k = 0; k < N; ++k) {
    values[static_cast<std::size_t>(N - 1 + k)] = nonnegative_lags[static_cast<std::size_t>(k)];
    values[static_cast<std::size_t>(N - 1 - k)] = nonnegative_lags[static_cast<std::size_t>(k)];
  }
  return {N, std::move(values)};
}

double BiasCoefficients::operator[](Index k) const {
  if (k <= -width_ || k >= width_) return 0.0;
  return values_[static_cast<std::size_t>(k + width_ - 1)];
}

CMatrix evaluate_generic(const DataMatrix& Y, const QuadraticForm& A, double s) {
  if (A.size() != Y.samples()) {
    throw std::invalid_argument("evaluate_generic: A is " + std::to_string(A.size()) +
                                " x " + std::to_string(A.size()) + " but Y has " +
                                std::to_string(Y.samples()) + " samples");
  }
  if (!std::isfinite(s)) throw std::invalid_argument("evaluate_generic: non-finite frequency");
  // W = Y D(-s); the estimate is W A W^*.
  const CVector e = phasors(s, Y.samples());
  const CMatrix W = Y.values().cast<Complex>() * e.asDiagonal();
  const CMatrix AWh = A.entries().cast<Complex>() * W.adjoint();
  return hermitian_part(W * AWh);
}

SpectralEstimate evaluate_generic(const DataMatrix& Y, const QuadraticForm& A,
                                  std::span<const double> grid) {
  validate_grid(grid);
  SpectralEstimate out;
  out.frequencies.assign(grid.begin(), grid.end());
  out.matrices.resize(grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(grid.size()); ++i) {
    out.matrices[static_cast<std::size_t>(i)] = evaluate_generic(Y, A, grid[static_cast<std::size_t>(i)]);
  }
  return out;
}

DiagonalProfile diagonal_profile(const QuadraticForm& A, Index k) {
  const Index N = A.size();
  if (k <= -N || k >= N) {
    throw std::invalid_argument("diagonal_profile: |k| = " + std::to_string(std::abs(k)) +
                                " must be below N = " + std::to_string(N));
  }
  // k >= 0 reads A_{k,0}, ..., A_{N-1,N-1-k} (sub-diagonal); k < 0 the super-diagonal.
  DiagonalProfile profile;
  profile.offset = k;
  profile.entries = A.entries().diagonal(-k);
  profile.spectral_norm = profile.entries.cwiseAbs().maxCoeff();
  profile.frobenius_norm = profile.entries.norm();
  return profile;
}

BiasCoefficients bias_coefficients(const QuadraticForm& A) {
  const Index N = A.size();
  std::vector<double> values(static_cast<std::size_t>(2 * N - 1));
  for (Index k = -(N - 1); k < N; ++k) {
    values[static_cast<std::size_t>(k + N - 1)] = A.entries().diagonal(-k).sum();
  }
  return {N, std::move(values)};
}

double norm_envelope(const QuadraticForm& A) {
  double g = A.xi();
  for (Index k = -(A.size() - 1); k < A.size(); ++k) {
    const auto profile = diagonal_profile(A, k);
    g = std::max({g, profile.spectral_norm, profile.frobenius_norm * profile.frobenius_norm});
  }
  return g;
}

CMatrix expected_estimate(const BiasCoefficients& b, const SpectrumModel& model, double s) {
  const Index last = last_active_lag(b);
  const auto seq = autocov_sequence(model, std::max<Index>(last, 0));
  return weighted_dtft(seq, last, s, [&](Index k) { return b[k]; });
}

CMatrix expected_estimate(const QuadraticForm& A, const SpectrumModel& model, double s) {
  return expected_estimate(bias_coefficients(A), model, s);
}

std::vector<CMatrix> expected_estimate(const BiasCoefficients& b, const SpectrumModel& model,
                                       std::span<const double> grid) {
  validate_grid(grid);
  const Index last = last_active_lag(b);
  const auto seq = autocov_sequence(model, std::max<Index>(last, 0));
  std::vector<CMatrix> out;
  out.reserve(grid.size());
  for (double s : grid) {
    out.push_back(weighted_dtft(seq, last, s, [&](Index k) { return b[k]; }));
  }
  return out;
}

double exact_bias_sup(const BiasCoefficients& b, const SpectrumModel& model,
                      std::span<const double> grid) {
  validate_grid(grid);
  const Index N = b.width();
  const double tail = tail_sum(model, N);
  if (N == 0) return tail;
  const auto seq = autocov_sequence(model, N - 1);
  double worst = 0.0;
  for (double s : grid) {
    const CMatrix gap = weighted_dtft(seq, N - 1, s, [&](Index k) { return 1.0 - b[k]; });
    worst = std::max(worst, spectral_norm(gap));
  }
  return worst + tail;
}

double exact_bias_sup(const QuadraticForm& A, const SpectrumModel& model,
                      std::span<const double> grid) {
  return exact_bias_sup(bias_coefficients(A), model, grid);
}

double grid_bias(const BiasCoefficients& b, const SpectrumModel& model,
                 std::span<const double> grid) {
  const auto expected = expected_estimate(b, model, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, spectral_norm(CMatrix(psd(model, grid[i]) - expected[i])));
  }
  return worst;
}

}  // namespace specbound
