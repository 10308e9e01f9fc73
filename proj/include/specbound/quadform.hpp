#pragma once

#include "specbound/signals.hpp"
#include "specbound/types.hpp"

#include <span>
#include <vector>

namespace specbound {

// Symmetric N x N weight matrix A of the estimator  Phi^(s) = Y D(-s) A D(s) Y^T,
// with D(s) = diag(1, e^{j2 pi s}, ..., e^{j2 pi (N-1) s}).
//
// The matrix is symmetrized on construction and its norms are computed once,
// so a QuadraticForm can be shared read-only between threads.
class QuadraticForm {
 public:
  explicit QuadraticForm(Matrix entries);

  Index size() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }

  double spectral_norm() const { return spectral_norm_; }
  double frobenius_norm() const { return frobenius_norm_; }
  // xi(A) = max{||A||_2, ||A||_F^2}.
  double xi() const;
  // Smallest N^ with B[k] = 0 for every |k| >= N^.
  Index truncation_width() const { return truncation_width_; }

 private:
  Matrix entries_;
  double spectral_norm_ = 0.0;
  double frobenius_norm_ = 0.0;
  Index truncation_width_ = 0;
};

// The k-th diagonal d[k] of A and the norms of the matrix B[k] that carries it:
// ||B[k]||_2 = ||d[k]||_inf, ||B[k]||_F = ||d[k]||_2.
struct DiagonalProfile {
  Index offset = 0;
  Vector entries;
  double spectral_norm = 0.0;
  double frobenius_norm = 0.0;
};

// b[k] for |k| < N, zero beyond.
class BiasCoefficients {
 public:
  BiasCoefficients() = default;
  // `values` lists b[-(N-1)], ..., b[N-1].
  BiasCoefficients(Index N, std::vector<double> values);
  // Builds an even sequence from b[0], ..., b[N-1].
  static BiasCoefficients symmetric(std::vector<double> nonnegative_lags);

  Index width() const { return width_; }
  double operator[](Index k) const;
  const std::vector<double>& values() const { return values_; }

 private:
  Index width_ = 0;
  std::vector<double> values_;
};

struct SpectralEstimate {
  std::vector<double> frequencies;
  std::vector<CMatrix> matrices;  // one n x n Hermitian matrix per frequency
};

// Y D(-s) A D(s) Y^T, symmetrized to exact Hermitian.
CMatrix evaluate_generic(const DataMatrix& Y, const QuadraticForm& A, double s);
SpectralEstimate evaluate_generic(const DataMatrix& Y, const QuadraticForm& A,
                                  std::span<const double> grid);

DiagonalProfile diagonal_profile(const QuadraticForm& A, Index k);

BiasCoefficients bias_coefficients(const QuadraticForm& A);

// Smallest g dominating ||A||_2, ||A||_F^2, ||B[k]||_2 and ||B[k]||_F^2 for all |k| < N.
double norm_envelope(const QuadraticForm& A);

// E[Phi^(s)] = sum_{|k|<N} e^{-j2 pi s k} b[k] R[k].
CMatrix expected_estimate(const BiasCoefficients& b, const SpectrumModel& model, double s);
CMatrix expected_estimate(const QuadraticForm& A, const SpectrumModel& model, double s);
std::vector<CMatrix> expected_estimate(const BiasCoefficients& b, const SpectrumModel& model,
                                       std::span<const double> grid);

// max over the grid of || sum_{|k|<N} e^{-j2 pi s k} (1 - b[k]) R[k] ||_2 plus the
// certified tail sum_{|l|>=N} ||R[l]||_2. Upper-bounds the bias on the grid.
double exact_bias_sup(const BiasCoefficients& b, const SpectrumModel& model,
                      std::span<const double> grid);
double exact_bias_sup(const QuadraticForm& A, const SpectrumModel& model,
                      std::span<const double> grid);

// max over the grid of ||Phi(s) - E[Phi^(s)]||_2 with Phi from the model's
// closed-form spectrum: the true bias restricted to the grid.
double grid_bias(const BiasCoefficients& b, const SpectrumModel& model,
                 std::span<const double> grid);

}  // namespace specbound
