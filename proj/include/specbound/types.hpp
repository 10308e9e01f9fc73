#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace specbound {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Sample data is unusable: non-finite entries, degenerate Monte Carlo draws.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The model or input lacks something the operation needs (e.g. an
// autocovariance decay envelope, or g/N^ for a periodogram).
class CapabilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// n x N real sample matrix: row c is channel c, column t is time t.
class DataMatrix {
 public:
  explicit DataMatrix(Matrix values);

  Index channels() const { return values_.rows(); }
  Index samples() const { return values_.cols(); }
  const Matrix& values() const { return values_; }

 private:
  Matrix values_;
};

// Closed, linearly spaced grid including both endpoints.
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

// The evaluation grid on [0, 1/2]; 101 points by default.
std::vector<double> half_band_grid(std::size_t points = 101);

// Grid on the full band [-1/2, 1/2].
std::vector<double> full_band_grid(std::size_t points);

// Throws std::invalid_argument unless every frequency lies in [-1/2, 1/2].
void validate_grid(std::span<const double> grid);

// Largest singular value of a small dense matrix.
double spectral_norm(const Matrix& m);
double spectral_norm(const CMatrix& m);

// (M + M^*) / 2.
CMatrix hermitian_part(const CMatrix& m);

// e^{-j 2 pi s t} for t = 0, ..., length - 1.
CVector phasors(double s, Index length);

}  // namespace specbound
