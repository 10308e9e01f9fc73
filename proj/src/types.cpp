#include "specbound/types.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace specbound {

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw std::invalid_argument("DataMatrix: need at least one channel and one sample");
  }
  if (!values_.allFinite()) {
    throw DataError("DataMatrix: non-finite sample value");
  }
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points == 0) throw std::invalid_argument("linear_grid: need at least one point");
  if (!(lo <= hi)) throw std::invalid_argument("linear_grid: lo must not exceed hi");
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = lo;
    return grid;
  }
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = lo + step * static_cast<double>(i);
  grid.back() = hi;
  return grid;
}

std::vector<double> half_band_grid(std::size_t points) { return linear_grid(0.0, 0.5, points); }

std::vector<double> full_band_grid(std::size_t points) { return linear_grid(-0.5, 0.5, points); }

void validate_grid(std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("frequency grid is empty");
  for (double s : grid) {
    if (!std::isfinite(s) || s < -0.5 || s > 0.5) {
      throw std::invalid_argument("frequency " + std::to_string(s) + " outside [-1/2, 1/2]");
    }
  }
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

CVector phasors(double s, Index length) {
  CVector out(length);
  const double w = -2.0 * std::numbers::pi * s;
  for (Index t = 0; t < length; ++t) out(t) = std::polar(1.0, w * static_cast<double>(t));
  return out;
}

}  // namespace specbound
