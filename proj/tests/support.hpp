#pragma once

// Brute-force reference implementations shared by the unit and acceptance tests.

#include "specbound/quadform.hpp"
#include "specbound/rng.hpp"
#include "specbound/types.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace specbound::testing {

inline Matrix gaussian_matrix(Index rows, Index cols, std::uint64_t seed) {
  CounterRng rng(seed, 0xda7a);
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

// sum_k e^{-j 2 pi s k} Y B[k] Y^T written out entry by entry.
inline CMatrix expanded_sum(const Matrix& Y, const Matrix& A, double s) {
  const Index n = Y.rows();
  const Index N = Y.cols();
  CMatrix out = CMatrix::Zero(n, n);
  for (Index k = -(N - 1); k <= N - 1; ++k) {
    const Complex phase = std::polar(1.0, -2.0 * std::numbers::pi * s * static_cast<double>(k));
    for (Index u = 0; u < N; ++u) {
      const Index t = u + k;
      if (t < 0 || t >= N) continue;
      if (A(t, u) == 0.0) continue;
      out += phase * A(t, u) * (Y.col(t) * Y.col(u).transpose()).cast<Complex>();
    }
  }
  return out;
}

// b[k] as a plain loop over the k-th diagonal.
inline double diagonal_sum(const Matrix& A, Index k) {
  const Index N = A.rows();
  double sum = 0.0;
  for (Index u = 0; u < N; ++u) {
    const Index t = u + k;
    if (t >= 0 && t < N) sum += A(t, u);
  }
  return sum;
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace specbound::testing
