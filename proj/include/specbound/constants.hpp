#pragma once

// Every numeric constant that enters a concentration bound lives here.

namespace specbound::constants {

// Multiplier, exponent and sub-Gaussian scale of the data-matrix concentration
// bound  10^{2n} c_mult exp(-c_exp min{...}).
struct ConcentrationTriple {
  double c_mult;
  double c_exp;
};

inline constexpr ConcentrationTriple kGaussian{2.0, 1.0 / 32.0};
inline constexpr ConcentrationTriple kSubGaussian{4.0, 1.0 / 524288.0};  // 2^-19

// Exponent and prefactor of the explicit-constant Hanson-Wright inequality.
inline constexpr double kHansonWrightExp = 1.0 / 2048.0;
inline constexpr double kHansonWrightMult = 2.0;

// Exponent of the Gaussian Hanson-Wright specialization (prefactor 1).
inline constexpr double kGaussianHansonWrightExp = 1.0 / 8.0;

// Exponent of the weighted sum-of-squares tail bound.
inline constexpr double kSquaresTailExp = 1.0 / 64.0;

// psi_2 norm from the MGF parameter: ||x||_psi2 <= sqrt(8/3) sigma.
inline constexpr double kPsi2FromSigmaSquared = 8.0 / 3.0;

// Covering-number base in the worst-case bound: log(5 N^2).
inline constexpr double kCoveringBase = 5.0;

}  // namespace specbound::constants
