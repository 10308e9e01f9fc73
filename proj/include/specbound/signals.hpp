#pragma once

#include "specbound/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace specbound {

// Driving noise for the scalar AR-type process.
enum class NoiseKind {
  Gaussian,
  UniformScaled,  // uniform on [-sqrt(3), sqrt(3)]: unit variance, sqrt(3)-sub-Gaussian
};

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

// Envelope ||R[k]||_2 <= gamma rho^{|k|}.
struct DecayPair {
  double gamma = 1.0;
  double rho = 0.0;
};

struct WhiteNoise {
  Index channels = 1;
};

// Unit-variance AR(1): R[k] = rho^{|k|}.
struct GeometricScalar {
  double rho = 0.0;
};

// x[k+1] = A x[k] + B z[k],  y[k] = C x[k] + D z[k],  z i.i.d. N(0, I).
struct StateSpace {
  Matrix A, B, C, D;
  Matrix gramian;  // stationary state covariance X = A X A^T + B B^T
};

class SpectrumModel {
 public:
  using Kind = std::variant<WhiteNoise, GeometricScalar, StateSpace>;

  static SpectrumModel white_noise(Index channels);
  static SpectrumModel geometric(double rho);
  // Throws std::invalid_argument on inconsistent shapes or spectral radius >= 1.
  static SpectrumModel state_space(Matrix A, Matrix B, Matrix C, Matrix D);

  // The three-output system used in the state-space numerical study.
  static SpectrumModel example2();

  // Attach a decay envelope (state-space models have none until certified).
  SpectrumModel with_decay(DecayPair decay) const;

  const Kind& kind() const { return kind_; }
  Index channels() const;
  const std::optional<DecayPair>& decay() const { return decay_; }
  const StateSpace* as_state_space() const { return std::get_if<StateSpace>(&kind_); }
  std::string name() const;

 private:
  explicit SpectrumModel(Kind kind, std::optional<DecayPair> decay)
      : kind_(std::move(kind)), decay_(decay) {}

  Kind kind_;
  std::optional<DecayPair> decay_;
};

// R[k] = E[y[i+k] y[i]^T]; R[-k] = R[k]^T.
Matrix exact_autocov(const SpectrumModel& model, Index k);

// R[0], ..., R[max_lag] computed recursively.
std::vector<Matrix> autocov_sequence(const SpectrumModel& model, Index max_lag);

// Phi(s) = H(s) H(s)^* (state space) or the closed form for the scalar model.
CMatrix psd(const SpectrumModel& model, double s);

struct PhiInf {
  double value;
  bool exact;  // false: grid maximum times a 1.01 safety factor
};

// sup_s ||Phi(s)||_2.
PhiInf phi_inf(const SpectrumModel& model);

// Raw maximum of ||Phi(s)||_2 over a grid of `points` on [-1/2, 1/2].
double phi_inf_on_grid(const SpectrumModel& model, std::size_t points = 4096);

struct R1Norm {
  double value;      // certified upper bound on sum_k ||R[k]||_2
  double remainder;  // analytic tail included in value (0 when exact)
  bool exact;
};

// ||R||_1. State-space models sum |k| <= depth and add the envelope remainder.
R1Norm r1_norm(const SpectrumModel& model, Index depth = 256);

// Certified upper bound on sum_{|k| >= from_lag} ||R[k]||_2.
double tail_sum(const SpectrumModel& model, Index from_lag);

struct DecayCertificate {
  double gamma;
  double rho;
  double kappa;  // condition number of P
  Matrix P;      // P = (A/rho)^T P (A/rho) + I
  Matrix gramian;
};

// Decay envelope for a state-space model; rho_target must lie strictly
// between the spectral radius of A and 1.
DecayCertificate certify_decay(const SpectrumModel& model, double rho_target);

// Solves X = A X A^T + Q by doubling (A must be Schur stable).
Matrix solve_discrete_lyapunov(const Matrix& A, const Matrix& Q);

double spectral_radius(const Matrix& A);

// Stationary AR(1) path y[k] = rho y[k-1] + sqrt(1 - rho^2) z[k].
DataMatrix sample_geometric(double rho, Index N, NoiseKind noise, std::uint64_t seed,
                            std::uint64_t path = 0);

// Stationary state-space path with x[0] drawn from N(0, X).
DataMatrix sample_state_space(const SpectrumModel& model, Index N, std::uint64_t seed,
                              std::uint64_t path = 0);

// Dispatches on the model kind. White noise uses `noise` per entry; the
// state-space sampler is Gaussian only.
DataMatrix sample(const SpectrumModel& model, Index N, NoiseKind noise, std::uint64_t seed,
                  std::uint64_t path = 0);

}  // namespace specbound
