#pragma once

#include "specbound/estimators.hpp"
#include "specbound/quadform.hpp"
#include "specbound/signals.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace specbound {

struct NoiseAssumption {
  enum class Kind { Gaussian, SubGaussian };

  static NoiseAssumption gaussian() { return {Kind::Gaussian, 1.0}; }
  // Throws std::invalid_argument unless sigma >= 1.
  static NoiseAssumption sub_gaussian(double sigma);

  Kind kind = Kind::Gaussian;
  double sigma = 1.0;

  std::string name() const;
};

struct BoundConstants {
  double c_mult;
  double c_exp;
  double c_subgauss;
};

BoundConstants constants_for(const NoiseAssumption& assumption);

enum class R1Source { Exact, Envelope, Supplied };

std::string to_string(R1Source source);

// Everything the certificates need to know about the process.
struct BoundContext {
  NoiseAssumption assumption;
  double phi_inf = 0.0;
  double r1 = 0.0;
  R1Source r1_source = R1Source::Supplied;
  Index channels = 1;
  std::optional<DecayPair> decay;
  // Certified sum_{|k| >= K} ||R[k]||_2; when empty, the decay envelope is used.
  std::function<double(Index)> tail;
};

// Pulls ||Phi||_inf, ||R||_1, the decay pair and the exact tail from the model.
// A decay pair attached to the model is checked for |k| <= 64.
BoundContext make_context(const SpectrumModel& model, NoiseAssumption assumption);

// User-supplied context values; validates ranges.
BoundContext make_context(NoiseAssumption assumption, double phi_inf, double r1, Index channels,
                          std::optional<DecayPair> decay = std::nullopt);

enum class CertificateStatus { Holds, Fails, Value, Unavailable };

std::string to_string(CertificateStatus status);

struct Certificate {
  std::string statement;
  double epsilon = 0.0;
  double delta = 0.0;
  // Error level of the conclusion (2 eps for the combined parts).
  double conclusion_epsilon = 0.0;
  std::vector<std::pair<std::string, double>> inputs;
  CertificateStatus status = CertificateStatus::Unavailable;
  double value = 0.0;  // bound value for Value certificates
  double lhs = 0.0;    // condition sides for Holds/Fails
  double rhs = 0.0;
  std::string note;

  bool holds() const { return status == CertificateStatus::Holds; }
};

// key=value;... record.
std::string to_record(const Certificate& cert);

double alpha(double eps, const BoundContext& ctx);
double beta(double delta, const BoundContext& ctx);

// Smallest M with sum_{|k| >= M} ||R[k]||_2 <= eps / 2. Throws CapabilityError
// when neither an exact tail nor a decay envelope is known.
Index m_hat(double eps, const BoundContext& ctx);
Index m_hat(double eps, const SpectrumModel& model);

// Closed-form upper bound on m_hat under ||R[k]||_2 <= gamma rho^{|k|}.
Index m_hat_log_bound(double eps, DecayPair decay);

struct Theorem1Inputs {
  std::optional<double> xi;  // max{||A||_2, ||A||_F^2}
  std::optional<double> g;
  std::optional<Index> n_hat;
  std::optional<BiasCoefficients> b;

  // Everything from the dense matrix; g is the full norm envelope.
  static Theorem1Inputs from_matrix(const QuadraticForm& A);
  // g and N^ from certificate_params (absent for periodograms), xi = g,
  // b from the closed form.
  static Theorem1Inputs from_spec(const EstimatorSpec& spec);
};

// Missing inputs for the requested part raise CapabilityError.
Certificate check_theorem1(int part, const Theorem1Inputs& inputs, double eps, double delta,
                           const BoundContext& ctx);

double corollary1_pointwise(double xi, double delta, const BoundContext& ctx);
double corollary1_pointwise(const QuadraticForm& A, double delta, const BoundContext& ctx);

// log(5 N^2) + beta(delta / 2).
double beta_hat(Index n_hat, double delta, const BoundContext& ctx);

double corollary1_worst(double g, Index n_hat, double delta, const BoundContext& ctx);

double corollary1_bias_geometric(const BiasCoefficients& b, Index n_hat, double gamma, double rho);

// a = 2 c3^2 max{g beta^, sqrt(g beta^)}.
double data_driven_a(double g, Index n_hat, double delta, const BoundContext& ctx);

// (a est_sup + b) / (1 - a); Unavailable when a >= 1.
Certificate corollary1_data_driven(double a, double bias_bound, double est_sup);

// Estimator-specific sufficient conditions. Throws std::invalid_argument when
// the estimator family does not match.
Certificate check_theorem2(const EstimatorSpec& spec, int part, double eps, double delta,
                           const BoundContext& ctx);
Certificate check_theorem3(const EstimatorSpec& spec, int part, double eps, double delta,
                           const BoundContext& ctx);
Certificate check_theorem4(const EstimatorSpec& spec, int part, double eps, double delta,
                           const BoundContext& ctx);
// Periodogram bias conditions.
Certificate check_proposition1(const EstimatorSpec& spec, double eps, const BoundContext& ctx);
Certificate check_proposition2(const EstimatorSpec& spec, double eps, const BoundContext& ctx);

// Routes to the matching theorem or proposition. Parts 4 and 5 combine the
// concentration part with the bias part. Concentration parts for the
// periodograms raise CapabilityError.
Certificate check_estimator(const EstimatorSpec& spec, int part, double eps, double delta,
                            const BoundContext& ctx);

// w[k] >= (1 - eps/(2||R||_1)) / (1 - |k|/N) for |k| < m, w in [0,1] for m <= |k| < M.
bool bt_window_condition(const Window& lag_window, Index N, double eps, double r1, Index m);

double bartlett_bias_closed_form(double gamma, double rho, Index M);

// Corollary part-2 bound at g = M/N, N^ = M plus the closed-form bias.
double bartlett_total_bound(Index N, double M, double delta, const BoundContext& ctx);

struct BartlettChoice {
  Index M = 1;
  double total = 0.0;
  bool fallback = false;  // no divisor gave a finite bound; M = N
};

// Exhaustive search over divisors of N; ties go to the smaller M.
BartlettChoice optimize_bartlett_m(Index N, double delta, const BoundContext& ctx);

struct ContinuousBartlettChoice {
  double M = 1.0;
  double total = 0.0;
};

// Real-valued M in [1, N] on a dense log grid refined by golden-section search.
ContinuousBartlettChoice optimize_bartlett_m_continuous(Index N, double delta, const BoundContext& ctx);

}  // namespace specbound
