#pragma once

#include "specbound/quadform.hpp"
#include "specbound/types.hpp"

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace specbound {

enum class WindowKind { Rectangular, Triangular, Hann, Hamming, Blackman, Custom };

std::string to_string(WindowKind kind);
WindowKind window_kind_from_string(const std::string& name);

// A taper v[0..M-1] (Welch) or a symmetric lag window w[-(M-1)..M-1]
// (Blackman-Tukey). Named shapes are the symmetric textbook forms on
// k = 0..L-1 with L = M (taper) or L = 2M - 1 (lag).
class Window {
 public:
  static Window taper(WindowKind kind, Index length);
  static Window lag(WindowKind kind, Index max_lag);
  static Window custom_taper(std::vector<double> values);
  // `values` holds w[-(M-1)], ..., w[M-1]; must be symmetric.
  static Window custom_lag(std::vector<double> values);

  WindowKind kind() const { return kind_; }
  bool is_lag() const { return lag_; }
  // M: taper length, or one more than the largest lag.
  Index length() const { return length_; }
  const std::vector<double>& values() const { return values_; }

  // Lag windows: w[k], zero for |k| >= M.
  double at_lag(Index k) const;
  // Tapers: v[k].
  double at(Index k) const { return values_[static_cast<std::size_t>(k)]; }

 private:
  Window(WindowKind kind, bool lag, Index length, std::vector<double> values)
      : kind_(kind), lag_(lag), length_(length), values_(std::move(values)) {}

  WindowKind kind_;
  bool lag_;
  Index length_;
  std::vector<double> values_;
};

// The named shape sampled at k = 0..L-1.
std::vector<double> window_shape(WindowKind kind, Index points);

struct BiasedPeriodogram {
  Index N;
};

struct UnbiasedPeriodogram {
  Index N;
};

struct BlackmanTukey {
  Index N;
  Index M;
  Window window;
};

// L non-overlapping blocks of length M, N = L M.
struct Bartlett {
  Index M;
  Index L;
};

// S segments of length M with hop K, N = (S - 1) K + M.
struct Welch {
  Index M;
  Index K;
  Index S;
  Window taper;
};

class EstimatorSpec {
 public:
  using Variant = std::variant<BiasedPeriodogram, UnbiasedPeriodogram, BlackmanTukey, Bartlett, Welch>;

  static EstimatorSpec biased_periodogram(Index N);
  static EstimatorSpec unbiased_periodogram(Index N);
  static EstimatorSpec blackman_tukey(Index N, Index M, WindowKind kind = WindowKind::Rectangular);
  static EstimatorSpec blackman_tukey(Index N, Window lag_window);
  static EstimatorSpec bartlett(Index M, Index L);
  static EstimatorSpec welch(Index M, Index K, Index S, WindowKind kind = WindowKind::Hann);
  static EstimatorSpec welch(Index K, Index S, Window taper);

  const Variant& variant() const { return variant_; }
  // Number of samples N the estimator consumes.
  Index samples() const;
  std::string name() const;

 private:
  explicit EstimatorSpec(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

// g and N^ of the worst-case certificate.
struct CertificateParams {
  double g;
  Index n_hat;
};

// Unavailable (nullopt) for both periodograms.
std::optional<CertificateParams> certificate_params(const EstimatorSpec& spec);

// Dense A; throws std::invalid_argument when N differs from spec.samples().
QuadraticForm build_matrix(const EstimatorSpec& spec, Index N);
QuadraticForm build_matrix(const EstimatorSpec& spec);

BiasCoefficients closed_form_bias(const EstimatorSpec& spec);

// sum_{i=|k|}^{M-1} v[i-|k|] v[i] / ||v||^2.
double taper_correlation(const Window& taper, Index k);

// Segment-DFT / lag-window evaluation; agrees with evaluate_generic on
// build_matrix(spec) up to rounding.
SpectralEstimate evaluate_fast(const EstimatorSpec& spec, const DataMatrix& Y,
                               std::span<const double> grid);

// R^[k] (|k| < N), with R^[-k] = R^[k]^T.
class AutocovarianceEstimate {
 public:
  explicit AutocovarianceEstimate(std::vector<Matrix> nonnegative_lags)
      : lags_(std::move(nonnegative_lags)) {}

  Index width() const { return static_cast<Index>(lags_.size()); }
  Matrix at(Index k) const;
  const Matrix& lag(Index k) const { return lags_[static_cast<std::size_t>(k)]; }

 private:
  std::vector<Matrix> lags_;
};

// Divisor N.
AutocovarianceEstimate biased_acs(const DataMatrix& Y);
// Divisor N - |k|.
AutocovarianceEstimate unbiased_acs(const DataMatrix& Y);

}  // namespace specbound
