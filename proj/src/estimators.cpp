#include "specbound/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace specbound {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(Index value, const char* what) {
  if (value < 1) throw std::invalid_argument(std::string(what) + " must be a positive integer");
}

double squared_norm(const std::vector<double>& v) {
  double total = 0.0;
  for (double x : v) total += x * x;
  return total;
}

// Unit-norm copy of a taper.
Vector normalized_taper(const Window& taper) {
  Vector v = Eigen::Map<const Vector>(taper.values().data(), static_cast<Index>(taper.values().size()));
  return v / v.norm();
}

void add_outer(CMatrix& acc, const CVector& z) { acc.noalias() += z * z.adjoint(); }

CMatrix lag_window_sum(const AutocovarianceEstimate& acs, Index max_lag, double s,
                       const auto& weight) {
  CMatrix total = weight(0) * acs.lag(0).cast<Complex>();
  const CVector e = phasors(s, max_lag + 1);
  for (Index k = 1; k <= max_lag; ++k) {
    const double w = weight(k);
    if (w == 0.0) continue;
    total += (w * e(k)) * acs.lag(k).cast<Complex>() +
             (w * std::conj(e(k))) * acs.lag(k).transpose().cast<Complex>();
  }
  return total;
}

}  // namespace

std::string to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::Rectangular: return "rectangular";
    case WindowKind::Triangular: return "triangular";
    case WindowKind::Hann: return "hann";
    case WindowKind::Hamming: return "hamming";
    case WindowKind::Blackman: return "blackman";
    case WindowKind::Custom: return "custom";
  }
  return "custom";
}

WindowKind window_kind_from_string(const std::string& name) {
  if (name == "rectangular" || name == "rect") return WindowKind::Rectangular;
  if (name == "triangular" || name == "bartlett") return WindowKind::Triangular;
  if (name == "hann") return WindowKind::Hann;
  if (name == "hamming") return WindowKind::Hamming;
  if (name == "blackman") return WindowKind::Blackman;
  throw std::invalid_argument("unknown window '" + name + "'");
}

std::vector<double> window_shape(WindowKind kind, Index points) {
  require_positive(points, "window length");
  if (kind == WindowKind::Custom) throw std::invalid_argument("window_shape: custom has no shape");
  std::vector<double> out(static_cast<std::size_t>(points), 1.0);
  if (points == 1) return out;
  const double span = static_cast<double>(points - 1);
  for (Index k = 0; k < points; ++k) {
    // Evaluate on the nearer half so the result is exactly symmetric.
    const double j = static_cast<double>(std::min(k, points - 1 - k));
    const double phase = 2.0 * std::numbers::pi * j / span;
    double value = 1.0;
    switch (kind) {
      case WindowKind::Rectangular: value = 1.0; break;
      case WindowKind::Triangular: value = 1.0 - std::abs(2.0 * j - span) / span; break;
      case WindowKind::Hann: value = 0.5 * (1.0 - std::cos(phase)); break;
      case WindowKind::Hamming: value = 0.54 - 0.46 * std::cos(phase); break;
      case WindowKind::Blackman:
        value = 0.42 - 0.5 * std::cos(phase) + 0.08 * std::cos(2.0 * phase);
        break;
      case WindowKind::Custom: break;
    }
    out[static_cast<std::size_t>(k)] = std::clamp(value, 0.0, 1.0);
  }
  return out;
}

Window Window::taper(WindowKind kind, Index length) {
  return Window(kind, false, length, window_shape(kind, length));
}

Window Window::lag(WindowKind kind, Index max_lag) {
  require_positive(max_lag, "lag window M");
  return Window(kind, true, max_lag, window_shape(kind, 2 * max_lag - 1));
}

Window Window::custom_taper(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("custom taper is empty");
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("custom taper has a non-finite entry");
  }
  const Index M = static_cast<Index>(values.size());
  return Window(WindowKind::Custom, false, M, std::move(values));
}

Window Window::custom_lag(std::vector<double> values) {
  if (values.size() % 2 == 0) {
    throw std::invalid_argument("custom lag window needs an odd number of values (lags -(M-1)..M-1)");
  }
  const std::size_t L = values.size();
  for (std::size_t i = 0; i < L; ++i) {
    if (!std::isfinite(values[i])) throw std::invalid_argument("custom lag window has a non-finite entry");
    if (values[i] != values[L - 1 - i]) {
      throw std::invalid_argument("lag window must satisfy w[k] = w[-k]");
    }
  }
  const Index M = static_cast<Index>((L + 1) / 2);
  return Window(WindowKind::Custom, true, M, std::move(values));
}

double Window::at_lag(Index k) const {
  if (!lag_) throw std::logic_error("at_lag called on a taper window");
  if (k <= -length_ || k >= length_) return 0.0;
  return values_[static_cast<std::size_t>(k + length_ - 1)];
}

EstimatorSpec EstimatorSpec::biased_periodogram(Index N) {
  require_positive(N, "N");
  return EstimatorSpec(BiasedPeriodogram{N});
}

EstimatorSpec EstimatorSpec::unbiased_periodogram(Index N) {
  require_positive(N, "N");
  return EstimatorSpec(UnbiasedPeriodogram{N});
}

EstimatorSpec EstimatorSpec::blackman_tukey(Index N, Index M, WindowKind kind) {
  require_positive(M, "M");
  return blackman_tukey(N, Window::lag(kind, M));
}

EstimatorSpec EstimatorSpec::blackman_tukey(Index N, Window lag_window) {
  require_positive(N, "N");
  if (!lag_window.is_lag()) throw std::invalid_argument("Blackman-Tukey needs a lag window");
  const Index M = lag_window.length();
  if (M > N) {
    throw std::invalid_argument("Blackman-Tukey: M = " + std::to_string(M) + " exceeds N = " +
                                std::to_string(N));
  }
  return EstimatorSpec(BlackmanTukey{N, M, std::move(lag_window)});
}

EstimatorSpec EstimatorSpec::bartlett(Index M, Index L) {
  require_positive(M, "M");
  require_positive(L, "L");
  return EstimatorSpec(Bartlett{M, L});
}

EstimatorSpec EstimatorSpec::welch(Index M, Index K, Index S, WindowKind kind) {
  require_positive(M, "M");
  return welch(K, S, Window::taper(kind, M));
}

EstimatorSpec EstimatorSpec::welch(Index K, Index S, Window taper) {
  require_positive(K, "K");
  require_positive(S, "S");
  if (taper.is_lag()) throw std::invalid_argument("Welch needs a taper, not a lag window");
  if (!(squared_norm(taper.values()) > 0.0)) {
    throw std::invalid_argument("Welch taper has zero norm");
  }
  const Index M = taper.length();
  return EstimatorSpec(Welch{M, K, S, std::move(taper)});
}

Index EstimatorSpec::samples() const {
  return std::visit(Overloaded{
                        [](const BiasedPeriodogram& e) { return e.N; },
                        [](const UnbiasedPeriodogram& e) { return e.N; },
                        [](const BlackmanTukey& e) { return e.N; },
                        [](const Bartlett& e) { return e.L * e.M; },
                        [](const Welch& e) { return (e.S - 1) * e.K + e.M; },
                    },
                    variant_);
}

std::string EstimatorSpec::name() const {
  return std::visit(Overloaded{
                        [](const BiasedPeriodogram&) { return std::string("biased_periodogram"); },
                        [](const UnbiasedPeriodogram&) { return std::string("unbiased_periodogram"); },
                        [](const BlackmanTukey&) { return std::string("blackman_tukey"); },
                        [](const Bartlett&) { return std::string("bartlett"); },
                        [](const Welch&) { return std::string("welch"); },
                    },
                    variant_);
}

std::optional<CertificateParams> certificate_params(const EstimatorSpec& spec) {
  return std::visit(
      Overloaded{
          [](const BiasedPeriodogram&) -> std::optional<CertificateParams> { return std::nullopt; },
          [](const UnbiasedPeriodogram&) -> std::optional<CertificateParams> { return std::nullopt; },
          [](const BlackmanTukey& e) -> std::optional<CertificateParams> {
            return CertificateParams{static_cast<double>(2 * e.M - 1) / static_cast<double>(e.N), e.M};
          },
          [](const Bartlett& e) -> std::optional<CertificateParams> {
            return CertificateParams{1.0 / static_cast<double>(e.L), e.M};
          },
          [](const Welch& e) -> std::optional<CertificateParams> {
            const double ratio = static_cast<double>(e.M) / static_cast<double>(e.K);
            return CertificateParams{(1.0 + 2.0 * ratio) / static_cast<double>(e.S), e.M};
          },
      },
      spec.variant());
}

QuadraticForm build_matrix(const EstimatorSpec& spec, Index N) {
  if (N != spec.samples()) {
    throw std::invalid_argument(spec.name() + " consumes N = " + std::to_string(spec.samples()) +
                                " samples, got N = " + std::to_string(N));
  }
  return build_matrix(spec);
}

QuadraticForm build_matrix(const EstimatorSpec& spec) {
  const Index N = spec.samples();
  const double dN = static_cast<double>(N);
  Matrix A = Matrix::Zero(N, N);
  std::visit(Overloaded{
                 [&](const BiasedPeriodogram&) { A.setConstant(1.0 / dN); },
                 [&](const UnbiasedPeriodogram&) {
                   for (Index i = 0; i < N; ++i) {
                     for (Index j = 0; j < N; ++j) A(i, j) = 1.0 / static_cast<double>(N - std::abs(i - j));
                   }
                 },
                 [&](const BlackmanTukey& e) {
                   for (Index i = 0; i < N; ++i) {
                     for (Index j = std::max<Index>(0, i - e.M + 1); j < std::min(N, i + e.M); ++j) {
                       A(i, j) = e.window.at_lag(i - j) / dN;
                     }
                   }
                 },
                 [&](const Bartlett& e) {
                   for (Index b = 0; b < e.L; ++b) A.block(b * e.M, b * e.M, e.M, e.M).setConstant(1.0 / dN);
                 },
                 [&](const Welch& e) {
                   const Vector v = normalized_taper(e.taper);
                   const Matrix block = v * v.transpose() / static_cast<double>(e.S);
                   for (Index i = 0; i < e.S; ++i) A.block(i * e.K, i * e.K, e.M, e.M) += block;
                 },
             },
             spec.variant());
  return QuadraticForm(std::move(A));
}

double taper_correlation(const Window& taper, Index k) {
  if (taper.is_lag()) throw std::invalid_argument("taper_correlation needs a taper");
  const Index M = taper.length();
  const Index lag = std::abs(k);
  if (lag >= M) return 0.0;
  const auto& v = taper.values();
  double total = 0.0;
  for (Index i = lag; i < M; ++i) {
    total += v[static_cast<std::size_t>(i - lag)] * v[static_cast<std::size_t>(i)];
  }
  return total / squared_norm(v);
}

BiasCoefficients closed_form_bias(const EstimatorSpec& spec) {
  const Index N = spec.samples();
  const double dN = static_cast<double>(N);
  std::vector<double> lags(static_cast<std::size_t>(N), 0.0);
  std::visit(Overloaded{
                 [&](const BiasedPeriodogram&) {
                   for (Index k = 0; k < N; ++k) lags[static_cast<std::size_t>(k)] = 1.0 - static_cast<double>(k) / dN;
                 },
                 [&](const UnbiasedPeriodogram&) { std::fill(lags.begin(), lags.end(), 1.0); },
                 [&](const BlackmanTukey& e) {
                   for (Index k = 0; k < e.M; ++k) {
                     lags[static_cast<std::size_t>(k)] = static_cast<double>(N - k) * e.window.at_lag(k) / dN;
                   }
                 },
                 [&](const Bartlett& e) {
                   for (Index k = 0; k < e.M; ++k) {
                     lags[static_cast<std::size_t>(k)] = 1.0 - static_cast<double>(k) / static_cast<double>(e.M);
                   }
                 },
                 [&](const Welch& e) {
                   for (Index k = 0; k < e.M; ++k) lags[static_cast<std::size_t>(k)] = taper_correlation(e.taper, k);
                 },
             },
             spec.variant());
  return BiasCoefficients::symmetric(std::move(lags));
}

Matrix AutocovarianceEstimate::at(Index k) const {
  const Index n = lags_.front().rows();
  if (std::abs(k) >= width()) return Matrix::Zero(n, n);
  if (k < 0) return lags_[static_cast<std::size_t>(-k)].transpose();
  return lags_[static_cast<std::size_t>(k)];
}

namespace {

AutocovarianceEstimate acs_with_divisor(const DataMatrix& Y, bool unbiased) {
  const Index N = Y.samples();
  const Matrix& y = Y.values();
  std::vector<Matrix> lags;
  lags.reserve(static_cast<std::size_t>(N));
  for (Index k = 0; k < N; ++k) {
    const Index overlap = N - k;
    // sum_{i=k}^{N-1} y[i] y[i-k]^T
    Matrix sum = y.rightCols(overlap) * y.leftCols(overlap).transpose();
    lags.push_back(sum / static_cast<double>(unbiased ? overlap : N));
  }
  return AutocovarianceEstimate(std::move(lags));
}

}  // namespace

AutocovarianceEstimate biased_acs(const DataMatrix& Y) { return acs_with_divisor(Y, false); }

AutocovarianceEstimate unbiased_acs(const DataMatrix& Y) { return acs_with_divisor(Y, true); }

SpectralEstimate evaluate_fast(const EstimatorSpec& spec, const DataMatrix& Y,
                               std::span<const double> grid) {
  if (Y.samples() != spec.samples()) {
    throw std::invalid_argument(spec.name() + " consumes N = " + std::to_string(spec.samples()) +
                                " samples, data has " + std::to_string(Y.samples()));
  }
  validate_grid(grid);
  const Index n = Y.channels();
  const Index N = Y.samples();
  const Matrix& y = Y.values();
  const CMatrix yc = y.cast<Complex>();

  // Lag-domain estimators share one autocovariance pass.
  std::optional<AutocovarianceEstimate> acs;
  if (std::holds_alternative<UnbiasedPeriodogram>(spec.variant())) acs = unbiased_acs(Y);
  if (std::holds_alternative<BlackmanTukey>(spec.variant())) acs = biased_acs(Y);
  const std::optional<Vector> taper =
      std::holds_alternative<Welch>(spec.variant())
          ? std::optional<Vector>(normalized_taper(std::get<Welch>(spec.variant()).taper))
          : std::nullopt;

  auto at_frequency = [&](double s) -> CMatrix {
    return std::visit(
        Overloaded{
            [&](const BiasedPeriodogram&) -> CMatrix {
              const CVector z = yc * phasors(s, N);
              return z * z.adjoint() / static_cast<double>(N);
            },
            [&](const UnbiasedPeriodogram&) -> CMatrix {
              return lag_window_sum(*acs, N - 1, s, [](Index) { return 1.0; });
            },
            [&](const BlackmanTukey& e) -> CMatrix {
              return lag_window_sum(*acs, e.M - 1, s, [&](Index k) { return e.window.at_lag(k); });
            },
            [&](const Bartlett& e) -> CMatrix {
              const CVector phase = phasors(s, e.M);
              CMatrix total = CMatrix::Zero(n, n);
              for (Index b = 0; b < e.L; ++b) add_outer(total, yc.middleCols(b * e.M, e.M) * phase);
              return total / static_cast<double>(N);
            },
            [&](const Welch& e) -> CMatrix {
              const CVector weighted = phasors(s, e.M).cwiseProduct(taper->cast<Complex>());
              CMatrix total = CMatrix::Zero(n, n);
              for (Index i = 0; i < e.S; ++i) add_outer(total, yc.middleCols(i * e.K, e.M) * weighted);
              return total / static_cast<double>(e.S);
            },
        },
        spec.variant());
  };

  SpectralEstimate out;
  out.frequencies.assign(grid.begin(), grid.end());
  out.matrices.resize(grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(grid.size()); ++i) {
    out.matrices[static_cast<std::size_t>(i)] = hermitian_part(at_frequency(grid[static_cast<std::size_t>(i)]));
  }
  return out;
}

}  // namespace specbound
