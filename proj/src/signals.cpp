#include "specbound/signals.hpp"

#include "specbound/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace specbound {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_rho(double rho, const char* where) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw std::invalid_argument(std::string(where) + ": rho must lie in [0, 1)");
  }
}

double draw(NoiseKind noise, CounterRng& rng, std::normal_distribution<double>& normal) {
  if (noise == NoiseKind::Gaussian) return normal(rng);
  return std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
}

// Symmetric square root of a positive semidefinite matrix.
Matrix psd_sqrt(const Matrix& X) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (X + X.transpose()));
  Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

double hermitian_norm(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian_part(m), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

// Exact partial sum of ||R[k]||_2 over from <= |k| <= to (from >= 1), both signs.
double two_sided_partial(const std::vector<Matrix>& seq, Index from, Index to) {
  double total = 0.0;
  for (Index k = from; k <= to; ++k) total += 2.0 * spectral_norm(seq[static_cast<std::size_t>(k)]);
  return total;
}

constexpr Index kExactTailTerms = 256;

}  // namespace

std::string to_string(NoiseKind kind) {
  return kind == NoiseKind::Gaussian ? "gaussian" : "uniform";
}

NoiseKind noise_kind_from_string(const std::string& name) {
  if (name == "gaussian") return NoiseKind::Gaussian;
  if (name == "uniform" || name == "subgaussian") return NoiseKind::UniformScaled;
  throw std::invalid_argument("unknown noise kind '" + name + "'");
}

SpectrumModel SpectrumModel::white_noise(Index channels) {
  if (channels < 1) throw std::invalid_argument("white_noise: need at least one channel");
  return SpectrumModel(WhiteNoise{channels}, DecayPair{1.0, 0.0});
}

SpectrumModel SpectrumModel::geometric(double rho) {
  require_rho(rho, "geometric model");
  return SpectrumModel(GeometricScalar{rho}, DecayPair{1.0, rho});
}

SpectrumModel SpectrumModel::state_space(Matrix A, Matrix B, Matrix C, Matrix D) {
  const Index p = A.rows();
  if (p < 1 || A.cols() != p) throw std::invalid_argument("state_space: A must be square");
  if (B.rows() != p) throw std::invalid_argument("state_space: B must have as many rows as A");
  if (C.cols() != p) throw std::invalid_argument("state_space: C must have as many columns as A");
  if (D.rows() != C.rows() || D.cols() != B.cols()) {
    throw std::invalid_argument("state_space: D must be (rows of C) x (columns of B)");
  }
  if (!A.allFinite() || !B.allFinite() || !C.allFinite() || !D.allFinite()) {
    throw std::invalid_argument("state_space: non-finite matrix entry");
  }
  if (spectral_radius(A) >= 1.0) {
    throw std::invalid_argument("state_space: A is not stable (spectral radius >= 1)");
  }
  Matrix X = solve_discrete_lyapunov(A, B * B.transpose());
  return SpectrumModel(StateSpace{std::move(A), std::move(B), std::move(C), std::move(D), std::move(X)},
                       std::nullopt);
}

SpectrumModel SpectrumModel::example2() {
  Matrix A(2, 2), B(2, 3), C(3, 2);
  A << 0.3, 0.0, 1.0, 0.3;
  B << 1.0, 0.0, 0.0, 0.0, 1.0, 0.0;
  C << 0.0, 0.0, 1.0, 0.0, 0.0, 1.0;
  return state_space(A, B, C, Matrix::Identity(3, 3));
}

SpectrumModel SpectrumModel::with_decay(DecayPair decay) const {
  if (!(decay.gamma > 0.0)) throw std::invalid_argument("with_decay: gamma must be positive");
  require_rho(decay.rho, "with_decay");
  return SpectrumModel(kind_, decay);
}

Index SpectrumModel::channels() const {
  return std::visit(Overloaded{
                        [](const WhiteNoise& w) { return w.channels; },
                        [](const GeometricScalar&) { return Index{1}; },
                        [](const StateSpace& ss) { return ss.C.rows(); },
                    },
                    kind_);
}

std::string SpectrumModel::name() const {
  return std::visit(Overloaded{
                        [](const WhiteNoise&) { return std::string("white_noise"); },
                        [](const GeometricScalar&) { return std::string("geometric"); },
                        [](const StateSpace&) { return std::string("state_space"); },
                    },
                    kind_);
}

Matrix exact_autocov(const SpectrumModel& model, Index k) {
  if (k < 0) return exact_autocov(model, -k).transpose();
  return std::visit(Overloaded{
                        [k](const WhiteNoise& w) -> Matrix {
                          return k == 0 ? Matrix(Matrix::Identity(w.channels, w.channels))
                                        : Matrix(Matrix::Zero(w.channels, w.channels));
                        },
                        [k](const GeometricScalar& g) -> Matrix {
                          return Matrix::Constant(1, 1, std::pow(g.rho, static_cast<double>(k)));
                        },
                        [k](const StateSpace& ss) -> Matrix {
                          if (k == 0) {
                            return ss.C * ss.gramian * ss.C.transpose() + ss.D * ss.D.transpose();
                          }
                          Matrix T = ss.A * ss.gramian * ss.C.transpose() + ss.B * ss.D.transpose();
                          for (Index i = 1; i < k; ++i) T = ss.A * T;
                          return ss.C * T;
                        },
                    },
                    model.kind());
}

std::vector<Matrix> autocov_sequence(const SpectrumModel& model, Index max_lag) {
  if (max_lag < 0) throw std::invalid_argument("autocov_sequence: negative lag");
  std::vector<Matrix> seq;
  seq.reserve(static_cast<std::size_t>(max_lag + 1));
  if (const auto* ss = model.as_state_space()) {
    seq.push_back(exact_autocov(model, 0));
    Matrix T = ss->A * ss->gramian * ss->C.transpose() + ss->B * ss->D.transpose();
    for (Index k = 1; k <= max_lag; ++k) {
      seq.push_back(ss->C * T);
      T = ss->A * T;
    }
    return seq;
  }
  for (Index k = 0; k <= max_lag; ++k) seq.push_back(exact_autocov(model, k));
  return seq;
}

CMatrix psd(const SpectrumModel& model, double s) {
  const double w = 2.0 * std::numbers::pi * s;
  return std::visit(Overloaded{
                        [](const WhiteNoise& wn) -> CMatrix {
                          return CMatrix::Identity(wn.channels, wn.channels);
                        },
                        [w](const GeometricScalar& g) -> CMatrix {
                          const Complex denom = 1.0 - g.rho * std::polar(1.0, -w);
                          return CMatrix::Constant(1, 1, (1.0 - g.rho * g.rho) / std::norm(denom));
                        },
                        [w](const StateSpace& ss) -> CMatrix {
                          const Index p = ss.A.rows();
                          CMatrix resolvent = std::polar(1.0, w) * CMatrix::Identity(p, p) -
                                              ss.A.cast<Complex>();
                          CMatrix H = ss.D.cast<Complex>() +
                                      ss.C.cast<Complex>() *
                                          resolvent.partialPivLu().solve(ss.B.cast<Complex>());
                          return hermitian_part(H * H.adjoint());
                        },
                    },
                    model.kind());
}

double phi_inf_on_grid(const SpectrumModel& model, std::size_t points) {
  double best = 0.0;
  for (double s : full_band_grid(points)) best = std::max(best, hermitian_norm(psd(model, s)));
  return best;
}

PhiInf phi_inf(const SpectrumModel& model) {
  if (const auto* g = std::get_if<GeometricScalar>(&model.kind())) {
    return {(1.0 + g->rho) / (1.0 - g->rho), true};
  }
  if (std::holds_alternative<WhiteNoise>(model.kind())) return {1.0, true};
  return {1.01 * phi_inf_on_grid(model, 4096), false};
}

R1Norm r1_norm(const SpectrumModel& model, Index depth) {
  if (const auto* g = std::get_if<GeometricScalar>(&model.kind())) {
    return {(1.0 + g->rho) / (1.0 - g->rho), 0.0, true};
  }
  if (std::holds_alternative<WhiteNoise>(model.kind())) return {1.0, 0.0, true};
  if (!model.decay()) {
    throw CapabilityError("r1_norm: state-space model needs a decay envelope (certify_decay)");
  }
  if (depth < 0) throw std::invalid_argument("r1_norm: negative depth");
  const auto [gamma, rho] = *model.decay();
  const auto seq = autocov_sequence(model, depth);
  const double partial = spectral_norm(seq[0]) + two_sided_partial(seq, 1, depth);
  const double remainder = 2.0 * gamma * std::pow(rho, static_cast<double>(depth + 1)) / (1.0 - rho);
  return {partial + remainder, remainder, false};
}

double tail_sum(const SpectrumModel& model, Index from_lag) {
  if (from_lag <= 0) return r1_norm(model).value;
  if (const auto* g = std::get_if<GeometricScalar>(&model.kind())) {
    return 2.0 * std::pow(g->rho, static_cast<double>(from_lag)) / (1.0 - g->rho);
  }
  if (std::holds_alternative<WhiteNoise>(model.kind())) return 0.0;
  if (!model.decay()) {
    throw CapabilityError("tail_sum: state-space model needs a decay envelope (certify_decay)");
  }
  const auto [gamma, rho] = *model.decay();
  const Index last = from_lag + kExactTailTerms - 1;
  const auto seq = autocov_sequence(model, last);
  return two_sided_partial(seq, from_lag, last) +
         2.0 * gamma * std::pow(rho, static_cast<double>(last + 1)) / (1.0 - rho);
}

double spectral_radius(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> eig(A, false);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix solve_discrete_lyapunov(const Matrix& A, const Matrix& Q) {
  if (A.rows() != A.cols() || Q.rows() != A.rows() || Q.cols() != A.cols()) {
    throw std::invalid_argument("solve_discrete_lyapunov: shape mismatch");
  }
  if (spectral_radius(A) >= 1.0) {
    throw std::invalid_argument("solve_discrete_lyapunov: A is not Schur stable");
  }
  // X_{j+1} = X_j + A^{2^j} X_j (A^{2^j})^T sums 2^{j+1} terms of the series.
  Matrix X = Q;
  Matrix power = A;
  for (int iter = 0; iter < 64; ++iter) {
    Matrix increment = power * X * power.transpose();
    X += increment;
    power = power * power;
    if (increment.norm() <= 1e-12 * X.norm() || power.norm() == 0.0) break;
  }
  return 0.5 * (X + X.transpose());
}

DecayCertificate certify_decay(const SpectrumModel& model, double rho_target) {
  const auto* ss = model.as_state_space();
  if (ss == nullptr) throw std::invalid_argument("certify_decay: requires a state-space model");
  const double radius = spectral_radius(ss->A);
  if (!(rho_target > radius && rho_target < 1.0)) {
    throw std::invalid_argument("certify_decay: rho_target must lie in (spectral radius, 1)");
  }
  const Matrix F = ss->A / rho_target;
  const Index p = F.rows();
  Matrix P = solve_discrete_lyapunov(F.transpose(), Matrix::Identity(p, p));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(P, Eigen::EigenvaluesOnly);
  const double kappa = eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff();

  const Matrix& X = ss->gramian;
  const double lag0 = spectral_norm(Matrix(ss->C * X * ss->C.transpose() + ss->D * ss->D.transpose()));
  const double lagged = std::sqrt(kappa) * spectral_norm(ss->C) *
                        (spectral_norm(Matrix(ss->B * ss->D.transpose())) / rho_target +
                         spectral_norm(Matrix(X * ss->C.transpose())));
  return {std::max(lag0, lagged), rho_target, kappa, std::move(P), X};
}

DataMatrix sample_geometric(double rho, Index N, NoiseKind noise, std::uint64_t seed,
                            std::uint64_t path) {
  require_rho(rho, "sample_geometric");
  if (N < 1) throw std::invalid_argument("sample_geometric: N must be positive");
  CounterRng rng(seed, path);
  std::normal_distribution<double> normal;
  const double gain = std::sqrt(1.0 - rho * rho);
  Matrix y(1, N);
  if (noise == NoiseKind::Gaussian) {
    double state = normal(rng);
    y(0, 0) = state;
    for (Index k = 1; k < N; ++k) {
      state = rho * state + gain * normal(rng);
      y(0, k) = state;
    }
    return DataMatrix(std::move(y));
  }
  const Index burn_in = rho > 0.0 ? static_cast<Index>(std::ceil(std::log(1e-12) / std::log(rho))) : 0;
  double state = 0.0;
  for (Index k = 0; k < burn_in; ++k) state = rho * state + gain * draw(noise, rng, normal);
  for (Index k = 0; k < N; ++k) {
    state = rho * state + gain * draw(noise, rng, normal);
    y(0, k) = state;
  }
  return DataMatrix(std::move(y));
}

DataMatrix sample_state_space(const SpectrumModel& model, Index N, std::uint64_t seed,
                              std::uint64_t path) {
  const auto* ss = model.as_state_space();
  if (ss == nullptr) throw std::invalid_argument("sample_state_space: requires a state-space model");
  if (N < 1) throw std::invalid_argument("sample_state_space: N must be positive");
  CounterRng rng(seed, path);
  std::normal_distribution<double> normal;
  const Index p = ss->A.rows();
  const Index m = ss->B.cols();
  auto gaussian_vector = [&](Index dim) {
    Vector z(dim);
    for (Index i = 0; i < dim; ++i) z(i) = normal(rng);
    return z;
  };
  Vector x = psd_sqrt(ss->gramian) * gaussian_vector(p);
  Matrix y(ss->C.rows(), N);
  for (Index k = 0; k < N; ++k) {
    const Vector z = gaussian_vector(m);
    y.col(k) = ss->C * x + ss->D * z;
    x = ss->A * x + ss->B * z;
  }
  return DataMatrix(std::move(y));
}

DataMatrix sample(const SpectrumModel& model, Index N, NoiseKind noise, std::uint64_t seed,
                  std::uint64_t path) {
  if (const auto* g = std::get_if<GeometricScalar>(&model.kind())) {
    return sample_geometric(g->rho, N, noise, seed, path);
  }
  if (model.as_state_space() != nullptr) return sample_state_space(model, N, seed, path);
  if (N < 1) throw std::invalid_argument("sample: N must be positive");
  CounterRng rng(seed, path);
  std::normal_distribution<double> normal;
  Matrix y(model.channels(), N);
  for (Index k = 0; k < N; ++k) {
    for (Index c = 0; c < y.rows(); ++c) y(c, k) = draw(noise, rng, normal);
  }
  return DataMatrix(std::move(y));
}

}  // namespace specbound
