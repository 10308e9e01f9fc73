#include "specbound/bounds.hpp"

#include "specbound/constants.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

namespace specbound {

namespace {

constexpr Index kEnvelopeCheckLags = 64;

void require_epsilon(double eps, const char* where) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument(std::string(where) + ": epsilon must be a positive finite number");
  }
}

void require_delta(double delta, const char* where) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument(std::string(where) + ": delta must lie in (0, 1)");
  }
}

void require_rho(double rho, const char* where) {
  if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument(std::string(where) + ": rho must lie in [0, 1)");
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Certificate condition(std::string statement, double eps, double delta, double lhs, double rhs) {
  Certificate c;
  c.statement = std::move(statement);
  c.epsilon = eps;
  c.delta = delta;
  c.conclusion_epsilon = eps;
  c.lhs = lhs;
  c.rhs = rhs;
  c.status = lhs >= rhs ? CertificateStatus::Holds : CertificateStatus::Fails;
  return c;
}

// Parts 4/5: both ingredients at eps, conclusion at 2 eps.
Certificate conjunction(std::string statement, const Certificate& concentration, const Certificate& bias) {
  Certificate c;
  c.statement = std::move(statement);
  c.epsilon = concentration.epsilon;
  c.delta = concentration.delta;
  c.conclusion_epsilon = 2.0 * concentration.epsilon;
  c.inputs = concentration.inputs;
  c.inputs.insert(c.inputs.end(), bias.inputs.begin(), bias.inputs.end());
  c.lhs = concentration.lhs;
  c.rhs = concentration.rhs;
  c.status = concentration.holds() && bias.holds() ? CertificateStatus::Holds : CertificateStatus::Fails;
  c.note = concentration.statement + "=" + to_string(concentration.status) + "," + bias.statement + "=" +
           to_string(bias.status);
  return c;
}

// Concentration condition (1/g) >= alpha(eps) beta(delta) or its sup-over-s form.
Certificate concentration_condition(std::string statement, int part, double inv_g, Index n_hat,
                                    double eps, double delta, const BoundContext& ctx) {
  const double rhs = part == 1 ? alpha(eps, ctx) * beta(delta, ctx)
                               : alpha(eps / 2.0, ctx) * beta_hat(n_hat, delta, ctx);
  return condition(std::move(statement), eps, delta, inv_g, rhs);
}

double beta_hat_real(double n_hat, double delta, const BoundContext& ctx) {
  return std::log(constants::kCoveringBase * n_hat * n_hat) + beta(delta / 2.0, ctx);
}

double worst_real(double g, double n_hat, double delta, const BoundContext& ctx) {
  const double c3 = constants_for(ctx.assumption).c_subgauss;
  const double gb = g * beta_hat_real(n_hat, delta, ctx);
  return 2.0 * c3 * c3 * ctx.phi_inf * std::max(gb, std::sqrt(gb));
}

double bartlett_bias_real(double gamma, double rho, double M) {
  const double q = 1.0 - rho;
  return 2.0 * gamma * rho / (q * q * M) + 2.0 * gamma * (rho * rho / (q * q) + 1.0 / q) * std::pow(rho, M);
}

DecayPair require_decay(const BoundContext& ctx, const char* where) {
  if (!ctx.decay) throw CapabilityError(std::string(where) + ": context has no decay pair (gamma, rho)");
  return *ctx.decay;
}

template <class T>
const T& require_kind(const EstimatorSpec& spec, const char* where) {
  const T* p = std::get_if<T>(&spec.variant());
  if (p == nullptr) throw std::invalid_argument(std::string(where) + ": got a " + spec.name() + " spec");
  return *p;
}

// Shared bias checks: M >= m (when asked), and lengths scaled by 2 m ||R||_1 / eps.
Certificate bias_condition(std::string statement, double eps, double lhs, double rhs, Index m) {
  Certificate c = condition(std::move(statement), eps, 0.0, lhs, rhs);
  c.inputs.emplace_back("m_hat", static_cast<double>(m));
  return c;
}

}  // namespace

NoiseAssumption NoiseAssumption::sub_gaussian(double sigma) {
  if (!(sigma >= 1.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sub-Gaussian parameter sigma must be >= 1");
  }
  return {Kind::SubGaussian, sigma};
}

std::string NoiseAssumption::name() const {
  if (kind == Kind::Gaussian) return "gaussian";
  return "subgaussian(sigma=" + format_number(sigma) + ")";
}

BoundConstants constants_for(const NoiseAssumption& assumption) {
  if (assumption.kind == NoiseAssumption::Kind::Gaussian) {
    return {constants::kGaussian.c_mult, constants::kGaussian.c_exp, 1.0};
  }
  return {constants::kSubGaussian.c_mult, constants::kSubGaussian.c_exp, assumption.sigma};
}

std::string to_string(R1Source source) {
  switch (source) {
    case R1Source::Exact: return "exact";
    case R1Source::Envelope: return "envelope";
    case R1Source::Supplied: return "supplied";
  }
  return "supplied";
}

std::string to_string(CertificateStatus status) {
  switch (status) {
    case CertificateStatus::Holds: return "holds";
    case CertificateStatus::Fails: return "fails";
    case CertificateStatus::Value: return "value";
    case CertificateStatus::Unavailable: return "unavailable";
  }
  return "unavailable";
}

BoundContext make_context(NoiseAssumption assumption, double phi_inf, double r1, Index channels,
                          std::optional<DecayPair> decay) {
  if (!(phi_inf > 0.0) || !std::isfinite(phi_inf)) {
    throw std::invalid_argument("context: phi_inf must be positive and finite");
  }
  if (!(r1 > 0.0) || !std::isfinite(r1)) throw std::invalid_argument("context: r1 must be positive and finite");
  if (channels < 1) throw std::invalid_argument("context: channel count must be >= 1");
  if (decay) {
    if (!(decay->gamma > 0.0)) throw std::invalid_argument("context: gamma must be positive");
    require_rho(decay->rho, "context");
  }
  BoundContext ctx;
  ctx.assumption = assumption;
  ctx.phi_inf = phi_inf;
  ctx.r1 = r1;
  ctx.r1_source = R1Source::Supplied;
  ctx.channels = channels;
  ctx.decay = decay;
  return ctx;
}

BoundContext make_context(const SpectrumModel& model, NoiseAssumption assumption) {
  if (model.decay()) {
    const auto [gamma, rho] = *model.decay();
    const auto seq = autocov_sequence(model, kEnvelopeCheckLags);
    for (Index k = 0; k <= kEnvelopeCheckLags; ++k) {
      const double norm = spectral_norm(seq[static_cast<std::size_t>(k)]);
      const double envelope = gamma * std::pow(rho, static_cast<double>(k));
      if (norm > envelope * (1.0 + 1e-12) + 1e-300) {
        throw std::invalid_argument("decay envelope violated at lag " + std::to_string(k) + ": ||R[k]|| = " +
                                    format_number(norm) + " > " + format_number(envelope));
      }
    }
  }
  const R1Norm r1 = r1_norm(model);
  BoundContext ctx = make_context(assumption, phi_inf(model).value, r1.value, model.channels(), model.decay());
  ctx.r1_source = r1.exact ? R1Source::Exact : R1Source::Envelope;
  ctx.tail = [model](Index K) { return tail_sum(model, K); };
  return ctx;
}

std::string to_record(const Certificate& cert) {
  std::ostringstream out;
  out << "statement=" << cert.statement << ";epsilon=" << format_number(cert.epsilon)
      << ";delta=" << format_number(cert.delta) << ";conclusion_epsilon=" << format_number(cert.conclusion_epsilon)
      << ";inputs=";
  for (std::size_t i = 0; i < cert.inputs.size(); ++i) {
    if (i > 0) out << '|';
    out << cert.inputs[i].first << ':' << format_number(cert.inputs[i].second);
  }
  out << ";status=" << to_string(cert.status);
  if (cert.status == CertificateStatus::Value) out << ";value=" << format_number(cert.value);
  if (cert.status == CertificateStatus::Holds || cert.status == CertificateStatus::Fails) {
    out << ";lhs=" << format_number(cert.lhs) << ";rhs=" << format_number(cert.rhs);
  }
  if (!cert.note.empty()) out << ";note=" << cert.note;
  return out.str();
}

double alpha(double eps, const BoundContext& ctx) {
  require_epsilon(eps, "alpha");
  const double c3 = constants_for(ctx.assumption).c_subgauss;
  const double u = c3 * c3 * ctx.phi_inf / eps;
  return std::max(u * u, u);
}

double beta(double delta, const BoundContext& ctx) {
  require_delta(delta, "beta");
  const auto c = constants_for(ctx.assumption);
  const double log_mult = 2.0 * static_cast<double>(ctx.channels) * std::numbers::ln10 + std::log(c.c_mult);
  return (log_mult - std::log(delta)) / c.c_exp;
}

Index m_hat_log_bound(double eps, DecayPair decay) {
  require_epsilon(eps, "m_hat_log_bound");
  require_rho(decay.rho, "m_hat_log_bound");
  const double gamma = decay.gamma;
  const double rho = decay.rho;
  if (gamma * (1.0 + rho) / (1.0 - rho) <= eps / 2.0) return 0;
  if (rho == 0.0) return 1;
  // 2 gamma rho^M / (1 - rho) <= eps / 2 for M >= this value.
  const double ratio = std::log((1.0 - rho) * eps / (4.0 * gamma)) / std::log(rho);
  return std::max<Index>(1, static_cast<Index>(std::ceil(ratio)));
}

Index m_hat(double eps, const BoundContext& ctx) {
  require_epsilon(eps, "m_hat");
  std::function<double(Index)> tail = ctx.tail;
  if (!tail) {
    if (!ctx.decay) {
      throw CapabilityError("m_hat: no tail sums available (attach a decay envelope or a model)");
    }
    const auto [gamma, rho] = *ctx.decay;
    tail = [gamma, rho](Index K) {
      if (K <= 0) return gamma * (1.0 + rho) / (1.0 - rho);
      return 2.0 * gamma * std::pow(rho, static_cast<double>(K)) / (1.0 - rho);
    };
  }
  const double target = eps / 2.0;
  Index hi = 0;
  if (ctx.decay) {
    hi = m_hat_log_bound(eps, *ctx.decay);
  } else {
    hi = 1;
    while (tail(hi) > target) {
      if (hi > (Index{1} << 40)) throw CapabilityError("m_hat: tail does not fall below eps/2");
      hi *= 2;
    }
  }
  if (tail(hi) > target) {
    // Exact tails always sit under the envelope; guard against a mismatched context.
    throw CapabilityError("m_hat: tail at the envelope bound exceeds eps/2");
  }
  Index lo = 0;
  while (lo < hi) {
    const Index mid = lo + (hi - lo) / 2;
    if (tail(mid) <= target) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

Index m_hat(double eps, const SpectrumModel& model) {
  BoundContext ctx;
  ctx.decay = model.decay();
  ctx.tail = [&model](Index K) { return tail_sum(model, K); };
  if (!ctx.decay && model.as_state_space() != nullptr) {
    throw CapabilityError("m_hat: state-space model needs a decay envelope (certify_decay)");
  }
  return m_hat(eps, ctx);
}

Theorem1Inputs Theorem1Inputs::from_matrix(const QuadraticForm& A) {
  Theorem1Inputs in;
  in.xi = A.xi();
  in.g = norm_envelope(A);
  in.n_hat = A.truncation_width();
  in.b = bias_coefficients(A);
  return in;
}

Theorem1Inputs Theorem1Inputs::from_spec(const EstimatorSpec& spec) {
  Theorem1Inputs in;
  if (const auto params = certificate_params(spec)) {
    in.g = params->g;
    in.xi = params->g;
    in.n_hat = params->n_hat;
  }
  in.b = closed_form_bias(spec);
  return in;
}

Certificate check_theorem1(int part, const Theorem1Inputs& inputs, double eps, double delta,
                           const BoundContext& ctx) {
  require_epsilon(eps, "check_theorem1");
  require_delta(delta, "check_theorem1");
  switch (part) {
    case 1: {
      if (!inputs.xi) throw CapabilityError("theorem1.part1 needs xi = max{||A||_2, ||A||_F^2}");
      Certificate c = concentration_condition("theorem1.part1", 1, 1.0 / *inputs.xi, 1, eps, delta, ctx);
      c.inputs.emplace_back("xi", *inputs.xi);
      return c;
    }
    case 2: {
      if (!inputs.g || !inputs.n_hat) throw CapabilityError("theorem1.part2 needs g and N^");
      Certificate c = concentration_condition("theorem1.part2", 2, 1.0 / *inputs.g, *inputs.n_hat, eps, delta, ctx);
      c.inputs.emplace_back("g", *inputs.g);
      c.inputs.emplace_back("n_hat", static_cast<double>(*inputs.n_hat));
      return c;
    }
    case 3: {
      if (!inputs.b) throw CapabilityError("theorem1.part3 needs the bias coefficients b[k]");
      const BiasCoefficients& b = *inputs.b;
      const Index m = m_hat(eps, ctx);
      bool in_range = true;
      for (Index k = -(b.width() - 1); k < b.width(); ++k) in_range = in_range && b[k] >= 0.0 && b[k] <= 1.0;
      double smallest = 1.0;
      for (Index k = 0; k < m; ++k) smallest = std::min({smallest, b[k], b[-k]});
      Certificate c = condition("theorem1.part3", eps, delta, smallest, 1.0 - eps / (2.0 * ctx.r1));
      c.delta = delta;
      if (!in_range) {
        c.status = CertificateStatus::Fails;
        c.note = "b[k] outside [0,1]";
      }
      c.inputs.emplace_back("m_hat", static_cast<double>(m));
      c.inputs.emplace_back("r1", ctx.r1);
      return c;
    }
    case 4:
      return conjunction("theorem1.part4", check_theorem1(1, inputs, eps, delta, ctx),
                         check_theorem1(3, inputs, eps, delta, ctx));
    case 5:
      return conjunction("theorem1.part5", check_theorem1(2, inputs, eps, delta, ctx),
                         check_theorem1(3, inputs, eps, delta, ctx));
    default: throw std::invalid_argument("check_theorem1: part must be 1..5");
  }
}

double corollary1_pointwise(double xi, double delta, const BoundContext& ctx) {
  if (!(xi > 0.0) || !std::isfinite(xi)) throw std::invalid_argument("corollary1_pointwise: xi must be positive");
  const double c3 = constants_for(ctx.assumption).c_subgauss;
  const double xb = xi * beta(delta, ctx);
  return c3 * c3 * ctx.phi_inf * std::max(xb, std::sqrt(xb));
}

double corollary1_pointwise(const QuadraticForm& A, double delta, const BoundContext& ctx) {
  return corollary1_pointwise(A.xi(), delta, ctx);
}

double beta_hat(Index n_hat, double delta, const BoundContext& ctx) {
  if (n_hat < 1) throw std::invalid_argument("beta_hat: N^ must be >= 1");
  return beta_hat_real(static_cast<double>(n_hat), delta, ctx);
}

double corollary1_worst(double g, Index n_hat, double delta, const BoundContext& ctx) {
  if (!(g > 0.0) || !std::isfinite(g)) throw std::invalid_argument("corollary1_worst: g must be positive");
  if (n_hat < 1) throw std::invalid_argument("corollary1_worst: N^ must be >= 1");
  return worst_real(g, static_cast<double>(n_hat), delta, ctx);
}

double corollary1_bias_geometric(const BiasCoefficients& b, Index n_hat, double gamma, double rho) {
  require_rho(rho, "corollary1_bias_geometric");
  if (!(gamma > 0.0)) throw std::invalid_argument("corollary1_bias_geometric: gamma must be positive");
  if (n_hat < 1) throw std::invalid_argument("corollary1_bias_geometric: N^ must be >= 1");
  for (Index k = n_hat; k < b.width(); ++k) {
    if (b[k] != 0.0 || b[-k] != 0.0) {
      throw std::invalid_argument("corollary1_bias_geometric: b[k] must vanish for |k| >= N^");
    }
  }
  double sum = std::abs(1.0 - b[0]);
  for (Index k = 1; k < n_hat; ++k) {
    sum += (std::abs(1.0 - b[k]) + std::abs(1.0 - b[-k])) * std::pow(rho, static_cast<double>(k));
  }
  return gamma * sum + 2.0 * gamma * std::pow(rho, static_cast<double>(n_hat)) / (1.0 - rho);
}

double data_driven_a(double g, Index n_hat, double delta, const BoundContext& ctx) {
  return corollary1_worst(g, n_hat, delta, ctx) / ctx.phi_inf;
}

Certificate corollary1_data_driven(double a, double bias_bound, double est_sup) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("corollary1_data_driven: a must be >= 0");
  if (!(bias_bound >= 0.0) || !(est_sup >= 0.0)) {
    throw std::invalid_argument("corollary1_data_driven: bias bound and estimate sup must be >= 0");
  }
  Certificate c;
  c.statement = "corollary1.part4";
  c.inputs = {{"a", a}, {"b", bias_bound}, {"estimate_sup", est_sup}};
  if (a >= 1.0) {
    c.status = CertificateStatus::Unavailable;
    c.note = "a >= 1";
    return c;
  }
  c.status = CertificateStatus::Value;
  c.value = (a * est_sup + bias_bound) / (1.0 - a);
  c.epsilon = c.value;
  c.conclusion_epsilon = c.value;
  return c;
}

bool bt_window_condition(const Window& lag_window, Index N, double eps, double r1, Index m) {
  const double eps_hat = eps / (2.0 * r1);
  for (Index k = 0; k < m; ++k) {
    if (k >= N) return false;
    const double rhs = (1.0 - eps_hat) / (1.0 - static_cast<double>(k) / static_cast<double>(N));
    if (!(lag_window.at_lag(k) >= rhs)) return false;
  }
  for (Index k = m; k < lag_window.length(); ++k) {
    const double w = lag_window.at_lag(k);
    if (w < 0.0 || w > 1.0) return false;
  }
  return true;
}

Certificate check_theorem2(const EstimatorSpec& spec, int part, double eps, double delta, const BoundContext& ctx) {
  const auto& e = require_kind<BlackmanTukey>(spec, "check_theorem2");
  require_epsilon(eps, "check_theorem2");
  require_delta(delta, "check_theorem2");
  const double ratio = static_cast<double>(e.N) / static_cast<double>(2 * e.M - 1);
  switch (part) {
    case 1:
    case 2: {
      Certificate c = concentration_condition("theorem2.part" + std::to_string(part), part, ratio, e.M, eps, delta, ctx);
      c.inputs = {{"N", static_cast<double>(e.N)}, {"M", static_cast<double>(e.M)}};
      return c;
    }
    case 3: {
      const Index m = m_hat(eps, ctx);
      const double needed_n = 2.0 * static_cast<double>(m) * ctx.r1 / eps;
      Certificate c = bias_condition("theorem2.part3", eps, static_cast<double>(e.N), needed_n, m);
      c.delta = delta;
      const bool window_ok = bt_window_condition(e.window, e.N, eps, ctx.r1, m);
      if (e.M < m || !window_ok) c.status = CertificateStatus::Fails;
      c.note = std::string("M>=m_hat:") + (e.M >= m ? "yes" : "no") + ",window:" + (window_ok ? "yes" : "no");
      return c;
    }
    case 4: return conjunction("theorem2.part4", check_theorem2(spec, 1, eps, delta, ctx), check_theorem2(spec, 3, eps, delta, ctx));
    case 5: return conjunction("theorem2.part5", check_theorem2(spec, 2, eps, delta, ctx), check_theorem2(spec, 3, eps, delta, ctx));
    default: throw std::invalid_argument("check_theorem2: part must be 1..5");
  }
}

Certificate check_theorem3(const EstimatorSpec& spec, int part, double eps, double delta, const BoundContext& ctx) {
  const auto& e = require_kind<Bartlett>(spec, "check_theorem3");
  require_epsilon(eps, "check_theorem3");
  require_delta(delta, "check_theorem3");
  switch (part) {
    case 1:
    case 2: {
      Certificate c = concentration_condition("theorem3.part" + std::to_string(part), part,
                                              static_cast<double>(e.L), e.M, eps, delta, ctx);
      c.inputs = {{"N", static_cast<double>(e.L * e.M)}, {"M", static_cast<double>(e.M)}};
      return c;
    }
    case 3: {
      const Index m = m_hat(eps, ctx);
      Certificate c = bias_condition("theorem3.part3", eps, static_cast<double>(e.M),
                                     2.0 * static_cast<double>(m) * ctx.r1 / eps, m);
      c.delta = delta;
      return c;
    }
    case 4: return conjunction("theorem3.part4", check_theorem3(spec, 1, eps, delta, ctx), check_theorem3(spec, 3, eps, delta, ctx));
    case 5: return conjunction("theorem3.part5", check_theorem3(spec, 2, eps, delta, ctx), check_theorem3(spec, 3, eps, delta, ctx));
    default: throw std::invalid_argument("check_theorem3: part must be 1..5");
  }
}

Certificate check_theorem4(const EstimatorSpec& spec, int part, double eps, double delta, const BoundContext& ctx) {
  const auto& e = require_kind<Welch>(spec, "check_theorem4");
  require_epsilon(eps, "check_theorem4");
  require_delta(delta, "check_theorem4");
  switch (part) {
    case 1:
    case 2: {
      const double ratio = static_cast<double>(e.S) /
                           (1.0 + 2.0 * static_cast<double>(e.M) / static_cast<double>(e.K));
      Certificate c = concentration_condition("theorem4.part" + std::to_string(part), part, ratio, e.M, eps, delta, ctx);
      c.inputs = {{"M", static_cast<double>(e.M)}, {"K", static_cast<double>(e.K)}, {"S", static_cast<double>(e.S)}};
      return c;
    }
    case 3: {
      const Index m = m_hat(eps, ctx);
      double smallest = 1.0;
      for (Index k = 0; k < m; ++k) smallest = std::min(smallest, taper_correlation(e.taper, k));
      Certificate c = bias_condition("theorem4.part3", eps, smallest, 1.0 - eps / (2.0 * ctx.r1), m);
      c.delta = delta;
      if (e.M < m) c.status = CertificateStatus::Fails;
      c.note = std::string("M>=m_hat:") + (e.M >= m ? "yes" : "no");
      return c;
    }
    case 4: return conjunction("theorem4.part4", check_theorem4(spec, 1, eps, delta, ctx), check_theorem4(spec, 3, eps, delta, ctx));
    case 5: return conjunction("theorem4.part5", check_theorem4(spec, 2, eps, delta, ctx), check_theorem4(spec, 3, eps, delta, ctx));
    default: throw std::invalid_argument("check_theorem4: part must be 1..5");
  }
}

Certificate check_proposition1(const EstimatorSpec& spec, double eps, const BoundContext& ctx) {
  const auto& e = require_kind<BiasedPeriodogram>(spec, "check_proposition1");
  require_epsilon(eps, "check_proposition1");
  const Index m = m_hat(eps, ctx);
  return bias_condition("proposition1", eps, static_cast<double>(e.N), 2.0 * static_cast<double>(m) * ctx.r1 / eps, m);
}

Certificate check_proposition2(const EstimatorSpec& spec, double eps, const BoundContext& ctx) {
  const auto& e = require_kind<UnbiasedPeriodogram>(spec, "check_proposition2");
  require_epsilon(eps, "check_proposition2");
  const Index m = m_hat(eps, ctx);
  return bias_condition("proposition2", eps, static_cast<double>(e.N), static_cast<double>(m), m);
}

Certificate check_estimator(const EstimatorSpec& spec, int part, double eps, double delta, const BoundContext& ctx) {
  if (part < 1 || part > 5) throw std::invalid_argument("check_estimator: part must be 1..5");
  return std::visit(
      [&](const auto& e) -> Certificate {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, BlackmanTukey>) {
          return check_theorem2(spec, part, eps, delta, ctx);
        } else if constexpr (std::is_same_v<T, Bartlett>) {
          return check_theorem3(spec, part, eps, delta, ctx);
        } else if constexpr (std::is_same_v<T, Welch>) {
          return check_theorem4(spec, part, eps, delta, ctx);
        } else {
          if (part != 3) {
            throw CapabilityError(spec.name() + ": no concentration certificate (||A||_2 >= 1)");
          }
          Certificate c = std::is_same_v<T, BiasedPeriodogram> ? check_proposition1(spec, eps, ctx)
                                                               : check_proposition2(spec, eps, ctx);
          c.delta = delta;
          return c;
        }
      },
      spec.variant());
}

double bartlett_bias_closed_form(double gamma, double rho, Index M) {
  require_rho(rho, "bartlett_bias_closed_form");
  if (M < 1) throw std::invalid_argument("bartlett_bias_closed_form: M must be >= 1");
  return bartlett_bias_real(gamma, rho, static_cast<double>(M));
}

double bartlett_total_bound(Index N, double M, double delta, const BoundContext& ctx) {
  const DecayPair decay = require_decay(ctx, "bartlett_total_bound");
  if (!(M >= 1.0) || M > static_cast<double>(N)) {
    throw std::invalid_argument("bartlett_total_bound: M must lie in [1, N]");
  }
  return worst_real(M / static_cast<double>(N), M, delta, ctx) + bartlett_bias_real(decay.gamma, decay.rho, M);
}

BartlettChoice optimize_bartlett_m(Index N, double delta, const BoundContext& ctx) {
  if (N < 1) throw std::invalid_argument("optimize_bartlett_m: N must be >= 1");
  require_decay(ctx, "optimize_bartlett_m");
  std::vector<Index> divisors;
  for (Index d = 1; d * d <= N; ++d) {
    if (N % d != 0) continue;
    divisors.push_back(d);
    if (d * d != N) divisors.push_back(N / d);
  }
  std::sort(divisors.begin(), divisors.end());
  BartlettChoice best;
  best.total = std::numeric_limits<double>::infinity();
  bool found = false;
  for (Index M : divisors) {
    const double total = bartlett_total_bound(N, static_cast<double>(M), delta, ctx);
    if (std::isfinite(total) && total < best.total) {
      best.M = M;
      best.total = total;
      found = true;
    }
  }
  if (!found) {
    best.M = N;
    best.total = bartlett_total_bound(N, static_cast<double>(N), delta, ctx);
    best.fallback = true;
  }
  return best;
}

ContinuousBartlettChoice optimize_bartlett_m_continuous(Index N, double delta, const BoundContext& ctx) {
  if (N < 1) throw std::invalid_argument("optimize_bartlett_m_continuous: N must be >= 1");
  require_decay(ctx, "optimize_bartlett_m_continuous");
  const double top = std::log(static_cast<double>(N));
  auto total_at = [&](double log_m) { return bartlett_total_bound(N, std::exp(log_m), delta, ctx); };
  constexpr int kPoints = 4001;
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kPoints; ++i) {
    const double v = total_at(top * i / (kPoints - 1));
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  double lo = top * std::max(0, best - 1) / (kPoints - 1);
  double hi = top * std::min(kPoints - 1, best + 1) / (kPoints - 1);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int iter = 0; iter < 100 && hi - lo > 1e-12; ++iter) {
    const double a = hi - phi * (hi - lo);
    const double b = lo + phi * (hi - lo);
    if (total_at(a) <= total_at(b)) {
      hi = b;
    } else {
      lo = a;
    }
  }
  const double log_m = 0.5 * (lo + hi);
  ContinuousBartlettChoice out{std::exp(log_m), total_at(log_m)};
  if (best_value < out.total) out = {std::exp(top * best / (kPoints - 1)), best_value};
  return out;
}

}  // namespace specbound
