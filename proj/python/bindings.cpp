#include "specbound/bounds.hpp"
#include "specbound/concentration.hpp"
#include "specbound/constants.hpp"
#include "specbound/estimators.hpp"
#include "specbound/quadform.hpp"
#include "specbound/signals.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace specbound;

namespace {

// (frequencies, list of n x n complex matrices)
py::tuple to_python(const SpectralEstimate& est) {
  return py::make_tuple(est.frequencies, est.matrices);
}

}  // namespace

PYBIND11_MODULE(_specbound, m) {
  m.doc() = "Spectral estimators and their non-asymptotic error certificates";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<CapabilityError>(m, "CapabilityError", PyExc_RuntimeError);

  py::enum_<NoiseKind>(m, "NoiseKind")
      .value("Gaussian", NoiseKind::Gaussian)
      .value("UniformScaled", NoiseKind::UniformScaled);

  py::class_<DecayPair>(m, "DecayPair")
      .def(py::init([](double gamma, double rho) { return DecayPair{gamma, rho}; }), py::arg("gamma"), py::arg("rho"))
      .def_readwrite("gamma", &DecayPair::gamma)
      .def_readwrite("rho", &DecayPair::rho);

  py::class_<SpectrumModel>(m, "SpectrumModel")
      .def_static("white_noise", &SpectrumModel::white_noise, py::arg("channels") = 1)
      .def_static("geometric", &SpectrumModel::geometric, py::arg("rho"))
      .def_static("state_space", &SpectrumModel::state_space, py::arg("A"), py::arg("B"), py::arg("C"), py::arg("D"))
      .def_static("example2", &SpectrumModel::example2)
      .def("with_decay", &SpectrumModel::with_decay)
      .def_property_readonly("channels", &SpectrumModel::channels)
      .def_property_readonly("decay", &SpectrumModel::decay)
      .def_property_readonly("name", &SpectrumModel::name);

  m.def("exact_autocov", &exact_autocov, py::arg("model"), py::arg("k"));
  m.def("psd", &psd, py::arg("model"), py::arg("s"));
  m.def("phi_inf", [](const SpectrumModel& model) { return phi_inf(model).value; });
  m.def("r1_norm", [](const SpectrumModel& model) { return r1_norm(model).value; });
  m.def("tail_sum", &tail_sum, py::arg("model"), py::arg("from_lag"));
  m.def(
      "certify_decay",
      [](const SpectrumModel& model, double rho_target) {
        const auto c = certify_decay(model, rho_target);
        return py::dict(py::arg("gamma") = c.gamma, py::arg("rho") = c.rho, py::arg("kappa") = c.kappa);
      },
      py::arg("model"), py::arg("rho_target"));
  m.def(
      "sample",
      [](const SpectrumModel& model, Index N, NoiseKind noise, std::uint64_t seed, std::uint64_t path) {
        return sample(model, N, noise, seed, path).values();
      },
      py::arg("model"), py::arg("N"), py::arg("noise") = NoiseKind::Gaussian, py::arg("seed") = 0, py::arg("path") = 0);

  py::enum_<WindowKind>(m, "WindowKind")
      .value("Rectangular", WindowKind::Rectangular)
      .value("Triangular", WindowKind::Triangular)
      .value("Hann", WindowKind::Hann)
      .value("Hamming", WindowKind::Hamming)
      .value("Blackman", WindowKind::Blackman);

  py::class_<EstimatorSpec>(m, "EstimatorSpec")
      .def_static("biased_periodogram", &EstimatorSpec::biased_periodogram, py::arg("N"))
      .def_static("unbiased_periodogram", &EstimatorSpec::unbiased_periodogram, py::arg("N"))
      .def_static("blackman_tukey",
                  py::overload_cast<Index, Index, WindowKind>(&EstimatorSpec::blackman_tukey), py::arg("N"),
                  py::arg("M"), py::arg("window") = WindowKind::Rectangular)
      .def_static("bartlett", &EstimatorSpec::bartlett, py::arg("M"), py::arg("L"))
      .def_static("welch", py::overload_cast<Index, Index, Index, WindowKind>(&EstimatorSpec::welch), py::arg("M"),
                  py::arg("K"), py::arg("S"), py::arg("window") = WindowKind::Hann)
      .def_property_readonly("samples", &EstimatorSpec::samples)
      .def_property_readonly("name", &EstimatorSpec::name);

  m.def("build_matrix", [](const EstimatorSpec& spec) { return build_matrix(spec).entries(); });
  m.def("closed_form_bias", [](const EstimatorSpec& spec) { return closed_form_bias(spec).values(); },
        "b[-(N-1)], ..., b[N-1]");
  m.def("bias_coefficients", [](const Matrix& A) { return bias_coefficients(QuadraticForm(A)).values(); });
  m.def(
      "certificate_params",
      [](const EstimatorSpec& spec) -> std::optional<std::pair<double, Index>> {
        const auto p = certificate_params(spec);
        if (!p) return std::nullopt;
        return std::make_pair(p->g, p->n_hat);
      },
      "(g, N^) or None for the periodograms");
  m.def(
      "evaluate_fast",
      [](const EstimatorSpec& spec, const Matrix& Y, const std::vector<double>& grid) {
        return to_python(evaluate_fast(spec, DataMatrix(Y), grid));
      },
      py::arg("spec"), py::arg("Y"), py::arg("grid"));
  m.def(
      "evaluate_generic",
      [](const Matrix& Y, const Matrix& A, const std::vector<double>& grid) {
        return to_python(evaluate_generic(DataMatrix(Y), QuadraticForm(A), grid));
      },
      py::arg("Y"), py::arg("A"), py::arg("grid"));
  m.def(
      "norm_summary",
      [](const Matrix& A) {
        const QuadraticForm q(A);
        return py::dict(py::arg("spectral") = q.spectral_norm(), py::arg("frobenius") = q.frobenius_norm(),
                        py::arg("xi") = q.xi(), py::arg("envelope") = norm_envelope(q),
                        py::arg("truncation_width") = q.truncation_width());
      },
      py::arg("A"));

  py::class_<NoiseAssumption>(m, "NoiseAssumption")
      .def_static("gaussian", &NoiseAssumption::gaussian)
      .def_static("sub_gaussian", &NoiseAssumption::sub_gaussian, py::arg("sigma"))
      .def_property_readonly("name", &NoiseAssumption::name);

  py::class_<BoundContext>(m, "BoundContext")
      .def_readonly("phi_inf", &BoundContext::phi_inf)
      .def_readonly("r1", &BoundContext::r1)
      .def_readonly("channels", &BoundContext::channels)
      .def_readonly("decay", &BoundContext::decay);

  m.def("make_context", py::overload_cast<const SpectrumModel&, NoiseAssumption>(&make_context), py::arg("model"),
        py::arg("assumption") = NoiseAssumption::gaussian());
  m.def("make_context_values",
        py::overload_cast<NoiseAssumption, double, double, Index, std::optional<DecayPair>>(&make_context),
        py::arg("assumption"), py::arg("phi_inf"), py::arg("r1"), py::arg("channels") = 1,
        py::arg("decay") = std::nullopt);

  m.def("alpha", &alpha, py::arg("eps"), py::arg("ctx"));
  m.def("beta", &beta, py::arg("delta"), py::arg("ctx"));
  m.def("m_hat", py::overload_cast<double, const BoundContext&>(&m_hat), py::arg("eps"), py::arg("ctx"));
  m.def("corollary1_pointwise", py::overload_cast<double, double, const BoundContext&>(&corollary1_pointwise),
        py::arg("xi"), py::arg("delta"), py::arg("ctx"));
  m.def("corollary1_worst", &corollary1_worst, py::arg("g"), py::arg("n_hat"), py::arg("delta"), py::arg("ctx"));
  m.def(
      "check_estimator",
      [](const EstimatorSpec& spec, int part, double eps, double delta, const BoundContext& ctx) {
        const Certificate c = check_estimator(spec, part, eps, delta, ctx);
        return py::dict(py::arg("statement") = c.statement, py::arg("holds") = c.holds(), py::arg("lhs") = c.lhs,
                        py::arg("rhs") = c.rhs, py::arg("record") = to_record(c));
      },
      py::arg("spec"), py::arg("part"), py::arg("eps"), py::arg("delta"), py::arg("ctx"));
  m.def("bartlett_bias_closed_form", &bartlett_bias_closed_form, py::arg("gamma"), py::arg("rho"), py::arg("M"));
  m.def(
      "optimize_bartlett_m",
      [](Index N, double delta, const BoundContext& ctx) {
        const auto c = optimize_bartlett_m(N, delta, ctx);
        return py::make_tuple(c.M, c.total);
      },
      py::arg("N"), py::arg("delta"), py::arg("ctx"));

  m.def("hanson_wright_tail", &hanson_wright_tail, py::arg("eps"), py::arg("b"), py::arg("frob"), py::arg("spec"));
  m.def("gaussian_hw_tail", &gaussian_hw_tail, py::arg("eps"), py::arg("frob"), py::arg("spec"));
  m.def(
      "subexp_tail", [](double t, double nu, double alpha_se) { return subexp_tail(t, {nu, alpha_se}); },
      py::arg("t"), py::arg("nu"), py::arg("alpha_se"));

  py::dict constants_table;
  constants_table["gaussian"] = py::make_tuple(constants::kGaussian.c_mult, constants::kGaussian.c_exp, 1.0);
  constants_table["subgaussian"] = py::make_tuple(constants::kSubGaussian.c_mult, constants::kSubGaussian.c_exp);
  constants_table["hanson_wright_exp"] = constants::kHansonWrightExp;
  constants_table["gaussian_hanson_wright_exp"] = constants::kGaussianHansonWrightExp;
  m.attr("constants") = constants_table;
}
