#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "abshift/abkernel.hpp"
#include "abshift/evolution.hpp"
#include "abshift/experiment.hpp"
#include "abshift/iodo.hpp"
#include "abshift/quadrature.hpp"
#include "abshift/specfun.hpp"
#include "abshift/superosc.hpp"

namespace py = pybind11;
using namespace abshift;

namespace {

std::string code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::singular_time: return "singular_time";
    case ErrorCode::outside_stability_radius: return "outside_stability_radius";
    case ErrorCode::bessel_tail: return "bessel_tail";
    case ErrorCode::winding_tail: return "winding_tail";
    case ErrorCode::quadrature_tail: return "quadrature_tail";
    case ErrorCode::series_tail: return "series_tail";
    case ErrorCode::cutoff_insufficient: return "cutoff_insufficient";
  }
  return "unknown";
}

// Runs one experiment on a JSON config string; returns (exit_code, jsonl lines).
py::tuple run(const std::string& name, const std::string& config, std::uint64_t seed) {
  RunOptions opts;
  opts.seed = seed;
  const RunResult res = run_experiment(name, parse_config(config), opts);
  py::list lines;
  for (const Record& r : res.records) lines.append(to_jsonl(r));
  return py::make_tuple(res.exit_code, lines);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Superoscillation evolution in the Aharonov-Bohm field";

  static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_RuntimeError);
  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const NumericalError& e) {
      const py::object type = numerical_error;
      py::object inst = type(e.what());
      inst.attr("code") = code_name(e.code());
      inst.attr("achieved") = e.achieved();
      inst.attr("suggestion") = e.suggestion();
      PyErr_SetObject(numerical_error.ptr(), inst.ptr());
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    }
  });

  py::enum_<KernelMode>(m, "KernelMode")
      .value("winding", KernelMode::winding)
      .value("unit", KernelMode::unit);

  py::class_<PhysicsConfig>(m, "PhysicsConfig")
      .def(py::init<double, double, double, double>(), py::arg("M") = 1.0, py::arg("hbar") = 1.0,
           py::arg("t") = 1.0, py::arg("xi") = 0.0)
      .def_property_readonly("M", &PhysicsConfig::M)
      .def_property_readonly("hbar", &PhysicsConfig::hbar)
      .def_property_readonly("t", &PhysicsConfig::t)
      .def_property_readonly("xi", &PhysicsConfig::xi)
      .def_property_readonly("xi_i", &PhysicsConfig::xi_i)
      .def_property_readonly("xi_f", &PhysicsConfig::xi_f);

  py::class_<PolarPoint>(m, "PolarPoint")
      .def(py::init<double, double>(), py::arg("r"), py::arg("phi") = 0.0)
      .def_readonly("r", &PolarPoint::r)
      .def_readonly("phi", &PolarPoint::phi);

  py::class_<WindingTruncation>(m, "WindingTruncation")
      .def(py::init<>())
      .def_readwrite("N", &WindingTruncation::N)
      .def_readwrite("tail_tol", &WindingTruncation::tail_tol)
      .def_readwrite("adaptive", &WindingTruncation::adaptive);

  py::class_<QuadratureSpec>(m, "QuadratureSpec")
      .def(py::init<>())
      .def_readwrite("n_theta", &QuadratureSpec::n_theta)
      .def_readwrite("n_u", &QuadratureSpec::n_u)
      .def_readwrite("u_max", &QuadratureSpec::u_max)
      .def_readwrite("tol", &QuadratureSpec::tol);

  py::class_<Diagnostics>(m, "Diagnostics")
      .def_readonly("terms_used", &Diagnostics::terms_used)
      .def_readonly("condition_number", &Diagnostics::condition_number)
      .def_readonly("winding_tail", &Diagnostics::winding_tail)
      .def_readonly("quadrature_tail", &Diagnostics::quadrature_tail)
      .def_readonly("node_doubling", &Diagnostics::node_doubling)
      .def_readonly("series_tail", &Diagnostics::series_tail)
      .def_readonly("cancellation_warning", &Diagnostics::cancellation_warning)
      .def_readonly("operator_consistency", &Diagnostics::operator_consistency);

  py::class_<FieldValue>(m, "FieldValue")
      .def_readonly("value", &FieldValue::value)
      .def_readonly("error", &FieldValue::error)
      .def_readonly("diagnostics", &FieldValue::diagnostics);

  py::class_<EntireSeries>(m, "EntireSeries")
      .def(py::init<std::vector<Complex>>(), py::arg("coeffs"))
      .def_static("exponential", &EntireSeries::exponential, py::arg("a"), py::arg("degree"))
      .def_static("identity", &EntireSeries::identity)
      .def_static("zero", &EntireSeries::zero)
      .def_property_readonly("coeffs", &EntireSeries::coeffs)
      .def_property_readonly("decay_C", &EntireSeries::decay_C)
      .def_property_readonly("decay_b", &EntireSeries::decay_b)
      .def("__call__", [](const EntireSeries& s, Complex w) { return entire_eval(s, w); });

  py::class_<SuperoscSpec>(m, "SuperoscSpec")
      .def(py::init([](int n, double a, const EntireSeries& g, const EntireSeries& h) {
             SuperoscSpec s;
             s.n = n;
             s.a = a;
             s.g = g;
             s.h = h;
             return s;
           }),
           py::arg("n") = 1, py::arg("a") = 2.0, py::arg("g") = EntireSeries::identity(),
           py::arg("h") = EntireSeries::zero())
      .def_readwrite("n", &SuperoscSpec::n)
      .def_readwrite("a", &SuperoscSpec::a)
      .def_readwrite("g", &SuperoscSpec::g)
      .def_readwrite("h", &SuperoscSpec::h);

  py::class_<SumResult>(m, "SumResult")
      .def_readonly("value", &SumResult::value)
      .def_readonly("kappa", &SumResult::kappa)
      .def_readonly("cancellation_warning", &SumResult::cancellation_warning);

  py::class_<SupershiftRow>(m, "SupershiftRow")
      .def_readonly("n", &SupershiftRow::n)
      .def_readonly("value", &SupershiftRow::value)
      .def_readonly("error", &SupershiftRow::error)
      .def_readonly("kappa", &SupershiftRow::kappa)
      .def_readonly("error_estimate", &SupershiftRow::error_estimate)
      .def_readonly("flagged", &SupershiftRow::flagged);

  py::class_<SupershiftReport>(m, "SupershiftReport")
      .def_readonly("limit", &SupershiftReport::limit)
      .def_readonly("M_max", &SupershiftReport::M_max)
      .def_readonly("rows", &SupershiftReport::rows);

  py::class_<LambdaBound>(m, "LambdaBound")
      .def_readonly("partial", &LambdaBound::partial)
      .def_readonly("tail", &LambdaBound::tail)
      .def_readonly("terms", &LambdaBound::terms)
      .def_property_readonly("total", &LambdaBound::total);

  m.def("ln_gamma", &ln_gamma, py::arg("x"));
  m.def(
      "bessel_j", [](double nu, Complex z) { return bessel_j(BesselOrder(nu), z).value; },
      py::arg("nu"), py::arg("z"));
  m.def("coeff_C", &coeff_C, py::arg("n"), py::arg("j"), py::arg("a"));
  m.def("f_n", &f_n, py::arg("x"), py::arg("n"), py::arg("a"), py::arg("tol") = kCancellationTol);
  m.def("y_n", &y_n, py::arg("x"), py::arg("y"), py::arg("spec"),
        py::arg("tol") = kCancellationTol);

  m.def(
      "f_xi",
      [](const PhysicsConfig& cfg, double r, double phi, double theta, Complex rho) {
        return f_xi(cfg, r, phi, theta, rho).value;
      },
      py::arg("cfg"), py::arg("r"), py::arg("phi"), py::arg("theta"), py::arg("rho"));
  m.def("f_xi_bound", &f_xi_bound, py::arg("cfg"), py::arg("r"), py::arg("rho"));

  m.def("psi_direct", &psi_direct, py::arg("cfg"), py::arg("a"), py::arg("b"), py::arg("target"),
        py::arg("trunc") = WindingTruncation{}, py::arg("spec") = QuadratureSpec{});
  m.def("required_series_order", &required_series_order, py::arg("cfg"), py::arg("target"),
        py::arg("S"), py::arg("tol"), py::arg("mode") = KernelMode::winding);
  m.def(
      "psi_series",
      py::overload_cast<const PhysicsConfig&, Complex, Complex, const PolarPoint&, int,
                        const QuadratureSpec&>(&psi_series),
      py::arg("cfg"), py::arg("a"), py::arg("b"), py::arg("target"),
      py::arg("M_max") = kDefaultSeriesOrder, py::arg("spec") = QuadratureSpec{});
  m.def(
      "psi_gh",
      [](const PhysicsConfig& cfg, double a, const EntireSeries& g, const EntireSeries& h,
         const PolarPoint& target, int M_max) { return psi_gh(cfg, a, g, h, target, M_max); },
      py::arg("cfg"), py::arg("a"), py::arg("g"), py::arg("h"), py::arg("target"),
      py::arg("M_max") = kDefaultSeriesOrder);
  m.def(
      "supershift_sum",
      py::overload_cast<const PhysicsConfig&, const SuperoscSpec&, const PolarPoint&, int,
                        const QuadratureSpec&>(&supershift_sum),
      py::arg("cfg"), py::arg("spec"), py::arg("target"), py::arg("M_max") = 0,
      py::arg("qspec") = QuadratureSpec{});
  m.def("supershift_convergence_report", &supershift_convergence_report, py::arg("cfg"),
        py::arg("spec"), py::arg("target"), py::arg("n_list"), py::arg("M_max") = 0,
        py::arg("qspec") = QuadratureSpec{});

  m.def(
      "operator_apply_at_zero",
      [](const EntireSeries& g, const EntireSeries& h, int mm, int l, const EntireSeries& f,
         int cutoff) { return operator_apply_at_zero(g, h, OperatorIndex(mm, l), f, cutoff); },
      py::arg("g"), py::arg("h"), py::arg("m"), py::arg("l"), py::arg("f"), py::arg("cutoff"));
  m.def("lambda_bound", &lambda_bound, py::arg("cfg"), py::arg("g"), py::arg("h"), py::arg("b"),
        py::arg("M_max"));
  m.def(
      "a1_norm_estimate",
      [](const std::function<Complex(Complex)>& f, double B, int samples, double radius) {
        return a1_norm_estimate(f, B, samples, radius);
      },
      py::arg("f"), py::arg("B"), py::arg("samples"), py::arg("radius") = kDefaultSampleRadius);

  m.def("experiment_names", &experiment_names);
  m.def("run_experiment", &run, py::arg("name"), py::arg("config"), py::arg("seed") = 0x5eedULL);
}
