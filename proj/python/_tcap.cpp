#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "cli.hpp"
#include "tcap/analytic.hpp"
#include "tcap/errors.hpp"
#include "tcap/fading.hpp"
#include "tcap/mimo.hpp"
#include "tcap/model.hpp"
#include "tcap/simulator.hpp"

namespace py = pybind11;
using namespace tcap;

namespace {

BoundKind bound_kind(const std::string& name) {
  if (name == "lower") return BoundKind::LowerDominant;
  if (name == "markov") return BoundKind::Markov;
  if (name == "markov-relaxed") return BoundKind::MarkovRelaxed;
  if (name == "chebyshev") return BoundKind::ChebyshevRelaxed;
  if (name == "chernoff") return BoundKind::Chernoff;
  throw DomainError("kind", "unknown bound '" + name +
                                "' (lower, markov, markov-relaxed, chebyshev, chernoff)");
}

SimConfig sim_config(std::uint64_t trials, std::uint64_t seed, double window_delta,
                     double ci_level, unsigned threads) {
  return {trials, seed, window_delta, ci_level, threads};
}

ZQuantileFn quantile_or_quadrature(double alpha, const std::optional<ZQuantileFn>& quantile) {
  if (quantile) return *quantile;
  return [alpha](double e) { return z_ccdf_inverse(alpha, e); };
}

// Python exception objects carry the offending parameter as `.param`.
void raise_with_param(PyObject* type, const DomainError& e) {
  py::object instance = py::reinterpret_borrow<py::object>(type)(e.what());
  instance.attr("param") = e.param();
  PyErr_SetObject(type, instance.ptr());
}

}  // namespace

PYBIND11_MODULE(_tcap, m) {
  m.doc() = "Outage probability and transmission capacity of Poisson networks";

  static py::exception<Error> error(m, "TcapError");
  static py::exception<DomainError> domain_error(m, "DomainError", PyExc_ValueError);
  static py::exception<NumericError> numeric_error(m, "NumericError", PyExc_ArithmeticError);
  static py::exception<IoError> io_error(m, "IoError", PyExc_OSError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DomainError& e) {
      raise_with_param(domain_error.ptr(), e);
    } catch (const NumericError& e) {
      PyErr_SetString(numeric_error.ptr(), e.what());
    } catch (const IoError& e) {
      PyErr_SetString(io_error.ptr(), e.what());
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), e.what());
    }
  });

  py::class_<NetworkParams>(m, "NetworkParams")
      .def(py::init([](double lam, double alpha, double beta, double r) {
             return validate(NetworkParams{lam, alpha, beta, r});
           }),
           py::arg("lam") = 0.0, py::arg("alpha") = 4.0, py::arg("beta") = 1.0, py::arg("r") = 1.0,
           "Validated (lambda, alpha, beta, r); `lam` is the intensity per m^2.")
      .def_readwrite("lam", &NetworkParams::lambda)
      .def_readwrite("alpha", &NetworkParams::alpha)
      .def_readwrite("beta", &NetworkParams::beta)
      .def_readwrite("r", &NetworkParams::r)
      .def("with_lambda", &NetworkParams::with_lambda, py::arg("lam"))
      .def("__repr__", [](const NetworkParams& p) { return describe(p); });

  py::class_<FadingModel>(m, "FadingModel")
      .def(py::init([](const std::string& spec) { return FadingModel::parse(spec); }),
           py::arg("spec") = "none",
           "Parse 'none', 'rayleigh', 'nakagami:m=<m>' or 'table:<csv>'.")
      .def_static("tabulated", &FadingModel::tabulated, py::arg("values"), py::arg("density"))
      .def("moment", &FadingModel::moment, py::arg("p"))
      .def("truncated_moment", &FadingModel::truncated_moment, py::arg("p"), py::arg("t"))
      .def("tail_probability", &FadingModel::tail_probability, py::arg("t"))
      .def("density", &FadingModel::density, py::arg("h"))
      .def("__repr__", &FadingModel::describe);
  py::implicitly_convertible<py::str, FadingModel>();

  py::class_<Policy>(m, "Policy")
      .def(py::init([](const std::string& spec) { return Policy::parse(spec); }),
           py::arg("spec") = "plain",
           "Parse 'plain', 'threshold:t=<t>', 'fpc:gamma=<g>' or 'inversion'.")
      .def_property_readonly("parameter", &Policy::parameter)
      .def("__repr__", &Policy::describe);
  py::implicitly_convertible<py::str, Policy>();

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("p_hat", &Estimate::p_hat)
      .def_readonly("ci_lo", &Estimate::ci_lo)
      .def_readonly("ci_hi", &Estimate::ci_hi)
      .def_readonly("trials", &Estimate::trials)
      .def_readonly("events", &Estimate::events)
      .def_readonly("seed", &Estimate::seed)
      .def("__repr__", [](const Estimate& e) {
        return "Estimate(p_hat=" + std::to_string(e.p_hat) + ", ci=[" + std::to_string(e.ci_lo) +
               ", " + std::to_string(e.ci_hi) + "], trials=" + std::to_string(e.trials) + ")";
      });

  py::class_<ZQuantileTable>(m, "ZQuantileTable")
      .def_property_readonly("alpha", &ZQuantileTable::alpha)
      .def("__len__", &ZQuantileTable::size)
      .def("samples", &ZQuantileTable::samples)
      .def("ccdf", &ZQuantileTable::ccdf, py::arg("w"))
      .def("ccdf_inverse", &ZQuantileTable::ccdf_inverse, py::arg("eps"))
      .def("__call__", &ZQuantileTable::operator(), py::arg("eps"));

  // pathloss only
  m.def("dominant_disk_area", &dominant_disk_area, py::arg("params"));
  m.def("outage_lower", &outage_lower, py::arg("params"));
  m.def("outage_upper", [](const NetworkParams& p, const std::string& kind) {
    return outage_upper(p, bound_kind(kind));
  }, py::arg("params"), py::arg("kind") = "chernoff");
  m.def("outage_exact_pl4", &outage_exact_pl4, py::arg("params"));
  m.def("tc_upper", [](double eps, const NetworkParams& p) {
    return tc_upper(OutageConstraint(eps), p);
  }, py::arg("eps"), py::arg("params"));
  m.def("tc_lower", [](double eps, const NetworkParams& p, const std::string& kind) {
    return tc_lower(OutageConstraint(eps), p, bound_kind(kind));
  }, py::arg("eps"), py::arg("params"), py::arg("kind") = "chernoff");
  m.def("tc_exact_pl4", [](double eps, const NetworkParams& p) {
    return tc_exact_pl4(OutageConstraint(eps), p);
  }, py::arg("eps"), py::arg("params"));
  m.def("farfield_moments", [](const NetworkParams& p) {
    const FarFieldMoments f = farfield_moments(p);
    return py::make_tuple(f.mu, f.sigma2);
  }, py::arg("params"), "(mu, sigma2) of the far-field interference per unit intensity.");
  m.def("chernoff_exponent", [](const NetworkParams& p) {
    const ChernoffExponent c = chernoff_exponent(p);
    return py::make_tuple(c.theta, c.exponent);
  }, py::arg("params"));
  m.def("z4_ccdf", &z4_ccdf, py::arg("w"));
  m.def("z4_ccdf_inverse", &z4_ccdf_inverse, py::arg("eps"));
  m.def("z_ccdf", &z_ccdf, py::arg("alpha"), py::arg("w"));
  m.def("z_ccdf_inverse", &z_ccdf_inverse, py::arg("alpha"), py::arg("eps"));
  m.def("interference_hazard_disk", &interference_hazard_disk, py::arg("v"), py::arg("d"),
        py::arg("alpha"));

  // fading and scheduling
  m.def("outage_lower_fading", &outage_lower_fading, py::arg("params"),
        py::arg("fading") = FadingModel::none(), py::arg("policy") = Policy::plain());
  m.def("outage_approx_fading", &outage_approx_fading, py::arg("params"),
        py::arg("fading") = FadingModel::none(), py::arg("policy") = Policy::plain());
  m.def("tc_approx", [](double eps, const NetworkParams& p, const FadingModel& f, const Policy& pol) {
    return tc_approx(OutageConstraint(eps), p, f, pol);
  }, py::arg("eps"), py::arg("params"), py::arg("fading") = FadingModel::none(),
        py::arg("policy") = Policy::plain());
  m.def("outage_exact_rayleigh", &outage_exact_rayleigh, py::arg("params"));
  m.def("tc_exact_rayleigh", [](double eps, const NetworkParams& p) {
    return tc_exact_rayleigh(OutageConstraint(eps), p);
  }, py::arg("eps"), py::arg("params"));
  m.def("tc_exact_nakagami", [](double eps, const NetworkParams& p, int m_shape) {
    return tc_exact_nakagami(OutageConstraint(eps), p, m_shape);
  }, py::arg("eps"), py::arg("params"), py::arg("m"));
  m.def("threshold_gain", &threshold_gain, py::arg("alpha"), py::arg("fading"), py::arg("t"));
  m.def("fpc_gain", &fpc_gain, py::arg("alpha"), py::arg("fading"), py::arg("gamma"));

  // optimization
  m.def("optimal_beta", &optimal_beta, py::arg("alpha"));
  m.def("optimal_epsilon", [](double alpha, std::optional<ZQuantileFn> quantile) {
    return optimal_epsilon(alpha, quantile_or_quadrature(alpha, quantile)).value();
  }, py::arg("alpha"), py::arg("quantile") = py::none(),
        "Maximizer of (1 - eps) q(eps)^(-2/alpha); q defaults to the quadrature quantile.");
  m.def("tc_implicit", [](double eps, const NetworkParams& p, std::optional<ZQuantileFn> quantile) {
    return tc_implicit(OutageConstraint(eps), p, quantile_or_quadrature(p.alpha, quantile));
  }, py::arg("eps"), py::arg("params"), py::arg("quantile") = py::none());
  m.def("area_spectral_efficiency", &area_spectral_efficiency, py::arg("tc"), py::arg("beta"));

  // simulation
  m.def("simulate_outage",
        [](const NetworkParams& p, const FadingModel& f, const Policy& pol, std::uint64_t trials,
           std::uint64_t seed, double window_delta, double ci_level, unsigned threads) {
          const SimConfig sim = sim_config(trials, seed, window_delta, ci_level, threads);
          py::gil_scoped_release release;
          return simulate_outage(p, f, pol, sim);
        },
        py::arg("params"), py::arg("fading") = FadingModel::none(),
        py::arg("policy") = Policy::plain(), py::arg("trials") = 100000, py::arg("seed") = 1,
        py::arg("window_delta") = 1e-3, py::arg("ci_level") = 0.95, py::arg("threads") = 0);
  m.def("z_quantile_table",
        [](double alpha, std::uint64_t n_samples, std::uint64_t seed, int n_terms,
           unsigned threads) {
          py::gil_scoped_release release;
          return z_quantile_table(alpha, n_samples, seed, n_terms, threads);
        },
        py::arg("alpha"), py::arg("n_samples"), py::arg("seed") = 1, py::arg("n_terms") = 128,
        py::arg("threads") = 0);
  m.def("simulate_outage_mimo",
        [](const NetworkParams& p, int nt, int nr, const std::string& strategy,
           std::uint64_t trials, std::uint64_t seed, double window_delta, unsigned threads) {
          const MimoConfig mimo{nt, nr, MimoStrategy::parse(strategy)};
          const SimConfig sim = sim_config(trials, seed, window_delta, 0.95, threads);
          py::gil_scoped_release release;
          return simulate_outage_mimo(p, mimo, sim);
        },
        py::arg("params"), py::arg("nt") = 1, py::arg("nr") = 1, py::arg("strategy") = "mrc",
        py::arg("trials") = 20000, py::arg("seed") = 1, py::arg("window_delta") = 1e-2,
        py::arg("threads") = 0);
  m.def("tc_mimo",
        [](double eps, const NetworkParams& p, int nt, int nr, const std::string& strategy,
           std::uint64_t trials, std::uint64_t seed, double window_delta, unsigned threads) {
          const OutageConstraint checked(eps);
          const MimoConfig mimo{nt, nr, MimoStrategy::parse(strategy)};
          const SimConfig sim = sim_config(trials, seed, window_delta, 0.95, threads);
          py::gil_scoped_release release;
          return tc_mimo(checked, p, mimo, sim);
        },
        py::arg("eps"), py::arg("params"), py::arg("nt") = 1, py::arg("nr") = 1,
        py::arg("strategy") = "mrc", py::arg("trials") = 20000, py::arg("seed") = 1,
        py::arg("window_delta") = 1e-2, py::arg("threads") = 0);
  m.def("scaling_exponent", &scaling_exponent, py::arg("points"),
        "Least-squares slope of log y against log x.");

  m.def("run", [](const std::vector<std::string>& args) {
    std::vector<const char*> argv{"tcap"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli::run(static_cast<int>(argv.size()), argv.data());
  }, py::arg("args"), "Run the command-line tool in-process; returns the exit code.");
}
