// Python bindings for the main operations: pipeline evaluation, closed-form
// predictions, weak values, and the photon-counting Monte Carlo.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wmsim/monte_carlo.hpp"
#include "wmsim/reports.hpp"
#include "wmsim/theory.hpp"
#include "wmsim/weak_values.hpp"

namespace py = pybind11;
using namespace wmsim;

namespace {

InterferometerConfig make_config(double phi, double theta, const std::string& interpretation,
                                 double visibility, bool disentangler) {
    return {{phi}, {theta, interpretation_from_string(interpretation)}, disentangler, visibility};
}

}  // namespace

PYBIND11_MODULE(wmsim, m) {
    m.doc() = "Interferometric weak-measurement simulator: state-evolution pipeline, "
              "extended weak values, closed-form predictions, photon-counting Monte Carlo";

    py::register_exception<BasisMismatchError>(m, "BasisMismatchError", PyExc_RuntimeError);
    py::register_exception<UndefinedWeakValueError>(m, "UndefinedWeakValueError",
                                                    PyExc_ValueError);
    py::register_exception<SingularPointError>(m, "SingularPointError", PyExc_ValueError);
    py::register_exception<PostSelectionImpossibleError>(m, "PostSelectionImpossibleError",
                                                         PyExc_ValueError);
    py::register_exception<NoOptimumError>(m, "NoOptimumError", PyExc_ValueError);

    py::class_<SimulationOutcome>(m, "SimulationOutcome")
        .def_readonly("p_postselect", &SimulationOutcome::p_postselect)
        .def_readonly("p_b1", &SimulationOutcome::p_b1)
        .def_readonly("p_b2", &SimulationOutcome::p_b2)
        .def_readonly("diff", &SimulationOutcome::diff)
        .def_readonly("variance", &SimulationOutcome::variance)
        .def_readonly("fluctuation", &SimulationOutcome::fluctuation)
        .def("__repr__", [](const SimulationOutcome& o) {
            return "SimulationOutcome(p_postselect=" + format_full(o.p_postselect) +
                   ", diff=" + format_full(o.diff) + ")";
        });

    py::class_<TheoryPoint>(m, "TheoryPoint")
        .def_readonly("phi", &TheoryPoint::phi_deg)
        .def_readonly("theta", &TheoryPoint::theta_deg)
        .def_readonly("zeta", &TheoryPoint::zeta)
        .def_readonly("diff", &TheoryPoint::diff)
        .def_readonly("variance", &TheoryPoint::variance)
        .def_readonly("fluctuation", &TheoryPoint::fluctuation)
        .def_readonly("p_postselect", &TheoryPoint::p_postselect)
        .def("__repr__", [](const TheoryPoint& p) {
            return "TheoryPoint(zeta=" + format_full(p.zeta) + ", diff=" + format_full(p.diff) +
                   ")";
        });

    py::class_<CountResult>(m, "CountResult")
        .def_readonly("n_postselected", &CountResult::n_postselected)
        .def_readonly("n_b1", &CountResult::n_b1)
        .def_readonly("n_b2", &CountResult::n_b2)
        .def_readonly("estimate", &CountResult::estimate)
        .def_readonly("stderr", &CountResult::stderr_)
        .def_readonly("estimate_defined", &CountResult::estimate_defined)
        .def_readonly("seed", &CountResult::seed);

    py::class_<ShotNoiseReport>(m, "ShotNoiseReport")
        .def_readonly("true_diff", &ShotNoiseReport::true_diff)
        .def_readonly("predicted_fluctuation", &ShotNoiseReport::predicted_fluctuation)
        .def_readonly("mean_estimate", &ShotNoiseReport::mean_estimate)
        .def_readonly("mean_n_postselected", &ShotNoiseReport::mean_n_postselected)
        .def_readonly("empirical_stddev", &ShotNoiseReport::empirical_stddev)
        .def_readonly("predicted_stddev", &ShotNoiseReport::predicted_stddev)
        .def_readonly("empirical_fluctuation", &ShotNoiseReport::empirical_fluctuation)
        .def_readonly("stddev_ratio", &ShotNoiseReport::stddev_ratio)
        .def_readonly("degenerate", &ShotNoiseReport::degenerate);

    m.def(
        "run_pipeline",
        [](double phi, double theta, const std::string& interpretation, double visibility,
           bool disentangler) {
            return run_pipeline(make_config(phi, theta, interpretation, visibility, disentangler));
        },
        py::arg("phi"), py::arg("theta"), py::arg("interpretation") = "sigma-x",
        py::arg("visibility") = 1.0, py::arg("disentangler") = false,
        "Brute-force state evolution through the full optical pipeline");

    m.def(
        "theory_point",
        [](double phi, double theta, const std::string& interpretation) {
            return theory_point(phi, theta, interpretation_from_string(interpretation));
        },
        py::arg("phi"), py::arg("theta"), py::arg("interpretation") = "sigma-x",
        "Closed-form zeta, diff, variance, fluctuation and post-selection probability");

    m.def(
        "prob_difference",
        [](double theta, Cplx w, const std::string& interpretation) {
            return prob_difference(theta, w, interpretation_from_string(interpretation));
        },
        py::arg("theta"), py::arg("w"), py::arg("interpretation") = "sigma-x");

    m.def("zeta", &zeta, py::arg("theta"), py::arg("w_real"));
    m.def("fluctuation", &fluctuation, py::arg("theta"), py::arg("w_real"));
    m.def("optimal_theta", &optimal_theta, py::arg("w_real"));
    m.def("strength_correspondence", &strength_correspondence, py::arg("theta"));
    m.def("back_action_eta", &back_action_eta, py::arg("theta"));
    m.def("istkh_form", &istkh_form, py::arg("theta"), py::arg("w"));
    m.def("istkh_experimental_weak_value", &istkh_experimental_weak_value, py::arg("w"),
          py::arg("eta"));
    m.def(
        "gaussian_pointer_q", [](double s, Cplx w) { return gaussian_pointer_q({s, w}); },
        py::arg("s"), py::arg("w"), "Pointer-position readout <q>'/g, all orders");
    m.def(
        "gaussian_pointer_p", [](double s, Cplx w) { return gaussian_pointer_p({s, w}); },
        py::arg("s"), py::arg("w"), "Pointer-momentum readout g<p>', all orders");
    m.def(
        "visibility_adjusted_diff",
        [](double theta, Cplx w, double v, const std::string& interpretation) {
            return visibility_adjusted_diff(theta, w, v,
                                            interpretation_from_string(interpretation));
        },
        py::arg("theta"), py::arg("w"), py::arg("visibility"),
        py::arg("interpretation") = "sigma-x");

    m.def("sigma_x_weak_values", &sigma_x_extended_weak_values, py::arg("phi"),
          "Extended weak values of sigma_x (x) A at ports b1, b2");
    m.def("sigma_y_weak_values", &sigma_y_extended_weak_values, py::arg("phi"),
          "Extended weak values of sigma_y (x) A at ports b1, b2");
    m.def("normalization_factor",
          [](double phi, double theta, const std::string& interpretation) {
              return normalization_factor(phi, theta, interpretation_from_string(interpretation));
          },
          py::arg("phi"), py::arg("theta"), py::arg("interpretation") = "sigma-x");
    m.def(
        "final_state_coefficients",
        [](double phi, double theta) { return final_state_coefficients(phi, theta); },
        py::arg("phi"), py::arg("theta"),
        "Post-selected path-state coefficients (c_b1, c_b2) under the sigma-x coupling");

    m.def(
        "simulate_counts",
        [](double phi, double theta, std::uint64_t n_photons, std::uint64_t seed,
           const std::string& interpretation, double visibility, bool disentangler,
           unsigned workers) {
            const ShotConfig sc{n_photons, seed,
                                make_config(phi, theta, interpretation, visibility, disentangler)};
            return simulate_counts(sc, workers);
        },
        py::arg("phi"), py::arg("theta"), py::arg("n_photons"), py::arg("seed"),
        py::arg("interpretation") = "sigma-y", py::arg("visibility") = 1.0,
        py::arg("disentangler") = false, py::arg("workers") = 1,
        "Deterministic photon-counting run; bit-identical for any worker count");

    m.def(
        "shot_noise_validation",
        [](double phi, double theta, std::uint64_t n_photons, unsigned n_trials,
           std::uint64_t seed, const std::string& interpretation, unsigned workers) {
            return shot_noise_validation(phi, theta, n_photons, n_trials, seed,
                                         interpretation_from_string(interpretation), workers);
        },
        py::arg("phi"), py::arg("theta"), py::arg("n_photons"), py::arg("n_trials"),
        py::arg("seed"), py::arg("interpretation") = "sigma-y", py::arg("workers") = 1);

#ifdef WMSIM_VERSION
#define WMSIM_STR_IMPL(x) #x
#define WMSIM_STR(x) WMSIM_STR_IMPL(x)
    m.attr("__version__") = WMSIM_STR(WMSIM_VERSION);
#else
    m.attr("__version__") = "dev";
#endif
}
