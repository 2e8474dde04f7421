#include "layerr/experiment.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <sstream>

namespace py = pybind11;
using namespace layerr;

namespace {

Vec3 vec(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

std::pair<std::vector<double>, std::vector<double>> rule(const std::string& name, int n)
{
    quad::Rule1D r;
    if (name == "gl") r = quad::gauss_legendre(n);
    else if (name == "tz") r = quad::trapezoidal(n);
    else if (name == "laguerre") r = quad::gauss_laguerre(n);
    else throw std::invalid_argument("unknown rule '" + name + "' (expected gl|tz|laguerre)");
    return {r.nodes, r.weights};
}

Surface surface(const std::string& shape, double radius, double a, double b, const std::string& map)
{
    SurfaceSpec spec;
    spec.shape = shape;
    spec.radius = radius;
    spec.a = a;
    spec.b = b;
    spec.theta_map = parse_theta_map(map);
    return make_surface(spec);
}

py::dict breakdown(const EstimateBreakdown& b)
{
    py::dict d;
    d["e_tz"] = b.e_tz;
    d["e_gl"] = b.e_gl;
    d["total"] = b.total;
    d["tz_skipped"] = b.tz_skipped;
    d["tz_skipped_by_cone"] = b.tz_skipped_by_cone;
    d["phi0_star"] = b.phi0_star;
    d["t0_star"] = b.t0_star;
    d["t_star"] = b.closest.t;
    d["phi_star"] = b.closest.phi;
    d["distance_to_grid"] = b.closest.distance;
    d["note"] = b.note;
    return d;
}

} // namespace

PYBIND11_MODULE(_layerr, m)
{
    m.doc() = "Quadrature error estimates for layer potentials";

    // Translators are tried newest first, so the base class goes first.
    py::register_exception<Error>(m, "LayerrError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("rule", &rule, py::arg("name"), py::arg("n"), "Nodes and weights of a gl, tz or laguerre rule.");

    py::class_<Surface>(m, "Surface")
        .def(py::init(&surface), py::arg("shape") = "sphere", py::arg("radius") = 1.0, py::arg("a") = 1.0,
             py::arg("b") = 3.0, py::arg("theta_map") = "cosine")
        .def_property_readonly("name", &Surface::name)
        .def_property_readonly("is_axisymmetric", &Surface::is_axisymmetric)
        .def("position", [](const Surface& s, double theta, double phi) {
            const Vec3 p = s.eval(theta, phi).pos;
            return std::array<double, 3>{p.x, p.y, p.z};
        });

    py::class_<PotentialEvaluator>(m, "PotentialEvaluator")
        .def(py::init([](const Surface& s, const std::string& kernel, double omega, const std::string& density,
                         int n_t, int n_phi) {
                 return PotentialEvaluator(s, parse_kernel(kernel, omega), parse_density(density), n_t, n_phi);
             }),
             py::arg("surface"), py::arg("kernel") = "harmonic-single", py::arg("omega") = 0.0,
             py::arg("density") = "unit", py::arg("n_t") = 30, py::arg("n_phi") = 60)
        .def("quadrature", [](const PotentialEvaluator& e, std::array<double, 3> x) { return e.quadrature(vec(x)); })
        .def("reference", [](const PotentialEvaluator& e, std::array<double, 3> x) { return e.reference(vec(x)); })
        .def("measured_error",
             [](const PotentialEvaluator& e, std::array<double, 3> x) { return e.measured_error(vec(x)); });

    py::class_<ErrorEstimator>(m, "ErrorEstimator")
        .def(py::init([](const Surface& s, const std::string& kernel, double omega, const std::string& density,
                         int n_t, int n_phi) {
                 return ErrorEstimator(s, parse_kernel(kernel, omega), parse_density(density), n_t, n_phi);
             }),
             py::arg("surface"), py::arg("kernel") = "harmonic-single", py::arg("omega") = 0.0,
             py::arg("density") = "unit", py::arg("n_t") = 30, py::arg("n_phi") = 60)
        .def("estimate", [](const ErrorEstimator& e, std::array<double, 3> x) { return breakdown(e.estimate(vec(x))); });

    m.def("est_tz", &est_tz, py::arg("phi0"), py::arg("n"), py::arg("p"));
    m.def("est_gl", &est_gl, py::arg("t0"), py::arg("n"), py::arg("p"));
    m.def("sphere_simplified", &sphere_simplified, py::arg("zeta"), py::arg("a"), py::arg("p"), py::arg("n"));
    m.def("circle_root", [](double a, std::array<double, 3> x) { return circle_root(a, vec(x)).value; });
    m.def("sphere_theta_root",
          [](double a, double phi, std::array<double, 3> x) { return sphere_theta_root(a, phi, vec(x)).value; });
    m.def("axisym_phi_root", [](const Surface& s, double theta, std::array<double, 3> x) {
        return axisym_phi_root(s, theta, vec(x)).value;
    });

    m.def("preset_names", &preset_names);
    m.def("preset_config", [](const std::string& name) { return to_ini(preset(name)); },
          "INI text of a named preset.");
    m.def(
        "run_config",
        [](const std::string& ini, int threads) {
            const ExperimentConfig c = parse_config_string(ini);
            ExperimentResult r;
            {
                py::gil_scoped_release release;
                r = run_points(c, threads);
            }
            std::ostringstream os;
            write_csv(os, r);
            return os.str();
        },
        py::arg("ini"), py::arg("threads") = 0, "Runs an INI config and returns the CSV text.");
}
