#include "layerr/potentials.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace layerr;
using std::numbers::pi;

TEST_CASE("integrand examples")
{
    const Surface s = Surface::sphere(1.0);
    const Vec3 center{0, 0, 0};
    for (double t : {-0.7, 0.0, 0.4}) {
        for (double p : {0.0, 2.0}) {
            CHECK(std::abs(integrand_f(s, KernelSpec::harmonic_single(), DensitySpec{}, t, p, center) - 1.0) <
                  1e-14);
            CHECK(std::abs(integrand_f(s, KernelSpec::harmonic_double(), DensitySpec{}, t, p, center) - 1.0) <
                  1e-14);
            CHECK(std::abs(integrand_f(s, KernelSpec::harmonic_single(), DensitySpec{}, t, p, {0, 0, 3}) - 1.0) <
                  1e-14);
        }
    }
    // Unit distance from the node (1,0,0).
    const cplx f = integrand_f(s, KernelSpec::mod_helmholtz_single(3.0), DensitySpec{}, 0.0, 0.0, {2, 0, 0});
    CHECK(std::abs(f - std::exp(-3.0)) < 1e-15);
}

TEST_CASE("kernel and density specs")
{
    CHECK(KernelSpec::harmonic_single().p() == 0.5);
    CHECK(KernelSpec::harmonic_double().p() == 1.5);
    CHECK(KernelSpec::mod_helmholtz_single(3.0).p() == 0.5);
    const DensitySpec varying{DensityKind::Varying};
    const double th = 0.9, ph = 0.4;
    CHECK(std::abs(varying(th, ph) - (1.0 + std::sin(6 * ph + th) * std::sin(th) * std::sin(th))) < 1e-15);
    CHECK(DensitySpec{}(cplx{1, 2}, cplx{3, 4}) == cplx{1.0});
    const cplx w{0.7, 0.2};
    CHECK(std::abs(varying(std::conj(w), 0.3) - std::conj(varying(w, 0.3))) < 1e-14);
}

TEST_CASE("shell potential oracle")
{
    const PotentialEvaluator ev(Surface::sphere(1.0), KernelSpec::harmonic_single(), DensitySpec{}, 30, 60);
    CHECK(std::abs(ev.quadrature({2, 0, 0}) - 2 * pi) < 1e-10);
    CHECK(std::abs(ev.quadrature({0, 0, 0.5}) - 4 * pi) < 1e-10);
    CHECK(std::abs(ev.reference({0, 2, 0}) - 2 * pi) < 1e-12);

    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int i = 0; i < 20; ++i) {
        Vec3 d{g(rng), g(rng), g(rng)};
        d = d * (1.0 / norm(d));
        for (double zeta : {0.3, 0.5, 1.5, 2.5}) {
            const double exact = zeta > 1.0 ? 4 * pi / zeta : 4 * pi;
            CHECK(std::abs(ev.quadrature(d * zeta) - exact) < 1e-9);
        }
    }
}

TEST_CASE("double layer gauss identity")
{
    const PotentialEvaluator ev(Surface::sphere(1.0), KernelSpec::harmonic_double(), DensitySpec{}, 30, 60);
    // k = n.(y - x) with the outward normal is positive inside.
    CHECK(std::abs(ev.quadrature({0.1, 0.2, -0.3}) - 4 * pi) < 1e-10);
    CHECK(std::abs(ev.quadrature({0, 0, 0}) - 4 * pi) < 1e-10);
    CHECK(std::abs(ev.quadrature({2.5, 0, 0.5})) < 1e-10);

    const PotentialEvaluator spheroid(Surface::spheroid(1.0, 3.0), KernelSpec::harmonic_double(), DensitySpec{},
                                      60, 120);
    CHECK(std::abs(spheroid.quadrature({0.1, 0.0, 0.5}) - 4 * pi) < 1e-9);
    CHECK(std::abs(spheroid.quadrature({3.0, 0.0, 0.0})) < 1e-9);
}

TEST_CASE("reference resolves what the base grid misses")
{
    const PotentialEvaluator ev(Surface::sphere(1.0), KernelSpec::harmonic_single(), DensitySpec{}, 30, 60);
    for (const Vec3& x : {Vec3{0.0, 0.0, 1.05}, Vec3{1.05, 0.0, 0.0}, Vec3{0.0, 0.0, 1.1}}) {
        const double exact = 4 * pi / norm(x);
        const double ref_err = std::abs(ev.reference(x) - exact);
        const double base_err = std::abs(ev.quadrature(x) - exact);
        CHECK(ref_err < 1e-6);
        CHECK(base_err > 1e4 * ref_err);
    }
    CHECK(ev.measured_error({0, 0, 3.0}) < 1e-12);
    CHECK(ev.measured_error({1.5, 2.0, 0.5}) < 1e-12);
}

TEST_CASE("measured error at d = 0.1 sits below the simplified estimate")
{
    const PotentialEvaluator ev(Surface::sphere(1.0), KernelSpec::harmonic_single(), DensitySpec{}, 30, 60);
    // E_sphere(1.1, 1, 1/2, 60), high-precision value.
    const double e_sphere = 0.0020966876957441149891166005048898435310356904841445;
    const double outer = ev.measured_error({1.1 * std::sin(1.3), 0.0, 1.1 * std::cos(1.3)});
    CHECK(outer < e_sphere);
    CHECK(outer > e_sphere / 100);
    const double inner = ev.measured_error({0.9 * std::sin(1.3), 0.0, 0.9 * std::cos(1.3)});
    CHECK(inner > outer / 10);
    CHECK(inner < outer * 10);
}

TEST_CASE("convergence under refinement")
{
    const Vec3 x{0.9, 0.6, 0.8}; // about 0.5 from the unit sphere
    double previous = INFINITY;
    for (int n_t : {10, 20, 40}) {
        const double e = measured_error(Surface::sphere(1.0), KernelSpec::harmonic_single(), DensitySpec{},
                                        quad::QuadratureGrid(n_t, 2 * n_t), x);
        CHECK(e < 3.0 * previous);
        previous = e;
    }
}

TEST_CASE("rotations by the phi spacing leave the quadrature unchanged")
{
    const int n_phi = 40;
    const PotentialEvaluator ev(Surface::spheroid(1.0, 3.0), KernelSpec::harmonic_single(), DensitySpec{}, 20,
                                n_phi);
    const Vec3 x{1.3, 0.2, 0.7};
    const double u = ev.quadrature(x);
    for (int k : {1, 7, 23}) {
        const double a = 2 * pi * k / n_phi;
        const Vec3 y{x.x * std::cos(a) - x.y * std::sin(a), x.x * std::sin(a) + x.y * std::cos(a), x.z};
        CHECK(std::abs(ev.quadrature(y) - u) < 1e-13);
    }
}

TEST_CASE("grid geometry")
{
    const GridGeometry g(Surface::sphere(1.0), DensitySpec{}, 10, 20);
    CHECK(g.positions().size() == 200u);
    CHECK(std::abs(g.scale() - 1.0) < 1e-14);
    const NearestNode n = g.nearest({2, 0, 0});
    CHECK(n.l == 0);
    CHECK(std::abs(n.phi) < 1e-15);
    CHECK(n.distance == doctest::Approx(norm(g.positions()[n.k * 20 + n.l] - Vec3{2, 0, 0})));
    CHECK(n.distance >= 1.0);
}

TEST_CASE("targets on a node are rejected")
{
    const GridGeometry g(Surface::sphere(1.0), DensitySpec{}, 4, 4);
    const Vec3 node = g.positions()[5];
    CHECK_THROWS_AS(g.quadrature(KernelSpec::harmonic_single(), node), SingularEvaluation);
}

TEST_CASE("kernel names")
{
    CHECK(parse_kernel("harmonic-single").kind == KernelKind::HarmonicSingle);
    CHECK(parse_kernel("harmonic-double").kind == KernelKind::HarmonicDouble);
    CHECK(parse_kernel("mod-helmholtz-single", 3.0).omega == 3.0);
    CHECK_THROWS_AS(parse_kernel("stokes"), std::invalid_argument);
    CHECK_THROWS_AS(parse_kernel("mod-helmholtz-single", 0.0), std::invalid_argument);
    CHECK_THROWS(parse_density("random"));
}
