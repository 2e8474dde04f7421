// Acceptance suite: one PASS/FAIL line per criterion.

#include "layerr/config.hpp"
#include "layerr/errors.hpp"
#include "layerr/estimates.hpp"
#include "layerr/experiment.hpp"
#include "layerr/quadrature.hpp"
#include "layerr/roots.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace layerr;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Vec3 direction(double theta, double phi)
{
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

Vec3 random_direction(std::mt19937_64& rng)
{
    return direction(std::acos(uniform(rng, -1.0, 1.0)), uniform(rng, 0.0, 2.0 * pi));
}

double wrapped(cplx a, cplx b)
{
    const cplx d = a - b;
    return std::abs(cplx{std::remainder(d.real(), 2.0 * pi), d.imag()});
}

bool in_band(double e) { return e >= 1e-12 && e <= 1e-2; }

// 1. Closed-form roots against Newton, residuals and lambda > 1.
Outcome roots_criterion()
{
    std::mt19937_64 rng(101);
    constexpr int samples = 200;
    double max_dev = 0.0, max_res = 0.0, min_lambda = INFINITY;
    int failures = 0;
    auto record = [&](const RootResult& exact, const RootResult& newton, double scale) {
        max_dev = std::max(max_dev, wrapped(exact.value, newton.value));
        max_res = std::max({max_res, exact.residual / (scale * scale), newton.residual / (scale * scale)});
        if (exact.lambda) min_lambda = std::min(min_lambda, *exact.lambda);
    };

    for (int k = 0; k < samples; ++k) {
        try {
            // Circle of radius a in the xy-plane.
            const double a = uniform(rng, 0.5, 2.0);
            const Vec3 x = random_direction(rng) * (a * uniform(rng, 0.2, 3.0));
            const Curve circle = [a](cplx w) {
                return std::pair{CVec3{a * std::cos(w), a * std::sin(w), cplx{}},
                                 CVec3{-a * std::sin(w), a * std::cos(w), cplx{}}};
            };
            record(circle_root(a, x), newton_from_scan(circle, RootVariable::Phi, 0.0, x, 0.0, 2.0 * pi, a), a);
        } catch (const Error&) {
            ++failures;
        }
        try {
            // Phi-roots on a random spheroid.
            const double a = uniform(rng, 0.5, 1.5), b = uniform(rng, 0.5, 3.0);
            const Surface s = Surface::spheroid(a, b);
            const double scale = std::max(a, b);
            const double th = std::acos(uniform(rng, -1.0, 1.0)), ph = uniform(rng, 0.0, 2.0 * pi);
            double m;
            do m = uniform(rng, 0.3, 2.5);
            while (std::abs(m - 1.0) < 0.01);
            const Vec3 x = s.eval(th, ph).pos * m;
            const double theta_bar = std::clamp(th + uniform(rng, -0.3, 0.3), 0.05, pi - 0.05);
            record(axisym_phi_root(s, theta_bar, x),
                   newton_from_scan(phi_curve(s, theta_bar), RootVariable::Phi, theta_bar, x, 0.0, 2.0 * pi, scale),
                   scale);
        } catch (const Error&) {
            ++failures;
        }
        try {
            // Theta-roots on a random sphere.
            const double a = uniform(rng, 0.5, 2.0);
            const Surface s = Surface::sphere(a);
            double m;
            do m = uniform(rng, 0.3, 2.5);
            while (std::abs(m - 1.0) < 0.01);
            const Vec3 x = random_direction(rng) * (a * m);
            const double phi_bar = uniform(rng, 0.0, 2.0 * pi);
            record(sphere_theta_root(a, phi_bar, x),
                   newton_from_scan(theta_curve(s, phi_bar), RootVariable::Theta, phi_bar, x, -pi, pi, a), a);
        } catch (const Error&) {
            ++failures;
        }
    }

    // On the axis: x = (0,0,2), a = 1 gives theta0 = i ln 2.
    const double axis_case = std::abs(sphere_theta_root(1.0, 0.7, {0.0, 0.0, 2.0}).value - cplx{0.0, std::log(2.0)});

    Outcome o;
    o.pass = failures == 0 && max_dev < 1e-10 && max_res < 1e-10 && min_lambda > 1.0 && axis_case < 1e-12;
    o.detail = "3x" + std::to_string(samples) + " samples, failures=" + std::to_string(failures) +
               fmt(", max|exact-newton|=%.2e", max_dev) + fmt(", max|R^2|/scale^2=%.2e", max_res) +
               fmt(", min lambda=%.6f", min_lambda) + fmt(", |theta0 - i ln2|=%.1e", axis_case);
    return o;
}

// 2. Uniform shell potential: 4 pi a^2 / zeta outside, 4 pi a inside.
Outcome shell_criterion()
{
    const Surface s = Surface::sphere(1.0, ThetaMapKind::Cosine);
    const GridGeometry grid(s, DensitySpec{}, 30, 60);
    std::mt19937_64 rng(202);
    double max_err = 0.0;
    for (int k = 0; k < 20; ++k) {
        const Vec3 d = random_direction(rng);
        max_err = std::max(max_err, std::abs(grid.quadrature(KernelSpec::harmonic_single(), d * 2.0) - 2.0 * pi));
        max_err = std::max(max_err, std::abs(grid.quadrature(KernelSpec::harmonic_single(), d * 0.5) - 4.0 * pi));
    }
    return {max_err < 1e-9, fmt("20 directions at zeta=2 and 0.5, max |u - exact| = %.2e", max_err)};
}

// 3. Simplified sphere estimate as an upper bound.
Outcome simplified_criterion()
{
    const auto start = std::chrono::steady_clock::now();
    const Surface s = Surface::sphere(1.0, ThetaMapKind::Cosine);
    const PotentialEvaluator ev(s, KernelSpec::harmonic_single(), DensitySpec{}, 30, 60);
    std::vector<double> distances;
    for (int i = 0; i < 12; ++i) {
        const double d = 0.02 * std::pow(25.0, i / 11.0); // 0.02 .. 0.5
        distances.push_back(d);
        distances.push_back(-d);
    }
    std::mt19937_64 rng(303);
    std::vector<Vec3> dirs;
    for (int k = 0; k < 24; ++k) dirs.push_back(random_direction(rng));

    std::vector<std::pair<double, double>> pairs(distances.size() * dirs.size());
    parallel_for(pairs.size(), 0, [&](std::size_t i) {
        const double zeta = 1.0 + distances[i / dirs.size()];
        pairs[i] = {ev.measured_error(dirs[i % dirs.size()] * zeta), sphere_simplified(zeta, 1.0, 0.5, 60)};
    });
    int band = 0, bound = 0, tight = 0;
    for (const auto& [eq, es] : pairs) {
        if (!in_band(eq)) continue;
        ++band;
        bound += es >= eq;
        tight += es <= 100.0 * eq;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double f_bound = double(bound) / band, f_tight = double(tight) / band;
    Outcome o;
    o.pass = pairs.size() >= 500 && band > 0 && f_bound >= 0.99 && f_tight >= 0.90 && seconds < 60.0;
    o.detail = std::to_string(pairs.size()) + " points, " + std::to_string(band) + " in band" +
               fmt(", upper bound %.1f%%", 100 * f_bound) + fmt(", within 100x %.1f%%", 100 * f_tight) +
               fmt(", %.1f s", seconds);
    return o;
}

// 4. Axis targets: cone removes TZ, GL follows the closed form.
Outcome axis_criterion()
{
    const Surface s = Surface::sphere(1.0, ThetaMapKind::Cosine);
    bool ok = true;
    double worst_gl = 1.0, worst_total = 1.0;
    int compared = 0;
    for (int n_t : {20, 30, 40}) {
        const int n_phi = 2 * n_t;
        const PotentialEvaluator ev(s, KernelSpec::harmonic_single(), DensitySpec{}, n_t, n_phi);
        const ErrorEstimator est(s, KernelSpec::harmonic_single(), DensitySpec{}, n_t, n_phi);
        for (double delta : {1.05, 1.2, 1.5, 2.0}) {
            for (double z : {delta, 1.0 / delta, -delta}) {
                const Vec3 x{0.0, 0.0, z};
                const EstimateBreakdown b = est.estimate(x);
                const double closed = sphere_axis_gl(1.0, z, n_t, 0.5);
                const double r_gl = std::max(b.e_gl / closed, closed / b.e_gl);
                worst_gl = std::max(worst_gl, r_gl);
                ok = ok && b.e_tz == 0.0 && b.tz_skipped_by_cone && r_gl <= 2.0;
                // Errors below the band are dominated by roundoff in E_Q.
                const double eq = ev.measured_error(x);
                if (in_band(eq) && in_band(b.total)) {
                    const double r_total = std::max(b.total / eq, eq / b.total);
                    worst_total = std::max(worst_total, r_total);
                    ok = ok && r_total <= 10.0;
                    ++compared;
                }
            }
        }
    }
    return {ok, "n_t in {20,30,40}, delta in {1.05,1.2,1.5,2}, z = +-delta and 1/delta: E_TZ = 0 via cone" +
                    fmt(", worst GL/closed-form factor %.3f", worst_gl) +
                    fmt(", worst E_EST vs E_Q factor %.3f", worst_total) +
                    fmt(" over %.0f in-band points", compared)};
}

// 5. Equator ratio E_GL / E_TZ.
Outcome equator_criterion()
{
    const Surface s = Surface::sphere(1.0, ThetaMapKind::Cosine);
    bool ok = true;
    double worst = 0.0;
    for (int n : {40, 60}) {
        const ErrorEstimator est(s, KernelSpec::harmonic_single(), DensitySpec{}, n / 2, n);
        for (double delta : {1.1, 1.5}) {
            for (double rho : {delta, 1.0 / delta}) {
                const EstimateBreakdown b = est.estimate({rho, 0.0, 0.0});
                const double expected = std::pow((n + 1.0) / n, -0.5) * (1.0 + 1.0 / (delta * delta));
                const double rel = std::abs(b.e_gl / b.e_tz / expected - 1.0);
                worst = std::max(worst, rel);
                ok = ok && rel <= 0.25;
            }
        }
    }
    return {ok, fmt("n in {40,60}, delta in {1.1,1.5}, inside and outside: worst relative deviation %.3f", worst)};
}

// 6. Location of the E_fac^TZ peak and its small-angle decay.
Outcome efac_criterion()
{
    const Surface s = Surface::sphere(1.0, ThetaMapKind::Cosine);
    const double p = 0.5, beta = 0.4;
    auto target = [&](double m, double alpha) { return direction(alpha, beta) * m; };

    bool ok = true;
    double worst_offset = 0.0, spacing = 0.0;
    for (int n_phi : {20, 40}) {
    const int n_t = n_phi / 2;
    spacing = pi / n_t;
    for (double m : {1.01, 1.05}) {
        for (double frac : {0.3, 0.5, 0.7}) {
            const double alpha = frac * pi;
            const Vec3 x = target(m, alpha);
            double best = 0.0, best_v = -INFINITY;
            constexpr int scan = 20000;
            for (int i = 1; i < scan; ++i) {
                const double th = pi * i / scan;
                const double v = log_e_fac_tz_analytic(s, x, th, n_phi, p);
                if (v > best_v) {
                    best_v = v;
                    best = th;
                }
            }
            worst_offset = std::max(worst_offset, std::abs(best - alpha));
            ok = ok && std::abs(best - alpha) <= spacing;
        }
    }
    }

    // Slope d log E / d log alpha at the smallest angles of the window alpha <= 0.05.
    double worst_slope = 0.0;
    std::string slopes;
    for (int n_phi : {20, 40}) {
    for (double m : {1.01, 1.05}) {
        const double a1 = 1e-4, a2 = 1e-3;
        const double l1 = log_e_fac_tz_analytic(s, target(m, a1), a1, n_phi, p);
        const double l2 = log_e_fac_tz_analytic(s, target(m, a2), a2, n_phi, p);
        const double slope = (l2 - l1) / (std::log(a2) - std::log(a1));
        const double rel = std::abs(slope / (2.0 * n_phi) - 1.0);
        worst_slope = std::max(worst_slope, rel);
        slopes += fmt(" %.2f", slope);
        ok = ok && rel <= 0.05;
    }
    }
    return {ok, "n_phi in {20,40}, m in {1.01,1.05}:" + fmt(" argmax offset <= %.4f", worst_offset) +
                    fmt(" (finest grid spacing %.4f)", spacing) + ", slopes over alpha in [1e-4, 1e-3]:" + slopes +
                    " vs 2 n_phi = 40, 80"};
}

// 7. Spheroid double layer, random targets.
Outcome band_criterion()
{
    const ExperimentConfig config = preset("spheroid-random");
    const ExperimentResult r = run_points(config);
    int band = 0, inside = 0, below = 0, errors = 0;
    for (const PointResult& p : r.points) {
        if (!p.error.empty()) {
            ++errors;
            continue;
        }
        if (!in_band(p.e_q)) continue;
        ++band;
        const double ratio = p.e_est / p.e_q;
        inside += ratio >= 0.1 && ratio <= 10.0;
        below += ratio < 0.1;
    }
    const double f_in = double(inside) / band, f_below = double(below) / band;
    return {errors == 0 && band > 0 && f_in >= 0.90 && f_below <= 0.05,
            std::to_string(r.points.size()) + " points, " + std::to_string(band) + " in band" +
                fmt(", ratio in [1/10,10] %.1f%%", 100 * f_in) + fmt(", below 1/10 %.1f%%", 100 * f_below) +
                ", errors=" + std::to_string(errors)};
}

// 8. Blob, modified Helmholtz, shell of radius 1.46.
Outcome blob_criterion()
{
    const ExperimentConfig config = preset("blob-shell");
    const ExperimentResult r = run_points(config);
    int band = 0, match = 0, errors = 0;
    for (const PointResult& p : r.points) {
        if (!p.error.empty()) {
            ++errors;
            continue;
        }
        if (!in_band(p.e_q)) continue;
        ++band;
        if (!(p.e_est > 0.0)) continue;
        match += std::abs(std::floor(std::log10(p.e_est)) - std::floor(std::log10(p.e_q))) <= 1.0;
    }
    const double f = double(match) / band;
    return {errors == 0 && band > 0 && f >= 0.85, std::to_string(r.points.size()) + " shell points, " +
                                                       std::to_string(band) + " in band" +
                                                       fmt(", decade within +-1: %.1f%%", 100 * f) +
                                                       ", errors=" + std::to_string(errors)};
}

// 9. Exactness of the three rules.
Outcome quadrature_criterion()
{
    double worst = 0.0;
    for (int n = 2; n <= 20; ++n) {
        const auto& gl = quad::cached_gauss_legendre(n);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
            const double q = gl.apply([k](double t) { return std::pow(t, k); });
            worst = std::max(worst, std::abs(q - exact) / std::max(1.0, std::abs(exact)));
        }
        const auto tz = quad::trapezoidal(n);
        for (int k = 0; k < n; ++k) {
            const double qc = tz.apply([k](double phi) { return std::cos(k * phi); });
            const double qs = tz.apply([k](double phi) { return std::sin(k * phi); });
            const double exact = k == 0 ? 2.0 * pi : 0.0;
            worst = std::max({worst, std::abs(qc - exact) / (2.0 * pi), std::abs(qs) / (2.0 * pi)});
        }
    }
    const auto& lag = quad::cached_gauss_laguerre(8);
    double factorial = 1.0;
    for (int k = 0; k <= 15; ++k) {
        if (k > 0) factorial *= k;
        const double q = lag.apply([k](double x) { return std::pow(x, k); });
        worst = std::max(worst, std::abs(q - factorial) / factorial);
    }
    return {worst < 1e-11, fmt("GL n=2..20 to degree 2n-1, trapezoidal modes |k|<n, Laguerre moments 0..15: "
                               "max relative error %.2e",
                               worst)};
}

// 10. 8-node against 64-node Gauss-Laguerre tails.
Outcome laguerre_criterion()
{
    const Surface s = Surface::sphere(1.0, ThetaMapKind::Cosine);
    EstimateOptions coarse, fine;
    fine.laguerre_nodes = 64;
    const ErrorEstimator e8(s, KernelSpec::harmonic_single(), DensitySpec{}, 30, 60, coarse);
    const ErrorEstimator e64(s, KernelSpec::harmonic_single(), DensitySpec{}, 30, 60, fine);
    std::mt19937_64 rng(303);
    double worst = 0.0;
    int count = 0;
    for (int k = 0; k < 24; ++k) {
        const Vec3 d = random_direction(rng);
        for (int i = 0; i < 12; ++i) {
            const double dist = 0.02 * std::pow(25.0, i / 11.0);
            for (double zeta : {1.0 + dist, 1.0 - dist}) {
                const EstimateBreakdown a = e8.estimate(d * zeta), b = e64.estimate(d * zeta);
                for (auto [u, v] : {std::pair{a.e_tz, b.e_tz}, std::pair{a.e_gl, b.e_gl}}) {
                    if (v > 0.0) worst = std::max(worst, std::abs(u - v) / v);
                }
                ++count;
            }
        }
    }
    return {worst < 0.05, std::to_string(count) + " sphere targets, max relative difference " + fmt("%.2e", worst)};
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "root correctness", roots_criterion},
        {2, "shell potential oracle", shell_criterion},
        {3, "simplified sphere estimate", simplified_criterion},
        {4, "axis behavior", axis_criterion},
        {5, "equator ratio", equator_criterion},
        {6, "E_fac^TZ structure", efac_criterion},
        {7, "factor-10 band, spheroid double layer", band_criterion},
        {8, "blob modified Helmholtz decades", blob_criterion},
        {9, "quadrature kernels", quadrature_criterion},
        {10, "Gauss-Laguerre adequacy", laguerre_criterion},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
