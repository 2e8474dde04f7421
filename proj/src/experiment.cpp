#include "layerr/experiment.hpp"

#include "layerr/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

namespace layerr {

namespace {

constexpr double pi = std::numbers::pi;

// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Vec3 unit_direction(double theta, double phi)
{
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

// Uniformly distributed direction as (theta, phi).
std::pair<double, double> random_direction(std::mt19937_64& rng)
{
    const double z = 2.0 * uniform01(rng) - 1.0;
    const double phi = 2.0 * pi * uniform01(rng);
    return {std::acos(z), phi};
}

// Radius with density proportional to r^2 on [r_min, r_max].
double random_shell_radius(std::mt19937_64& rng, double r_min, double r_max)
{
    const double lo = r_min * r_min * r_min, hi = r_max * r_max * r_max;
    return std::cbrt(lo + uniform01(rng) * (hi - lo));
}

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double wrapped_distance(cplx a, cplx b)
{
    const cplx d = a - b;
    return std::abs(cplx{std::remainder(d.real(), 2.0 * pi), d.imag()});
}

} // namespace

int thread_count()
{
    if (const char* env = std::getenv("LAYERR_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn)
{
    if (threads <= 0) threads = thread_count();
    threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<Vec3> generate_targets(const ExperimentConfig& config, const Surface& surface, const GridGeometry& grid)
{
    const TargetSpec& t = config.targets;
    std::vector<Vec3> out;
    switch (t.kind) {
    case TargetKind::Plane: {
        const int m = t.resolution;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                const double u = m == 1 ? 0.0 : -t.extent + 2.0 * t.extent * i / (m - 1);
                const double v = m == 1 ? 0.0 : -t.extent + 2.0 * t.extent * j / (m - 1);
                switch (t.axis) {
                case 'x': out.push_back({t.offset, u, v}); break;
                case 'y': out.push_back({u, t.offset, v}); break;
                default: out.push_back({u, v, t.offset}); break;
                }
            }
        }
        break;
    }
    case TargetKind::RadialSweep:
        for (double angle : t.angles) {
            const Vec3 g = surface.eval(angle, 0.0).pos;
            const double r = norm(g);
            for (double d : t.distances) out.push_back(g * (1.0 + d / r));
        }
        break;
    case TargetKind::Random: {
        std::mt19937_64 rng(t.seed);
        const long max_draws = 1000L * t.count;
        for (long draw = 0; static_cast<int>(out.size()) < t.count; ++draw) {
            if (draw >= max_draws) throw ConfigError("targets: rejection sampling exhausted; widen [r_min, r_max]");
            const auto [theta, phi] = random_direction(rng);
            const double s = random_shell_radius(rng, t.r_min, t.r_max);
            const Vec3 x = t.relative_to == "surface" ? surface.eval(theta, phi).pos * s
                                                      : unit_direction(theta, phi) * (s * grid.scale());
            if (grid.min_distance(x) < t.reject_distance) continue;
            out.push_back(x);
        }
        break;
    }
    case TargetKind::Shell: {
        const int m = t.resolution;
        for (int i = 0; i < m; ++i) {
            const double theta = pi * (i + 0.5) / m;
            for (int j = 0; j < 2 * m; ++j) {
                out.push_back(unit_direction(theta, pi * j / m) * t.shell_radius);
            }
        }
        break;
    }
    case TargetKind::Explicit:
        out = t.points;
        break;
    }
    return out;
}

ExperimentResult run_points(const ExperimentConfig& config, int threads)
{
    const Surface surface = make_surface(config.surface);
    const GridGeometry grid(surface, config.density, config.n_t, config.n_phi);
    return run_points(config, generate_targets(config, surface, grid), threads);
}

ExperimentResult run_points(const ExperimentConfig& config, const std::vector<Vec3>& targets, int threads)
{
    validate(config);
    const Surface surface = make_surface(config.surface);
    const PotentialEvaluator evaluator(surface, config.kernel, config.density, config.n_t, config.n_phi);
    EstimateOptions options;
    options.cone = config.cone;
    const ErrorEstimator estimator(surface, config.kernel, config.density, config.n_t, config.n_phi, options);

    ExperimentResult result{config, std::vector<PointResult>(targets.size())};
    parallel_for(targets.size(), threads, [&](std::size_t i) {
        PointResult& r = result.points[i];
        r.x = targets[i];
        const auto start = std::chrono::steady_clock::now();
        try {
            const NearestNode node = estimator.grid().nearest(r.x);
            r.distance_to_grid = node.distance;
            r.t_star = node.t;
            r.phi_star = node.phi;
            r.e_q = evaluator.measured_error(r.x);
            const EstimateBreakdown est = estimator.estimate(r.x);
            r.e_est = est.total;
            r.e_tz = est.e_tz;
            r.e_gl = est.e_gl;
            r.tz_skipped = est.tz_skipped;
        } catch (const std::exception& e) {
            r.error = e.what();
        }
        if (config.output.timing) {
            r.runtime_us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
        }
    });
    return result;
}

std::string csv_field(const std::string& value)
{
    if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void write_csv(std::ostream& out, const ExperimentResult& result)
{
    out << "x,y,z,distance_to_grid,E_Q,E_EST,E_TZ,E_GL,tz_skipped,t_star,phi_star,runtime_us,error\r\n";
    for (const PointResult& r : result.points) {
        out << format_double(r.x.x) << ',' << format_double(r.x.y) << ',' << format_double(r.x.z) << ','
            << format_double(r.distance_to_grid) << ',' << format_double(r.e_q) << ',' << format_double(r.e_est)
            << ',' << format_double(r.e_tz) << ',' << format_double(r.e_gl) << ',' << (r.tz_skipped ? 1 : 0) << ','
            << format_double(r.t_star) << ',' << format_double(r.phi_star) << ',' << format_double(r.runtime_us)
            << ',' << csv_field(r.error) << "\r\n";
    }
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream& fallback, int threads)
{
    ExperimentResult result = run_points(config, threads);
    if (config.output.path.empty()) {
        write_csv(fallback, result);
    } else {
        std::ofstream file(config.output.path, std::ios::binary);
        if (!file) throw ConfigError("output.path: cannot open '" + config.output.path + "' for writing");
        write_csv(file, result);
    }
    return result;
}

std::vector<SweepRow> sphere_sweep(const SweepOptions& options, int threads)
{
    if (options.p != 0.5) throw ConfigError("sphere-sweep: only p = 1/2 (harmonic single layer) is supported");
    if (!(options.a > 0.0)) throw ConfigError("sphere-sweep: a must be > 0");
    if (options.theta_samples < 1 || options.phi_samples < 1) throw ConfigError("sphere-sweep: sample counts must be >= 1");
    for (int n : options.n_values) {
        if (n < 8 || n % 2 != 0) throw ConfigError("sphere-sweep: n must be even and >= 8");
    }
    for (double d : options.distances) {
        if (d == 0.0 || !(options.a + d > 0.0)) throw ConfigError("sphere-sweep: distances need d != 0 and a + d > 0");
    }

    const Surface surface = Surface::sphere(options.a, ThetaMapKind::Cosine);
    std::vector<std::unique_ptr<PotentialEvaluator>> evaluators;
    for (int n : options.n_values) {
        evaluators.push_back(std::make_unique<PotentialEvaluator>(surface, KernelSpec::harmonic_single(),
                                                                  DensitySpec{}, n / 2, n));
    }

    const std::size_t nd = options.distances.size();
    std::vector<SweepRow> rows(options.n_values.size() * nd);
    parallel_for(rows.size(), threads, [&](std::size_t idx) {
        const std::size_t in = idx / nd, id = idx % nd;
        const int n = options.n_values[in];
        const double zeta = options.a + options.distances[id];
        SweepRow& row = rows[idx];
        row.n = n;
        row.d = options.distances[id];
        row.e_q_min = std::numeric_limits<double>::infinity();
        row.e_q_max = 0.0;
        for (int i = 0; i < options.theta_samples; ++i) {
            const double theta = pi * (i + 0.5) / options.theta_samples;
            for (int j = 0; j < options.phi_samples; ++j) {
                const double phi =
                    options.phi_samples == 1 ? 0.0 : (pi / n) * j / (options.phi_samples - 1);
                const double e = evaluators[in]->measured_error(unit_direction(theta, phi) * zeta);
                row.e_q_min = std::min(row.e_q_min, e);
                row.e_q_max = std::max(row.e_q_max, e);
            }
        }
        row.e_simplified = sphere_simplified(zeta, options.a, options.p, n);
    });
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows)
{
    out << "n,d,E_Q_min,E_Q_max,E_simplified\r\n";
    for (const SweepRow& r : rows) {
        out << r.n << ',' << format_double(r.d) << ',' << format_double(r.e_q_min) << ','
            << format_double(r.e_q_max) << ',' << format_double(r.e_simplified) << "\r\n";
    }
}


RootsCheckReport roots_check(const SurfaceSpec& spec, int samples, unsigned long long seed)
{
    if (samples < 1) throw ConfigError("roots-check: samples must be >= 1");
    const Surface surface = make_surface(spec);
    const double scale = GridGeometry(surface, DensitySpec{}, 16, 32).scale();

    RootsCheckReport report;
    report.surface = surface.name();
    report.samples = samples;
    report.residual_only = !surface.is_axisymmetric();
    report.residual_threshold = report.residual_only ? 1e-8 : 1e-10;
    report.min_lambda_minus_one = std::numeric_limits<double>::infinity();

    std::mt19937_64 rng(seed);
    const auto sphere_r = surface.sphere_radius();
    for (int k = 0; k < samples; ++k) {
        const auto [dth, dph] = random_direction(rng);
        double s;
        do {
            s = report.residual_only ? 1.02 + 0.5 * uniform01(rng) : 0.3 + 2.2 * uniform01(rng);
        } while (std::abs(s - 1.0) < 0.02);
        const Vec3 x = surface.eval(dth, dph).pos * s;
        // Fixed parameters near the target's foot point, as in the estimator.
        const double theta_bar = std::clamp(dth + 0.6 * (uniform01(rng) - 0.5), 0.05, pi - 0.05);
        const double phi_bar = dph + 0.6 * (uniform01(rng) - 0.5);

        auto record = [&](const RootResult& root) {
            report.max_residual = std::max(report.max_residual, root.residual / (scale * scale));
            if (root.lambda) report.min_lambda_minus_one = std::min(report.min_lambda_minus_one, *root.lambda - 1.0);
        };
        try {
            const RootResult phi_newton =
                newton_from_scan(phi_curve(surface, theta_bar), RootVariable::Phi, theta_bar, x, 0.0, 2.0 * pi, scale);
            record(phi_newton);
            if (!report.residual_only) {
                const RootResult phi_exact = axisym_phi_root(surface, theta_bar, x);
                record(phi_exact);
                report.max_deviation = std::max(report.max_deviation, wrapped_distance(phi_exact.value, phi_newton.value));
            }
            const RootResult theta_newton =
                newton_from_scan(theta_curve(surface, phi_bar), RootVariable::Theta, phi_bar, x, -pi, pi, scale);
            record(theta_newton);
            if (sphere_r) {
                const RootResult theta_exact = sphere_theta_root(*sphere_r, phi_bar, x);
                record(theta_exact);
                report.max_deviation =
                    std::max(report.max_deviation, wrapped_distance(theta_exact.value, theta_newton.value));
            }
        } catch (const Error& e) {
            if (report.failures++ == 0) report.first_failure = e.what();
        }
    }
    if (report.residual_only) report.min_lambda_minus_one = 0.0;
    report.passed = report.failures == 0 && report.max_deviation < report.deviation_threshold &&
                    report.max_residual < report.residual_threshold &&
                    (report.residual_only || report.min_lambda_minus_one > 0.0);
    return report;
}

void write_report(std::ostream& out, const RootsCheckReport& r)
{
    out << "surface: " << r.surface << "\n"
        << "samples: " << r.samples << "\n"
        << "mode: " << (r.residual_only ? "residual-only" : "analytic-vs-newton") << "\n";
    if (!r.residual_only) {
        out << "max |analytic - newton|: " << format_double(r.max_deviation) << " (threshold "
            << format_double(r.deviation_threshold) << ")\n"
            << "min lambda - 1: " << format_double(r.min_lambda_minus_one) << "\n";
    }
    out << "max |R^2| / scale^2: " << format_double(r.max_residual) << " (threshold "
        << format_double(r.residual_threshold) << ")\n"
        << "failures: " << r.failures << "\n";
    if (!r.first_failure.empty()) out << "first failure: " << r.first_failure << "\n";
    out
        << "result: " << (r.passed ? "PASS" : "FAIL") << "\n";
}

} // namespace layerr
