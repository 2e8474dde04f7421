#include "layerr/estimates.hpp"

#include "layerr/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace layerr {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double neg_inf = -std::numeric_limits<double>::infinity();

double log_prefactor(double p) { return std::log(4.0 * pi) - std::lgamma(p); }

double log_sum_exp(const std::vector<double>& terms)
{
    double m = neg_inf;
    for (double v : terms) m = std::max(m, v);
    if (m == neg_inf) return neg_inf;
    double s = 0.0;
    for (double v : terms) s += std::exp(v - m);
    return m + std::log(s);
}

cplx inverse_derivative(cplx d, double magnitude, const char* what)
{
    if (d == 0.0 || std::abs(d) <= 1e-14 * magnitude) throw InfiniteGeometryFactor(what);
    return 1.0 / d;
}

double cmag(const CVec3& v) { return std::sqrt(std::norm(v.x) + std::norm(v.y) + std::norm(v.z)); }

// (dR^2/dw)^{-1} for a curve through (pos, d pos/dw), times an optional chain factor.
cplx inverse_r2_derivative(const CVec3& pos, const CVec3& d, const Vec3& x, cplx chain, const char* what)
{
    const CVec3 r = pos - to_complex(x);
    return inverse_derivative(2.0 * dot(r, d) * chain, 2.0 * cmag(r) * cmag(d) * std::abs(chain), what);
}

// log est^GL without the singular-argument check, for use inside the tail sums.
double log_est_gl_unchecked(cplx t0, int n, double p)
{
    const cplx s = std::sqrt(t0 + 1.0) * std::sqrt(t0 - 1.0);
    const double as = std::abs(s);
    const double joukowski = std::abs(t0 + s);
    if (!(as > 0.0) || !(joukowski > 0.0)) return std::numeric_limits<double>::infinity();
    return log_prefactor(p) + (p - 1.0) * (std::log(2.0 * n + 1.0) - std::log(as)) -
           (2.0 * n + 1.0) * std::log(joukowski);
}

} // namespace

cplx geometry_factor_1(const Surface& surface, cplx t, double phi, const Vec3& x)
{
    const auto p = surface.eval_t(t, cplx{phi});
    return inverse_r2_derivative(p.pos, p.d1, x, 1.0, "geometry_factor_1: dR^2/dt vanishes");
}

cplx geometry_factor_2(const Surface& surface, double t, cplx phi, const Vec3& x)
{
    const auto p = surface.eval_t(cplx{t}, phi);
    return inverse_r2_derivative(p.pos, p.d2, x, 1.0, "geometry_factor_2: dR^2/dphi vanishes");
}

double log_est_tz(cplx phi0, int n, double p)
{
    return log_prefactor(p) + (p - 1.0) * std::log(static_cast<double>(n)) - n * std::abs(phi0.imag());
}

double est_tz(cplx phi0, int n, double p) { return std::exp(log_est_tz(phi0, n, p)); }

double log_est_gl(cplx t0, int n, double p)
{
    if (t0.imag() == 0.0 && std::abs(t0.real()) <= 1.0) {
        throw SingularEvaluation("est_gl: root on the integration interval [-1, 1]");
    }
    return log_est_gl_unchecked(t0, n, p);
}

double est_gl(cplx t0, int n, double p) { return std::exp(log_est_gl(t0, n, p)); }

bool cone_test(const Vec3& x, double d_min, int n_t, const ConeParams& cone)
{
    const double rho = std::hypot(x.x, x.y);
    return rho / cone.A < cone.K_c * pi / n_t * d_min;
}

bool cone_test(const Vec3& x, const GridGeometry& grid, const ConeParams& cone)
{
    return cone_test(x, grid.min_distance(x), grid.n_t(), cone);
}

double log_e_fac_tz_analytic(const Surface& surface, const Vec3& x, double theta, int n_phi, double p)
{
    const double rho = std::hypot(x.x, x.y);
    if (!(rho > 0.0)) throw NoRootExists("e_fac_tz_analytic: target on the symmetry axis");
    const auto [ra, rb] = surface.ring(theta);
    if (!(ra > 0.0)) throw NoRootExists("e_fac_tz_analytic: theta at a pole");
    const double dz = rb - x.z;
    const double d2 = ra * ra + rho * rho + dz * dz;
    const double lambda = d2 / (2.0 * ra * rho);
    const double excess = ((ra - rho) * (ra - rho) + dz * dz) / (2.0 * ra * rho);
    const double root = std::sqrt(excess * (lambda + 1.0)); // sqrt(lambda^2 - 1)
    return -p * std::log(d2) + p * (std::log(lambda) - std::log(root)) - n_phi * std::log1p(excess + root);
}

double e_fac_tz_analytic(const Surface& surface, const Vec3& x, double theta, int n_phi, double p)
{
    return std::exp(log_e_fac_tz_analytic(surface, x, theta, n_phi, p));
}

double double_factorial_ratio(int n)
{
    if (n < 0 || n % 2 != 0) throw std::invalid_argument("double_factorial_ratio: n must be even and >= 0");
    // n!! / (n+1)!! = 4^k (k!)^2 / (2k+1)! with n = 2k.
    const int k = n / 2;
    return std::exp(k * std::log(4.0) + 2.0 * std::lgamma(k + 1.0) - std::lgamma(2.0 * k + 2.0));
}

namespace {

double delta_of(double zeta, double a) { return zeta > a ? zeta / a : a / zeta; }

} // namespace

double sphere_simplified(double zeta, double a, double p, int n)
{
    if (zeta == a) throw SingularEvaluation("sphere_simplified: target on the sphere");
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("sphere_simplified: n must be even and >= 2");
    const double delta = delta_of(zeta, a);
    const double log_value = std::log(8.0 * pi) - std::lgamma(p) + (p - 1.0) * std::log(n) +
                             std::log(double_factorial_ratio(n)) + 2.0 * std::log(a) -
                             p * std::log(std::abs(zeta * zeta - a * a)) - n * std::log(delta);
    return std::exp(log_value);
}

double sphere_axis_gl(double a, double z, int n_t, double p)
{
    const double az = std::abs(z);
    if (az == a) throw SingularEvaluation("sphere_axis_gl: target on the sphere");
    const double delta = delta_of(az, a);
    const double log_value = log_prefactor(p) - std::log(2.0 * a * az) + (p - 1.0) * std::log(2.0 * n_t + 1.0) -
                             (p - 1.0) * std::log(std::abs(z * z - a * a)) - (2.0 * n_t + 1.0) * std::log(delta) +
                             std::log(2.0 * pi * a * a);
    return std::exp(log_value);
}

double sphere_equator_tz(double rho, double a, double p, int n_phi) { return sphere_simplified(rho, a, p, n_phi); }

double sphere_equator_gl(double rho, double a, double p, int n_t)
{
    if (rho == a) throw SingularEvaluation("sphere_equator_gl: target on the sphere");
    const int n = 2 * n_t;
    const double delta = delta_of(rho, a);
    const double log_value = std::log(8.0 * pi) - std::lgamma(p) + (p - 1.0) * std::log(n + 1.0) +
                             std::log(double_factorial_ratio(n)) + std::log(a * a * (rho / a + a / rho)) -
                             p * std::log(std::abs(rho * rho - a * a)) - (n + 1.0) * std::log(delta);
    return std::exp(log_value);
}

ErrorEstimator::ErrorEstimator(Surface surface, KernelSpec kernel, DensitySpec density, int n_t, int n_phi,
                               EstimateOptions options)
    : surface_(std::move(surface)),
      kernel_(kernel),
      density_(density),
      options_(std::move(options)),
      grid_(surface_, density_, n_t, n_phi)
{
}

EstimateBreakdown ErrorEstimator::estimate(const Vec3& x) const
{
    EstimateBreakdown out;
    out.closest = grid_.nearest(x);
    if (!(out.closest.distance > 1e-12 * grid_.scale())) {
        throw SingularEvaluation("estimate: target lies on the surface grid");
    }
    out.kappa = surface_.grid_anisotropy(out.closest.t, out.closest.phi);

    std::optional<TaylorSurrogate> surrogate;
    if (!surface_.is_axisymmetric()) {
        const double theta_star = surface_.theta_map().theta(out.closest.t);
        surrogate = taylor_surrogate(surface_, theta_star, out.closest.phi, options_.taylor_order);
    }
    gl_part(x, surrogate, out);
    tz_part(x, surrogate, out);
    out.total = out.e_tz + out.e_gl;
    return out;
}

void ErrorEstimator::gl_part(const Vec3& x, const std::optional<TaylorSurrogate>& surrogate,
                             EstimateBreakdown& out) const
{
    if (surface_.is_axisymmetric() && cone_test(x, out.closest.distance, grid_.n_t(), options_.cone) &&
        gl_full_period(x, out)) {
        return;
    }
    const ThetaMap& map = surface_.theta_map();
    const double t_star = out.closest.t, phi_star = out.closest.phi;
    const double theta_star = map.theta(t_star);
    const double p = kernel_.p();
    const int n_t = grid_.n_t();

    // Root theta0(phi*) and the curve used for its geometry factor.
    cplx theta0;
    Curve curve = surrogate ? theta_curve(*surrogate) : theta_curve(surface_, phi_star);
    try {
        RootResult root;
        if (auto a = surface_.sphere_radius()) {
            root = sphere_theta_root(*a, phi_star, x);
        } else {
            root = newton_root(curve, RootVariable::Theta, phi_star, x, cplx{theta_star, 0.1}, grid_.scale(),
                               options_.newton);
        }
        theta0 = root.value;
        out.gl_root_method = root.method;
    } catch (const NoRootExists&) {
        out.note += "gl:no-root;";
        return;
    } catch (const NonConvergence&) {
        try {
            const auto model = LinearRootModel::for_t(surface_, t_star, phi_star, x);
            theta0 = map.theta(model.linear(0.0));
            curve = theta_curve(surface_, phi_star);
            out.gl_root_method = RootMethod::LinearModel;
            out.note += "gl:newton-failed;";
        } catch (const DegenerateModel&) {
            out.note += "gl:no-root;";
            return;
        }
    }

    cplx t0 = map.t_of_theta(theta0);
    if (t0.imag() < 0.0) {
        t0 = std::conj(t0);
        theta0 = std::conj(theta0);
    }
    out.t0_star = t0;

    double log_pref;
    try {
        const auto [pos, d] = curve(theta0);
        const cplx g1 = inverse_r2_derivative(pos, d, x, map.dtheta_dt(theta0), "G1 vanishes");
        const cplx f = integrand_f_theta(surface_, kernel_, density_, theta0, cplx{phi_star}, x);
        log_pref = std::log(std::abs(f)) + p * std::log(std::abs(g1));
    } catch (const InfiniteGeometryFactor&) {
        out.note += "gl:infinite-geometry-factor;";
        return;
    }

    double log_e;
    try {
        const auto model = LinearRootModel::for_t(surface_, t_star, phi_star, x, t0);
        const auto& lag = quad::cached_gauss_laguerre(options_.laguerre_nodes);
        const double width = out.kappa / (2.0 * n_t);
        std::vector<double> terms;
        terms.reserve(2 * lag.n);
        for (int sign : {-1, 1}) {
            for (int i = 0; i < lag.n; ++i) {
                const cplx root = model(phi_star + sign * lag.nodes[i] * width);
                terms.push_back(std::log(lag.weights[i]) + log_est_gl_unchecked(root, n_t, p) + lag.nodes[i]);
            }
        }
        log_e = log_pref + std::log(width) + log_sum_exp(terms);
    } catch (const DegenerateModel&) {
        out.note += "gl:degenerate-linear-model;";
        log_e = log_pref + log_est_gl_unchecked(t0, n_t, p) + std::log(2.0 * pi / grid_.n_phi());
    }
    out.e_gl = std::exp(log_e);
}

// Near the axis the theta-root hardly moves with phi, so the GL integrand is
// integrated over the whole period with one root per phi instead of the
// localized Laguerre model.
bool ErrorEstimator::gl_full_period(const Vec3& x, EstimateBreakdown& out) const
{
    const ThetaMap& map = surface_.theta_map();
    const double p = kernel_.p();
    const int n_t = grid_.n_t();
    const int m = std::max(grid_.n_phi(), 32);
    const auto radius = surface_.sphere_radius();
    cplx guess{map.theta(out.closest.t), 0.1};
    std::vector<double> terms;
    terms.reserve(m);
    std::optional<cplx> t0_star;
    std::optional<RootMethod> method;
    try {
        for (int j = 0; j < m; ++j) {
            const double phi = out.closest.phi + 2.0 * pi * j / m;
            const Curve curve = theta_curve(surface_, phi);
            const RootResult root = radius ? sphere_theta_root(*radius, phi, x)
                                           : newton_root(curve, RootVariable::Theta, phi, x, guess, grid_.scale(),
                                                         options_.newton);
            cplx theta0 = root.value;
            cplx t0 = map.t_of_theta(theta0);
            if (t0.imag() < 0.0) {
                t0 = std::conj(t0);
                theta0 = std::conj(theta0);
            }
            guess = theta0;
            if (j == 0) {
                t0_star = t0;
                method = root.method;
            }
            const auto [pos, d] = curve(theta0);
            const cplx g1 = inverse_r2_derivative(pos, d, x, map.dtheta_dt(theta0), "G1 vanishes");
            const cplx f = integrand_f_theta(surface_, kernel_, density_, theta0, cplx{phi}, x);
            terms.push_back(std::log(std::abs(f)) + p * std::log(std::abs(g1)) + log_est_gl_unchecked(t0, n_t, p));
        }
    } catch (const Error&) {
        return false;
    }
    out.t0_star = t0_star;
    out.gl_root_method = method;
    out.gl_full_period = true;
    out.e_gl = std::exp(log_sum_exp(terms) + std::log(2.0 * pi / m));
    return true;
}

void ErrorEstimator::tz_part(const Vec3& x, const std::optional<TaylorSurrogate>& surrogate,
                             EstimateBreakdown& out) const
{
    const double t_star = out.closest.t, phi_star = out.closest.phi;
    const double theta_star = surface_.theta_map().theta(t_star);
    const double p = kernel_.p();
    const int n_phi = grid_.n_phi();

    if (surface_.is_axisymmetric() && cone_test(x, out.closest.distance, grid_.n_t(), options_.cone)) {
        out.tz_skipped_by_cone = true;
        out.tz_skipped = true;
        return;
    }

    cplx phi0;
    const Curve curve = surrogate ? phi_curve(*surrogate) : phi_curve(surface_, theta_star);
    try {
        RootResult root = surface_.is_axisymmetric()
                              ? axisym_phi_root(surface_, theta_star, x)
                              : newton_root(curve, RootVariable::Phi, theta_star, x, cplx{phi_star, 0.1},
                                            grid_.scale(), options_.newton);
        phi0 = root.value;
        out.tz_root_method = root.method;
    } catch (const NoRootExists&) {
        out.tz_skipped = true;
        out.note += "tz:no-root;";
        return;
    } catch (const NonConvergence&) {
        out.tz_skipped = true;
        out.note += "tz:newton-failed;";
        return;
    }
    // Representative nearest the expansion point; only |Im| enters the kernel.
    phi0 = {phi_star + std::remainder(phi0.real() - phi_star, 2.0 * pi), phi0.imag()};
    out.phi0_star = phi0;

    double log_pref;
    try {
        const auto [pos, d] = curve(phi0);
        const cplx g2 = inverse_r2_derivative(pos, d, x, 1.0, "G2 vanishes");
        if (!surface_.is_axisymmetric() && std::abs(g2) > 1.0 / (1e-12 * grid_.scale())) {
            throw InfiniteGeometryFactor("G2 too large");
        }
        const cplx f = integrand_f_theta(surface_, kernel_, density_, cplx{theta_star}, phi0, x);
        log_pref = std::log(std::abs(f)) + p * std::log(std::abs(g2));
    } catch (const InfiniteGeometryFactor&) {
        out.tz_skipped = true;
        out.note += "tz:infinite-geometry-factor;";
        return;
    }

    double log_e;
    try {
        const auto model = LinearRootModel::for_phi(surface_, t_star, phi_star, x, phi0);
        const auto& lag = quad::cached_gauss_laguerre(options_.laguerre_nodes);
        const double width = 1.0 / (n_phi * out.kappa);
        std::vector<double> terms;
        terms.reserve(2 * lag.n);
        for (int sign : {-1, 1}) {
            for (int i = 0; i < lag.n; ++i) {
                const cplx root = model(t_star + sign * lag.nodes[i] * width);
                terms.push_back(std::log(lag.weights[i]) + log_est_tz(root, n_phi, p) + lag.nodes[i]);
            }
        }
        log_e = log_pref + std::log(width) + log_sum_exp(terms);
    } catch (const DegenerateModel&) {
        out.note += "tz:degenerate-linear-model;";
        log_e = log_pref + log_est_tz(phi0, n_phi, p) + std::log(2.0 / grid_.n_t());
    }
    out.e_tz = std::exp(log_e);
}

EstimateBreakdown full_estimate(const Surface& surface, const KernelSpec& kernel, const DensitySpec& density,
                                const quad::QuadratureGrid& grid, const Vec3& x, const ConeParams& cone)
{
    EstimateOptions options;
    options.cone = cone;
    return ErrorEstimator(surface, kernel, density, grid.n_t, grid.n_phi, options).estimate(x);
}

double tz_contribution(const Surface& surface, const KernelSpec& kernel, const DensitySpec& density,
                       const quad::QuadratureGrid& grid, const Vec3& x)
{
    return full_estimate(surface, kernel, density, grid, x).e_tz;
}

double gl_contribution(const Surface& surface, const KernelSpec& kernel, const DensitySpec& density,
                       const quad::QuadratureGrid& grid, const Vec3& x)
{
    return full_estimate(surface, kernel, density, grid, x).e_gl;
}

} // namespace layerr
