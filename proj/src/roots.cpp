#include "layerr/roots.hpp"

#include "layerr/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace layerr {

namespace {

constexpr double pi = std::numbers::pi;

// ln(lambda + sqrt(lambda^2 - 1)) with lambda - 1 supplied separately to
// avoid cancellation when lambda is close to one.
double acosh_from_excess(double lambda, double lambda_minus_one)
{
    return std::log1p(lambda_minus_one + std::sqrt(lambda_minus_one * (lambda + 1.0)));
}

cplx canonical(cplx w) { return w.imag() < 0.0 ? std::conj(w) : w; }

double wrap_angle(double a) { return std::remainder(a, 2.0 * pi); }

} // namespace

const char* to_string(RootMethod method)
{
    switch (method) {
    case RootMethod::AnalyticCircle: return "analytic-circle";
    case RootMethod::AnalyticAxisymPhi: return "analytic-axisym-phi";
    case RootMethod::AnalyticSphereTheta: return "analytic-sphere-theta";
    case RootMethod::Newton: return "newton";
    case RootMethod::LinearModel: return "linear-model";
    case RootMethod::Combined: return "combined";
    }
    return "?";
}

RootResult circle_root(double a, const Vec3& x)
{
    const double rho2 = x.x * x.x + x.y * x.y;
    if (!(rho2 > 0.0)) throw NoRootExists("circle_root: target on the symmetry axis");
    const double rho = std::sqrt(rho2);
    const double lambda = (a * a + rho2 + x.z * x.z) / (2.0 * a * rho);
    const double excess = ((a - rho) * (a - rho) + x.z * x.z) / (2.0 * a * rho);
    if (!(excess > 0.0)) throw NoRootExists("circle_root: target on the circle");
    const cplx alpha{std::atan2(x.y, x.x), acosh_from_excess(lambda, excess)};

    const CVec3 g{a * std::cos(alpha), a * std::sin(alpha), cplx{0.0}};
    return {alpha, RootVariable::Phi, 0.0, lambda, RootMethod::AnalyticCircle, std::abs(squared_distance(g, x))};
}

RootResult axisym_phi_root(const Surface& surface, double theta_bar, const Vec3& x)
{
    const double rho2 = x.x * x.x + x.y * x.y;
    if (!(rho2 > 0.0)) throw NoRootExists("axisym_phi_root: target on the symmetry axis");
    if (!(theta_bar > 0.0 && theta_bar < pi)) throw NoRootExists("axisym_phi_root: theta at a pole");
    const auto [ra, rb] = surface.ring(theta_bar);
    if (!(ra > 0.0)) throw NoRootExists("axisym_phi_root: degenerate ring");
    const double rho = std::sqrt(rho2);
    const double dz = rb - x.z;
    const double lambda = (ra * ra + rho2 + dz * dz) / (2.0 * ra * rho);
    const double excess = ((ra - rho) * (ra - rho) + dz * dz) / (2.0 * ra * rho);
    if (!(excess > 0.0)) throw NoRootExists("axisym_phi_root: target on the surface");
    const cplx phi0{std::atan2(x.y, x.x), acosh_from_excess(lambda, excess)};
    const auto p = surface.eval(cplx{theta_bar}, phi0);
    return {phi0, RootVariable::Phi, theta_bar, lambda, RootMethod::AnalyticAxisymPhi,
            std::abs(squared_distance(p.pos, x))};
}

RootResult sphere_theta_root(double a, double phi_bar, const Vec3& x)
{
    const double w = x.x * std::cos(phi_bar) + x.y * std::sin(phi_bar);
    const double v = -x.x * std::sin(phi_bar) + x.y * std::cos(phi_bar);
    const double rho2 = w * w + x.z * x.z;
    if (!(rho2 > 0.0)) throw NoRootExists("sphere_theta_root: R^2 is constant in theta");
    const double rho = std::sqrt(rho2);
    const double lambda = (a * a + rho2 + v * v) / (2.0 * a * rho);
    const double excess = ((a - rho) * (a - rho) + v * v) / (2.0 * a * rho);
    if (!(excess > 0.0)) throw NoRootExists("sphere_theta_root: target on the sphere");
    const cplx theta0{std::atan2(w, x.z), acosh_from_excess(lambda, excess)};
    const cplx s = std::sin(theta0), c = std::cos(theta0);
    const CVec3 g{a * s * std::cos(phi_bar), a * s * std::sin(phi_bar), a * c};
    return {theta0, RootVariable::Theta, phi_bar, lambda, RootMethod::AnalyticSphereTheta,
            std::abs(squared_distance(g, x))};
}

Curve theta_curve(const Surface& surface, double phi_fixed)
{
    return [&surface, phi_fixed](cplx theta) {
        const auto p = surface.eval(theta, cplx{phi_fixed});
        return std::pair{p.pos, p.d1};
    };
}

Curve phi_curve(const Surface& surface, double theta_fixed)
{
    return [&surface, theta_fixed](cplx phi) {
        const auto p = surface.eval(cplx{theta_fixed}, phi);
        return std::pair{p.pos, p.d2};
    };
}

Curve theta_curve(const TaylorSurrogate& surrogate)
{
    return [&surrogate](cplx theta) { return surrogate.eval_theta(theta); };
}

Curve phi_curve(const TaylorSurrogate& surrogate)
{
    return [&surrogate](cplx phi) { return surrogate.eval_phi(phi); };
}

constexpr double kMaxImag = 30.0;
constexpr double kMaxStep = 1.0;

RootResult newton_root(const Curve& curve, RootVariable variable, double fixed, const Vec3& x, cplx initial,
                       double scale, const NewtonOptions& options)
{
    const double tol = options.tolerance * scale * scale;
    std::vector<cplx> starts{initial};
    for (double im : options.imag_ladder) {
        if (im > std::abs(initial.imag())) starts.emplace_back(initial.real(), im);
    }

    double best_residual = std::numeric_limits<double>::infinity();
    for (const cplx start : starts) {
        cplx w = start;
        for (int iter = 0; iter <= options.max_iterations; ++iter) {
            const auto [g, dg] = curve(w);
            const CVec3 r = g - to_complex(x);
            const cplx r2 = dot(r, r);
            const double res = std::abs(r2);
            if (!std::isfinite(res) || std::abs(w.imag()) > kMaxImag) break;
            best_residual = std::min(best_residual, res);
            const cplx dr2 = 2.0 * dot(r, dg);
            const cplx step = dr2 == 0.0 ? cplx{} : r2 / dr2;
            // A tiny residual far off the real axis can be cancellation noise; require a settled step too.
            const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                                 (std::norm(r.x) + std::norm(r.y) + std::norm(r.z));
            if (res < tol + noise && std::abs(step) <= 1e-8 * std::max(1.0, std::abs(w))) {
                w = canonical(w);
                if (variable == RootVariable::Phi) w = {wrap_angle(w.real()), w.imag()};
                const double residual = std::abs(squared_distance(curve(w).first, x));
                return {w, variable, fixed, std::nullopt, RootMethod::Newton, residual};
            }
            if (iter == options.max_iterations || dr2 == 0.0) break;
            w -= std::abs(step) > kMaxStep ? step * (kMaxStep / std::abs(step)) : step;
        }
    }
    std::ostringstream os;
    os << "newton_root: no convergence after " << starts.size() << " starts (best |R^2| = " << best_residual << ")";
    throw NonConvergence(os.str());
}

LinearRootModel::LinearRootModel(RootVariable variable, double t_star, double phi_star, const Vec3& r,
                                 const Vec3& g_t, const Vec3& g_phi, std::optional<cplx> star)
    : variable_(variable), t_star_(t_star), phi_star_(phi_star), r_(r), g_t_(g_t), g_phi_(g_phi)
{
    root_star_ = variable == RootVariable::T ? t_star : phi_star;
    across_star_ = variable == RootVariable::T ? phi_star : t_star;
    const Vec3& g = g_root();
    const double rn = norm(r_), gn = norm(g);
    if (!(norm(cross(r_, g)) > 1e-14 * rn * gn)) {
        throw DegenerateModel("linear root model: target on the tangent line of the root direction");
    }
    const cplx center = linear(0.0);
    star_ = star.value_or(center);
    offset_ = star_ - center;
}

cplx LinearRootModel::linear(double delta) const
{
    // |v + g s|^2 = 0 with v = r + g_across delta: s = -(v.g)/|g|^2 +- i |v x g| / |g|^2.
    const Vec3& g = g_root();
    const Vec3 v = r_ + g_across() * delta;
    const double c = dot(g, g);
    return {root_star_ - dot(v, g) / c, norm(cross(v, g)) / c};
}

RootResult newton_from_scan(const Curve& curve, RootVariable variable, double fixed, const Vec3& x, double lo,
                            double hi, double scale, int scan_points, const NewtonOptions& options)
{
    double best = lo, best_r2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= scan_points; ++i) {
        const double w = lo + (hi - lo) * i / scan_points;
        const double r2 = std::real(squared_distance(curve(cplx{w}).first, x));
        if (r2 < best_r2) {
            best_r2 = r2;
            best = w;
        }
    }
    return newton_root(curve, variable, fixed, x, cplx{best, 0.1}, scale, options);
}

LinearRootModel LinearRootModel::for_t(const Surface& surface, double t_star, double phi_star, const Vec3& x,
                                       std::optional<cplx> t0_star)
{
    const auto p = surface.eval_t(t_star, phi_star);
    return {RootVariable::T, t_star, phi_star, p.pos - x, p.d1, p.d2, t0_star};
}

LinearRootModel LinearRootModel::for_phi(const Surface& surface, double t_star, double phi_star, const Vec3& x,
                                         std::optional<cplx> phi0_star)
{
    const auto p = surface.eval_t(t_star, phi_star);
    return {RootVariable::Phi, t_star, phi_star, p.pos - x, p.d1, p.d2, phi0_star};
}

} // namespace layerr
