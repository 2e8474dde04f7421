#include "layerr/surfaces.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace layerr {

namespace {

constexpr double pi = std::numbers::pi;

// Coefficient of Re Y_3^2 = C cos(2 phi) sin^2(theta) cos(theta).
const double kY32 = 0.25 * std::sqrt(105.0 / (2.0 * pi));

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

SurfacePoint<cplx> eval_axisymmetric(cplx a, cplx da, cplx b, cplx db, cplx theta, cplx phi)
{
    const cplx s = std::sin(theta), c = std::cos(theta);
    const cplx cp = std::cos(phi), sp = std::sin(phi);
    const cplx ring = a * s;
    const cplx dring = da * s + a * c;
    return {
        {ring * cp, ring * sp, b * c},
        {dring * cp, dring * sp, db * c - b * s},
        {-ring * sp, ring * cp, cplx{0.0}},
    };
}

SurfacePoint<cplx> eval_blob(const AnalyticBlob& blob, cplx theta, cplx phi)
{
    const cplx s = std::sin(theta), c = std::cos(theta);
    const cplx cp = std::cos(phi), sp = std::sin(phi);
    const cplx c2p = std::cos(2.0 * phi), s2p = std::sin(2.0 * phi);

    const cplx y = kY32 * c2p * s * s * c;
    const cplx y_theta = kY32 * c2p * (2.0 * s * c * c - s * s * s);
    const cplx y_phi = -2.0 * kY32 * s2p * s * s * c;

    const cplx e = blob.amplitude * std::exp(-blob.sharpness * y);
    const cplx rho = blob.base + e;
    const cplx rho_theta = -blob.sharpness * y_theta * e;
    const cplx rho_phi = -blob.sharpness * y_phi * e;

    const CVec3 u{s * cp, s * sp, c};
    const CVec3 u_theta{c * cp, c * sp, -s};
    const CVec3 u_phi{-s * sp, s * cp, cplx{0.0}};
    return {u * rho, u * rho_theta + u_theta * rho, u * rho_phi + u_phi * rho};
}

SurfacePoint<double> real_point(const SurfacePoint<cplx>& p)
{
    return {real_part(p.pos), real_part(p.d1), real_part(p.d2)};
}

} // namespace

double ThetaMap::theta(double t) const
{
    return kind == ThetaMapKind::Linear ? (t + 1.0) * pi / 2.0 : pi - std::acos(std::clamp(t, -1.0, 1.0));
}

cplx ThetaMap::theta(cplx t) const
{
    return kind == ThetaMapKind::Linear ? (t + 1.0) * (pi / 2.0) : pi - std::acos(t);
}

double ThetaMap::t_of_theta(double theta) const
{
    if (!(theta >= 0.0 && theta <= pi)) throw std::domain_error("theta outside [0, pi]");
    return kind == ThetaMapKind::Linear ? -1.0 + 2.0 * theta / pi : -std::cos(theta);
}

cplx ThetaMap::t_of_theta(cplx theta) const
{
    return kind == ThetaMapKind::Linear ? -1.0 + 2.0 * theta / pi : -std::cos(theta);
}

cplx ThetaMap::dtheta_dt(cplx theta) const
{
    return kind == ThetaMapKind::Linear ? cplx{pi / 2.0} : 1.0 / std::sin(theta);
}

ThetaMapKind parse_theta_map(const std::string& name)
{
    if (name == "linear") return ThetaMapKind::Linear;
    if (name == "cosine" || name == "cos") return ThetaMapKind::Cosine;
    throw std::invalid_argument("unknown theta map '" + name + "' (expected linear|cosine)");
}

std::string to_string(ThetaMapKind kind) { return kind == ThetaMapKind::Linear ? "linear" : "cosine"; }

Axisymmetric make_spheroid(double a, double b)
{
    auto constant = [](double v) { return [v](cplx) { return cplx{v}; }; };
    auto zero = [](cplx) { return cplx{0.0}; };
    return {constant(a), zero, constant(b), zero, "spheroid"};
}

Surface::Surface(Shape shape, ThetaMap map) : shape_(std::move(shape)), map_(map) {}

Surface Surface::sphere(double radius, ThetaMapKind map) { return {Sphere{radius}, ThetaMap{map}}; }

Surface Surface::spheroid(double a, double b, ThetaMapKind map) { return {make_spheroid(a, b), ThetaMap{map}}; }

Surface Surface::blob(ThetaMapKind map) { return {AnalyticBlob{}, ThetaMap{map}}; }

std::string Surface::name() const
{
    return std::visit(overloaded{[](const Sphere&) { return std::string("sphere"); },
                                 [](const Axisymmetric& s) { return s.label; },
                                 [](const AnalyticBlob&) { return std::string("blob"); }},
                      shape_);
}

std::optional<double> Surface::sphere_radius() const
{
    if (auto* s = std::get_if<Sphere>(&shape_)) return s->radius;
    return std::nullopt;
}

std::pair<double, double> Surface::ring(double theta) const
{
    return std::visit(overloaded{[&](const Sphere& s) {
                                     return std::pair{s.radius * std::sin(theta), s.radius * std::cos(theta)};
                                 },
                                 [&](const Axisymmetric& s) {
                                     return std::pair{s.a(theta).real() * std::sin(theta),
                                                      s.b(theta).real() * std::cos(theta)};
                                 },
                                 [](const AnalyticBlob&) -> std::pair<double, double> {
                                     throw std::logic_error("ring() requires an axisymmetric surface");
                                 }},
                      shape_);
}

SurfacePoint<cplx> Surface::eval(cplx theta, cplx phi) const
{
    return std::visit(overloaded{[&](const Sphere& s) {
                                     return eval_axisymmetric(s.radius, 0.0, s.radius, 0.0, theta, phi);
                                 },
                                 [&](const Axisymmetric& s) {
                                     return eval_axisymmetric(s.a(theta), s.da(theta), s.b(theta), s.db(theta),
                                                              theta, phi);
                                 },
                                 [&](const AnalyticBlob& b) { return eval_blob(b, theta, phi); }},
                      shape_);
}

SurfacePoint<double> Surface::eval(double theta, double phi) const { return real_point(eval(cplx{theta}, cplx{phi})); }

SurfacePoint<cplx> Surface::eval_t(cplx t, cplx phi) const
{
    const cplx theta = map_.theta(t);
    auto p = eval(theta, phi);
    p.d1 = p.d1 * map_.dtheta_dt(theta);
    return p;
}

SurfacePoint<double> Surface::eval_t(double t, double phi) const
{
    const double theta = map_.theta(t);
    auto p = real_point(eval(cplx{theta}, cplx{phi}));
    p.d1 = p.d1 * map_.dtheta_dt(theta).real();
    return p;
}

double Surface::area_element(double t, double phi) const
{
    const auto p = eval_t(t, phi);
    return norm(cross(p.d1, p.d2));
}

double Surface::grid_anisotropy(double t, double phi) const
{
    const auto p = eval_t(t, phi);
    const double dphi = norm(p.d2);
    if (!(dphi > 0.0)) throw std::domain_error("grid_anisotropy: d_phi gamma vanishes (pole)");
    return norm(p.d1) / dphi;
}

std::vector<Vec3> cauchy_derivatives(const std::function<CVec3(cplx)>& curve, double c, int order, double radius,
                                     int samples)
{
    std::vector<CVec3> acc(order + 1);
    for (int m = 0; m < samples; ++m) {
        const double alpha = 2.0 * pi * m / samples;
        const cplx w = std::polar(1.0, alpha);
        const CVec3 v = curve(c + radius * w);
        cplx rot{1.0};
        const cplx step = std::conj(w);
        for (int j = 0; j <= order; ++j) {
            acc[j] += v * rot;
            rot *= step;
        }
    }
    std::vector<Vec3> out(order + 1);
    double factorial = 1.0;
    for (int j = 0; j <= order; ++j) {
        if (j > 0) factorial *= j;
        const double scale = factorial / (samples * std::pow(radius, j));
        out[j] = real_part(acc[j]) * scale;
    }
    return out;
}

TaylorSurrogate taylor_surrogate(const Surface& surface, double theta_c, double phi_c, int order)
{
    if (order < 1) throw std::invalid_argument("taylor_surrogate: order must be >= 1");
    TaylorSurrogate s;
    s.theta_c = theta_c;
    s.phi_c = phi_c;
    s.order = order;
    s.d_theta = cauchy_derivatives([&](cplx th) { return surface.eval(th, cplx{phi_c}).pos; }, theta_c, order);
    s.d_phi = cauchy_derivatives([&](cplx ph) { return surface.eval(cplx{theta_c}, ph).pos; }, phi_c, order);
    // The order-0 term is the exact point.
    const Vec3 center = surface.eval(theta_c, phi_c).pos;
    s.d_theta[0] = center;
    s.d_phi[0] = center;
    return s;
}

namespace {

std::pair<CVec3, CVec3> horner(const std::vector<Vec3>& d, cplx h)
{
    // sum_j d_j h^j / j!  and its derivative, evaluated from the top down.
    const int q = static_cast<int>(d.size()) - 1;
    CVec3 value = to_complex(d[q]);
    CVec3 deriv{};
    for (int j = q; j >= 1; --j) {
        // value holds V_j = sum_{i>=j} d_i h^{i-j} j!/i!, with V_{j-1} = d_{j-1} + (h/j) V_j.
        deriv = (deriv * h + value) * (1.0 / j);
        value = to_complex(d[j - 1]) + value * (h / static_cast<double>(j));
    }
    return {value, deriv};
}

} // namespace

std::pair<CVec3, CVec3> TaylorSurrogate::eval_theta(cplx theta) const { return horner(d_theta, theta - theta_c); }

std::pair<CVec3, CVec3> TaylorSurrogate::eval_phi(cplx phi) const { return horner(d_phi, phi - phi_c); }

} // namespace layerr
