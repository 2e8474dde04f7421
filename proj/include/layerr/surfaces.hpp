#pragma once

#include "layerr/geometry.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace layerr {

enum class ThetaMapKind { Linear, Cosine };

/// Map from the Gauss-Legendre variable t in [-1,1] to the polar angle.
///   Linear: theta = (t+1) pi/2      Cosine: theta = pi - arccos(t)
struct ThetaMap {
    ThetaMapKind kind = ThetaMapKind::Cosine;

    double theta(double t) const;
    cplx theta(cplx t) const;
    double t_of_theta(double theta) const; // throws std::domain_error outside [0, pi]
    cplx t_of_theta(cplx theta) const;     // analytic continuation, no range check
    /// d theta / dt expressed through theta, so complex roots never need arccos.
    cplx dtheta_dt(cplx theta) const;
};

ThetaMapKind parse_theta_map(const std::string& name);
std::string to_string(ThetaMapKind kind);

struct Sphere {
    double radius = 1.0;
};

/// gamma = (a(theta) sin(theta) cos(phi), a(theta) sin(theta) sin(phi), b(theta) cos(theta)).
/// Profiles and their derivatives must accept complex theta.
struct Axisymmetric {
    using Profile = std::function<cplx(cplx)>;
    Profile a, da, b, db;
    std::string label = "axisymmetric";
};

Axisymmetric make_spheroid(double a, double b);

/// gamma = rho(theta,phi) (cos(phi) sin(theta), sin(phi) sin(theta), cos(theta)) with
/// rho = base + amplitude * exp(-sharpness * Re Y_3^2(theta, phi)).
struct AnalyticBlob {
    double base = 0.8;
    double amplitude = 0.2;
    double sharpness = 3.0;
};

template <class T>
struct SurfacePoint {
    Vec3T<T> pos;
    Vec3T<T> d1; // derivative w.r.t. theta (eval) or t (eval_t)
    Vec3T<T> d2; // derivative w.r.t. phi
};

using Shape = std::variant<Sphere, Axisymmetric, AnalyticBlob>;

class Surface {
public:
    Surface(Shape shape, ThetaMap map);

    static Surface sphere(double radius, ThetaMapKind map = ThetaMapKind::Cosine);
    static Surface spheroid(double a, double b, ThetaMapKind map = ThetaMapKind::Cosine);
    static Surface blob(ThetaMapKind map = ThetaMapKind::Cosine);

    const Shape& shape() const { return shape_; }
    const ThetaMap& theta_map() const { return map_; }
    std::string name() const;

    bool is_axisymmetric() const { return !std::holds_alternative<AnalyticBlob>(shape_); }
    std::optional<double> sphere_radius() const;

    /// (a(theta) sin(theta), b(theta) cos(theta)) for axisymmetric shapes.
    std::pair<double, double> ring(double theta) const;

    SurfacePoint<cplx> eval(cplx theta, cplx phi) const;
    SurfacePoint<double> eval(double theta, double phi) const;
    SurfacePoint<cplx> eval_t(cplx t, cplx phi) const;
    SurfacePoint<double> eval_t(double t, double phi) const;

    /// ||d_t gamma x d_phi gamma|| at real (t, phi).
    double area_element(double t, double phi) const;

    /// kappa = ||d_t gamma|| / ||d_phi gamma||; throws std::domain_error at a pole.
    double grid_anisotropy(double t, double phi) const;

private:
    Shape shape_;
    ThetaMap map_;
};

/// Local polynomial models of gamma along one parameter direction through
/// (theta_c, phi_c). Derivatives are stored unscaled: d[j] = d^j gamma / d var^j.
struct TaylorSurrogate {
    double theta_c = 0.0;
    double phi_c = 0.0;
    int order = 4;
    std::vector<Vec3> d_theta;
    std::vector<Vec3> d_phi;

    /// Model along theta at phi = phi_c: (position, d/dtheta).
    std::pair<CVec3, CVec3> eval_theta(cplx theta) const;
    /// Model along phi at theta = theta_c: (position, d/dphi).
    std::pair<CVec3, CVec3> eval_phi(cplx phi) const;
};

TaylorSurrogate taylor_surrogate(const Surface& surface, double theta_c, double phi_c, int order = 4);

/// Derivatives 0..order at real c of an analytic curve, from the Cauchy
/// integral over a circle of radius `radius` with `samples` trapezoidal points.
std::vector<Vec3> cauchy_derivatives(const std::function<CVec3(cplx)>& curve, double c, int order,
                                     double radius = 0.5, int samples = 32);

} // namespace layerr
