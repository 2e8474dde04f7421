#pragma once

#include "layerr/errors.hpp"
#include "layerr/surfaces.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace layerr {

enum class RootVariable { Theta, Phi, T };
enum class RootMethod { AnalyticCircle, AnalyticAxisymPhi, AnalyticSphereTheta, Newton, LinearModel, Combined };

const char* to_string(RootMethod method);

/// One member of a conjugate root pair of R^2, reported with Im >= 0.
struct RootResult {
    cplx value;
    RootVariable variable = RootVariable::Theta;
    double fixed = 0.0; // the parameter held fixed
    std::optional<double> lambda;
    RootMethod method = RootMethod::Newton;
    double residual = 0.0; // |R^2(value)|
};

/// Root in alpha of |a (cos alpha, sin alpha, 0) - x|^2. Throws NoRootExists on the z-axis.
RootResult circle_root(double a, const Vec3& x);

/// Root in phi at fixed theta for an axisymmetric surface.
RootResult axisym_phi_root(const Surface& surface, double theta_bar, const Vec3& x);

/// Root in theta at fixed phi for a sphere of radius a.
RootResult sphere_theta_root(double a, double phi_bar, const Vec3& x);

/// A curve w -> (gamma(w), d gamma / dw) with one complex parameter.
using Curve = std::function<std::pair<CVec3, CVec3>(cplx)>;

Curve theta_curve(const Surface& surface, double phi_fixed);
Curve phi_curve(const Surface& surface, double theta_fixed);
Curve theta_curve(const TaylorSurrogate& surrogate);
Curve phi_curve(const TaylorSurrogate& surrogate);

struct NewtonOptions {
    int max_iterations = 30;
    double tolerance = 1e-13; // on |R^2| / scale^2
    std::vector<double> imag_ladder{0.1, 0.2, 0.5, 1.0};
};

/// Newton iteration w <- w - R^2(w) / (R^2)'(w). Retries with the imaginary
/// parts of the ladder that exceed Im(initial). Throws NonConvergence.
RootResult newton_root(const Curve& curve, RootVariable variable, double fixed, const Vec3& x, cplx initial,
                       double scale, const NewtonOptions& options = {});

/// Newton started at the minimizer of a real scan of R^2 over [lo, hi], plus 0.1i.
RootResult newton_from_scan(const Curve& curve, RootVariable variable, double fixed, const Vec3& x, double lo,
                            double hi, double scale, int scan_points = 64, const NewtonOptions& options = {});

/// Bivariate linear model of the root along one grid direction, shifted so
/// it reproduces an accurate root at the expansion point:
///   root(u) = star - L(0) + L(u - u*)
/// where L is the root of |r + g_across du + g_root ds|^2 in s.
class LinearRootModel {
public:
    /// Root in t as a function of phi (Gauss-Legendre direction).
    static LinearRootModel for_t(const Surface& surface, double t_star, double phi_star, const Vec3& x,
                                 std::optional<cplx> t0_star = std::nullopt);
    /// Root in phi as a function of t (trapezoidal direction).
    static LinearRootModel for_phi(const Surface& surface, double t_star, double phi_star, const Vec3& x,
                                   std::optional<cplx> phi0_star = std::nullopt);

    /// Plain linear-model root at across-offset delta, Im >= 0.
    cplx linear(double delta) const;
    /// Combined model at the across-variable value u.
    cplx operator()(double u) const { return offset_ + linear(u - across_star_); }

    RootVariable variable() const { return variable_; }
    double t_star() const { return t_star_; }
    double phi_star() const { return phi_star_; }
    const Vec3& r() const { return r_; }
    const Vec3& g_t() const { return g_t_; }
    const Vec3& g_phi() const { return g_phi_; }
    cplx star() const { return star_; }
    cplx offset() const { return offset_; }

private:
    LinearRootModel(RootVariable variable, double t_star, double phi_star, const Vec3& r, const Vec3& g_t,
                    const Vec3& g_phi, std::optional<cplx> star);

    RootVariable variable_;
    double t_star_, phi_star_;
    double root_star_ = 0.0, across_star_ = 0.0;
    Vec3 r_, g_t_, g_phi_;
    const Vec3& g_root() const { return variable_ == RootVariable::T ? g_t_ : g_phi_; }
    const Vec3& g_across() const { return variable_ == RootVariable::T ? g_phi_ : g_t_; }

    cplx star_{}, offset_{};
};

} // namespace layerr
