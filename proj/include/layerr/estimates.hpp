#pragma once

#include "layerr/potentials.hpp"
#include "layerr/roots.hpp"

#include <optional>
#include <string>

namespace layerr {

/// Near-axis cone in which the trapezoidal contribution is dropped:
/// rho / A < (K_c pi / n_t) * d_min.
struct ConeParams {
    double A = 1.0;
    double K_c = 10.0;
};

struct EstimateOptions {
    ConeParams cone;
    int laguerre_nodes = 8;
    int taylor_order = 4;
    NewtonOptions newton;
};

struct EstimateBreakdown {
    double e_tz = 0.0;
    double e_gl = 0.0;
    double total = 0.0;
    bool tz_skipped_by_cone = false;
    bool tz_skipped = false; // any reason, including the cone
    bool gl_full_period = false; // GL term integrated over the full phi period
    std::optional<cplx> phi0_star;
    std::optional<cplx> t0_star;
    std::optional<RootMethod> tz_root_method;
    std::optional<RootMethod> gl_root_method;
    NearestNode closest;
    double kappa = 0.0;
    std::string note; // fallbacks taken, empty when none
};

/// G1 = (dR^2/dt)^{-1} at complex t and real phi.
cplx geometry_factor_1(const Surface& surface, cplx t, double phi, const Vec3& x);
/// G2 = (dR^2/dphi)^{-1} at real t and complex phi.
cplx geometry_factor_2(const Surface& surface, double t, cplx phi, const Vec3& x);

/// Trapezoidal kernel (4 pi / Gamma(p)) n^{p-1} exp(-n |Im phi0|).
double est_tz(cplx phi0, int n, double p);
double log_est_tz(cplx phi0, int n, double p);

/// Gauss-Legendre kernel (4 pi / Gamma(p)) |(2n+1)/sqrt(t0^2-1)|^{p-1} |t0 + sqrt(t0^2-1)|^{-(2n+1)},
/// sqrt(t0^2-1) = sqrt(t0+1) sqrt(t0-1). Throws SingularEvaluation for t0 on [-1, 1].
double est_gl(cplx t0, int n, double p);
double log_est_gl(cplx t0, int n, double p);

bool cone_test(const Vec3& x, double d_min, int n_t, const ConeParams& cone);
bool cone_test(const Vec3& x, const GridGeometry& grid, const ConeParams& cone);

/// |G2(theta, phi0)|^p exp(-n_phi |Im phi0|) in closed form for an axisymmetric surface.
double e_fac_tz_analytic(const Surface& surface, const Vec3& x, double theta, int n_phi, double p);
double log_e_fac_tz_analytic(const Surface& surface, const Vec3& x, double theta, int n_phi, double p);

/// n!! / (n+1)!! for even n.
double double_factorial_ratio(int n);

/// Distance-only error estimate for a sphere under the cosine map with
/// n_t = n/2, n_phi = n, k = sigma = 1.
double sphere_simplified(double zeta, double a, double p, int n);

/// Gauss-Legendre error for a target on the axis of a unit-density sphere
/// (cosine map, so |f| = a^2 along the root).
double sphere_axis_gl(double a, double z, int n_t, double p);

/// Equator approximations of the two contributions for a unit-density sphere.
double sphere_equator_tz(double rho, double a, double p, int n_phi);
double sphere_equator_gl(double rho, double a, double p, int n_t);

/// Per-target error estimate for one discretized layer potential.
class ErrorEstimator {
public:
    ErrorEstimator(Surface surface, KernelSpec kernel, DensitySpec density, int n_t, int n_phi,
                   EstimateOptions options = {});

    EstimateBreakdown estimate(const Vec3& x) const;

    const GridGeometry& grid() const { return grid_; }
    const Surface& surface() const { return surface_; }
    const EstimateOptions& options() const { return options_; }

private:
    void gl_part(const Vec3& x, const std::optional<TaylorSurrogate>& surrogate, EstimateBreakdown& out) const;
    bool gl_full_period(const Vec3& x, EstimateBreakdown& out) const;
    void tz_part(const Vec3& x, const std::optional<TaylorSurrogate>& surrogate, EstimateBreakdown& out) const;

    Surface surface_;
    KernelSpec kernel_;
    DensitySpec density_;
    EstimateOptions options_;
    GridGeometry grid_;
};

EstimateBreakdown full_estimate(const Surface& surface, const KernelSpec& kernel, const DensitySpec& density,
                                const quad::QuadratureGrid& grid, const Vec3& x, const ConeParams& cone = {});
double tz_contribution(const Surface& surface, const KernelSpec& kernel, const DensitySpec& density,
                       const quad::QuadratureGrid& grid, const Vec3& x);
double gl_contribution(const Surface& surface, const KernelSpec& kernel, const DensitySpec& density,
                       const quad::QuadratureGrid& grid, const Vec3& x);

} // namespace layerr
