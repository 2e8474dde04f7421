#pragma once

#include "layerr/quadrature.hpp"
#include "layerr/surfaces.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace layerr {

enum class KernelKind { HarmonicSingle, HarmonicDouble, ModHelmholtzSingle };

/// Layer-potential kernel k(x,y) / ||y - x||^{2p}.
struct KernelSpec {
    KernelKind kind = KernelKind::HarmonicSingle;
    double omega = 0.0; // ModHelmholtzSingle only

    double p() const { return kind == KernelKind::HarmonicDouble ? 1.5 : 0.5; }

    static KernelSpec harmonic_single() { return {KernelKind::HarmonicSingle, 0.0}; }
    static KernelSpec harmonic_double() { return {KernelKind::HarmonicDouble, 0.0}; }
    static KernelSpec mod_helmholtz_single(double omega) { return {KernelKind::ModHelmholtzSingle, omega}; }
};

enum class DensityKind { Unit, Varying };

struct DensitySpec {
    DensityKind kind = DensityKind::Unit;

    /// sigma(theta, phi); Varying is 1 + sin(6 phi + theta) sin^2(theta).
    cplx operator()(cplx theta, cplx phi) const;
};

KernelSpec parse_kernel(const std::string& name, double omega = 0.0);
DensitySpec parse_density(const std::string& name);
std::string to_string(KernelKind kind);
std::string to_string(DensityKind kind);

/// f(t,phi) = k(x, gamma) sigma ||d_t gamma x d_phi gamma||, continued
/// analytically when t or phi is complex (principal square roots). The double
/// layer uses n ||..|| = d_t gamma x d_phi gamma, the outward normal for both
/// theta maps, so its numerator carries no square root.
cplx integrand_f(const Surface& surface, const KernelSpec& kernel, const DensitySpec& density, cplx t, cplx phi,
                 const Vec3& x);

/// Same f, addressed by theta instead of t (d_t gamma = d_theta gamma * dtheta/dt).
cplx integrand_f_theta(const Surface& surface, const KernelSpec& kernel, const DensitySpec& density, cplx theta,
                       cplx phi, const Vec3& x);

/// Nearest quadrature node to a target.
struct NearestNode {
    int k = 0; // t index
    int l = 0; // phi index
    double t = 0.0;
    double phi = 0.0;
    double distance = 0.0;
};

/// Surface geometry sampled at the nodes of one grid, with the
/// x-independent parts of the integrand and the weights folded in.
class GridGeometry {
public:
    GridGeometry(const Surface& surface, const DensitySpec& density, int n_t, int n_phi);

    int n_t() const { return grid_.n_t; }
    int n_phi() const { return grid_.n_phi; }
    const quad::QuadratureGrid& grid() const { return grid_; }
    const std::vector<Vec3>& positions() const { return pos_; }

    /// Node index is k * n_phi + l.
    NearestNode nearest(const Vec3& x) const;
    double min_distance(const Vec3& x) const { return nearest(x).distance; }
    /// max_i ||gamma_i||, the surface length scale used to normalize tolerances.
    double scale() const { return scale_; }

    double quadrature(const KernelSpec& kernel, const Vec3& x) const;

private:
    quad::QuadratureGrid grid_;
    std::vector<Vec3> pos_;
    std::vector<double> wsigma_;   // w_k w_l sigma ||d_t x d_phi||
    std::vector<Vec3> wnormal_;    // w_k w_l sigma (d_t x d_phi)
    double scale_ = 0.0;
};

/// Regular quadrature and its 5x upsampled reference for one problem.
class PotentialEvaluator {
public:
    static constexpr int kUpsampling = 5;

    PotentialEvaluator(Surface surface, KernelSpec kernel, DensitySpec density, int n_t, int n_phi);

    double quadrature(const Vec3& x) const { return base_.quadrature(kernel_, x); }
    double reference(const Vec3& x) const { return fine_.quadrature(kernel_, x); }
    double measured_error(const Vec3& x) const { return std::abs(quadrature(x) - reference(x)); }

    const GridGeometry& base() const { return base_; }
    const GridGeometry& fine() const { return fine_; }
    const Surface& surface() const { return surface_; }
    const KernelSpec& kernel() const { return kernel_; }
    const DensitySpec& density() const { return density_; }

private:
    Surface surface_;
    KernelSpec kernel_;
    DensitySpec density_;
    GridGeometry base_;
    GridGeometry fine_;
};

double potential_quadrature(const Surface& surface, const KernelSpec& kernel, const DensitySpec& density,
                            const quad::QuadratureGrid& grid, const Vec3& x);
double reference_potential(const Surface& surface, const KernelSpec& kernel, const DensitySpec& density,
                           const quad::QuadratureGrid& grid, const Vec3& x);
double measured_error(const Surface& surface, const KernelSpec& kernel, const DensitySpec& density,
                      const quad::QuadratureGrid& grid, const Vec3& x);

} // namespace layerr
