#include "layerr/potentials.hpp"

#include "layerr/errors.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

namespace layerr {

cplx DensitySpec::operator()(cplx theta, cplx phi) const
{
    if (kind == DensityKind::Unit) return 1.0;
    const cplx s = std::sin(theta);
    return 1.0 + std::sin(6.0 * phi + theta) * s * s;
}

KernelSpec parse_kernel(const std::string& name, double omega)
{
    if (name == "harmonic-single") return KernelSpec::harmonic_single();
    if (name == "harmonic-double") return KernelSpec::harmonic_double();
    if (name == "mod-helmholtz-single") {
        if (!(omega > 0.0)) throw std::invalid_argument("mod-helmholtz-single requires omega > 0");
        return KernelSpec::mod_helmholtz_single(omega);
    }
    throw std::invalid_argument("unknown kernel '" + name +
                                "' (expected harmonic-single|harmonic-double|mod-helmholtz-single)");
}

DensitySpec parse_density(const std::string& name)
{
    if (name == "unit") return {DensityKind::Unit};
    if (name == "varying") return {DensityKind::Varying};
    throw std::invalid_argument("unknown density '" + name + "' (expected unit|varying)");
}

std::string to_string(KernelKind kind)
{
    switch (kind) {
    case KernelKind::HarmonicSingle: return "harmonic-single";
    case KernelKind::HarmonicDouble: return "harmonic-double";
    case KernelKind::ModHelmholtzSingle: return "mod-helmholtz-single";
    }
    return "?";
}

std::string to_string(DensityKind kind) { return kind == DensityKind::Unit ? "unit" : "varying"; }

cplx integrand_f(const Surface& surface, const KernelSpec& kernel, const DensitySpec& density, cplx t, cplx phi,
                 const Vec3& x)
{
    return integrand_f_theta(surface, kernel, density, surface.theta_map().theta(t), phi, x);
}

cplx integrand_f_theta(const Surface& surface, const KernelSpec& kernel, const DensitySpec& density, cplx theta,
                       cplx phi, const Vec3& x)
{
    const auto p = surface.eval(theta, phi);
    const CVec3 n = cross(p.d1 * surface.theta_map().dtheta_dt(theta), p.d2);
    const cplx sigma = density(theta, phi);
    switch (kernel.kind) {
    case KernelKind::HarmonicSingle: return sigma * std::sqrt(dot(n, n));
    case KernelKind::HarmonicDouble: return sigma * dot(n, p.pos - to_complex(x));
    case KernelKind::ModHelmholtzSingle: {
        const cplx r = std::sqrt(squared_distance(p.pos, x));
        return std::exp(-kernel.omega * r) * sigma * std::sqrt(dot(n, n));
    }
    }
    return 0.0;
}

GridGeometry::GridGeometry(const Surface& surface, const DensitySpec& density, int n_t, int n_phi) : grid_(n_t, n_phi)
{
    const std::size_t total = grid_.size();
    pos_.resize(total);
    wsigma_.resize(total);
    wnormal_.resize(total);
    for (int k = 0; k < n_t; ++k) {
        const double t = grid_.t_rule.nodes[k];
        const double theta = surface.theta_map().theta(t);
        for (int l = 0; l < n_phi; ++l) {
            const double phi = grid_.phi_rule.nodes[l];
            const auto p = surface.eval_t(t, phi);
            const Vec3 n = cross(p.d1, p.d2);
            const double w = grid_.t_rule.weights[k] * grid_.phi_rule.weights[l] * density(theta, phi).real();
            const std::size_t i = static_cast<std::size_t>(k) * n_phi + l;
            pos_[i] = p.pos;
            wsigma_[i] = w * norm(n);
            wnormal_[i] = n * w;
            scale_ = std::max(scale_, norm(p.pos));
        }
    }
}

NearestNode GridGeometry::nearest(const Vec3& x) const
{
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pos_.size(); ++i) {
        const Vec3 r = pos_[i] - x;
        const double d2 = dot(r, r);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    NearestNode node;
    node.k = static_cast<int>(best / grid_.n_phi);
    node.l = static_cast<int>(best % grid_.n_phi);
    node.t = grid_.t_rule.nodes[node.k];
    node.phi = grid_.phi_rule.nodes[node.l];
    node.distance = std::sqrt(best_d2);
    return node;
}

double GridGeometry::quadrature(const KernelSpec& kernel, const Vec3& x) const
{
    double sum = 0.0;
    for (std::size_t i = 0; i < pos_.size(); ++i) {
        const Vec3 r = pos_[i] - x;
        const double r2 = dot(r, r);
        if (r2 < 1e-28) {
            std::ostringstream os;
            os << "target coincides with quadrature node " << i << " (distance " << std::sqrt(r2) << ")";
            throw SingularEvaluation(os.str());
        }
        const double rr = std::sqrt(r2);
        switch (kernel.kind) {
        case KernelKind::HarmonicSingle: sum += wsigma_[i] / rr; break;
        case KernelKind::HarmonicDouble: sum += dot(wnormal_[i], r) / (r2 * rr); break;
        case KernelKind::ModHelmholtzSingle: sum += wsigma_[i] * std::exp(-kernel.omega * rr) / rr; break;
        }
    }
    return sum;
}

PotentialEvaluator::PotentialEvaluator(Surface surface, KernelSpec kernel, DensitySpec density, int n_t, int n_phi)
    : surface_(std::move(surface)),
      kernel_(kernel),
      density_(density),
      base_(surface_, density_, n_t, n_phi),
      fine_(surface_, density_, kUpsampling * n_t, kUpsampling * n_phi)
{
}

double potential_quadrature(const Surface& surface, const KernelSpec& kernel, const DensitySpec& density,
                            const quad::QuadratureGrid& grid, const Vec3& x)
{
    return GridGeometry(surface, density, grid.n_t, grid.n_phi).quadrature(kernel, x);
}

double reference_potential(const Surface& surface, const KernelSpec& kernel, const DensitySpec& density,
                           const quad::QuadratureGrid& grid, const Vec3& x)
{
    const int up = PotentialEvaluator::kUpsampling;
    return GridGeometry(surface, density, up * grid.n_t, up * grid.n_phi).quadrature(kernel, x);
}

double measured_error(const Surface& surface, const KernelSpec& kernel, const DensitySpec& density,
                      const quad::QuadratureGrid& grid, const Vec3& x)
{
    return std::abs(potential_quadrature(surface, kernel, density, grid, x) -
                    reference_potential(surface, kernel, density, grid, x));
}

} // namespace layerr
