#pragma once

#include "layerr/errors.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <type_traits>
#include <vector>

namespace layerr::quad {

enum class RuleKind { GaussLegendre, Trapezoidal, GaussLaguerre };

/// One-dimensional quadrature rule: sum_i w_i g(x_i).
///  - GaussLegendre: nodes in (-1,1), increasing, integrates over [-1,1].
///  - Trapezoidal:   nodes 2*pi*l/n on [0, 2*pi), weights 2*pi/n.
///  - GaussLaguerre: nodes in (0,inf), weight function exp(-x).
struct Rule1D {
    RuleKind kind;
    int n = 0;
    std::vector<double> nodes;
    std::vector<double> weights;

    template <class F>
    auto apply(F&& g) const
    {
        using R = std::decay_t<decltype(g(0.0))>;
        R sum{};
        for (int i = 0; i < n; ++i) sum += weights[i] * g(nodes[i]);
        return sum;
    }
};

Rule1D gauss_legendre(int n);
Rule1D trapezoidal(int n);
Rule1D gauss_laguerre(int n);

// Process-wide caches; returned references stay valid for the program lifetime.
const Rule1D& cached_gauss_legendre(int n);
const Rule1D& cached_gauss_laguerre(int n);

/// Tensor grid: Gauss-Legendre in t, trapezoidal in phi.
struct QuadratureGrid {
    int n_t = 0;
    int n_phi = 0;
    Rule1D t_rule;
    Rule1D phi_rule;

    QuadratureGrid() = default;
    QuadratureGrid(int nt, int nphi);

    std::size_t size() const { return static_cast<std::size_t>(n_t) * n_phi; }
};

namespace detail {
inline bool is_finite(double v) { return std::isfinite(v); }
inline bool is_finite(std::complex<double> v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }
} // namespace detail

/// sum_l sum_k f(t_k, phi_l) w_l^TZ w_k^GL. Throws EvaluationError on the
/// first non-finite integrand value.
template <class F>
auto tensor_apply(const QuadratureGrid& grid, F&& f)
{
    using R = std::decay_t<decltype(f(0.0, 0.0))>;
    R sum{};
    for (int l = 0; l < grid.n_phi; ++l) {
        const double phi = grid.phi_rule.nodes[l];
        R inner{};
        for (int k = 0; k < grid.n_t; ++k) {
            const double t = grid.t_rule.nodes[k];
            const R v = f(t, phi);
            if (!detail::is_finite(v)) {
                std::ostringstream os;
                os << "non-finite integrand at node (k=" << k << ", l=" << l << ", t=" << t
                   << ", phi=" << phi << ")";
                throw EvaluationError(os.str());
            }
            inner += grid.t_rule.weights[k] * v;
        }
        sum += grid.phi_rule.weights[l] * inner;
    }
    return sum;
}

} // namespace layerr::quad
