#include "layerr/quadrature.hpp"

#include <cassert>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace layerr::quad {

namespace {

void require_positive(int n, const char* what)
{
    if (n < 1) throw std::invalid_argument(std::string(what) + ": n must be >= 1");
}

// P_n(z) and P_n'(z) by the three-term recurrence.
std::pair<double, double> legendre(int n, double z)
{
    double p1 = 1.0, p2 = 0.0;
    for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
    }
    const double dp = n * (z * p1 - p2) / (z * z - 1.0);
    return {p1, dp};
}

template <class Build>
const Rule1D& cached(std::map<int, std::unique_ptr<Rule1D>>& cache, std::mutex& mu, int n, Build build)
{
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Rule1D>(build(n));
    return *slot;
}

} // namespace

Rule1D gauss_legendre(int n)
{
    require_positive(n, "gauss_legendre");
    Rule1D rule{RuleKind::GaussLegendre, n, std::vector<double>(n), std::vector<double>(n)};
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-angle initial guess for the i-th largest root.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            auto [p, d] = legendre(n, z);
            dp = d;
            const double dz = p / d;
            z -= dz;
            if (std::abs(dz) <= 1e-15) break;
        }
        dp = legendre(n, z).second;
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[n - 1 - i] = z;
        rule.nodes[i] = -z;
        rule.weights[n - 1 - i] = w;
        rule.weights[i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

Rule1D trapezoidal(int n)
{
    require_positive(n, "trapezoidal");
    Rule1D rule{RuleKind::Trapezoidal, n, std::vector<double>(n), std::vector<double>(n, 2.0 * std::numbers::pi / n)};
    for (int l = 0; l < n; ++l) rule.nodes[l] = 2.0 * std::numbers::pi * l / n;
    return rule;
}

Rule1D gauss_laguerre(int n)
{
    require_positive(n, "gauss_laguerre");
    Rule1D rule{RuleKind::GaussLaguerre, n, std::vector<double>(n), std::vector<double>(n)};
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        // Standard asymptotic initial guesses (alpha = 0).
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * n);
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * n);
        } else {
            const double ai = i - 1;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - rule.nodes[i - 2]);
        }
        double p1 = 0.0, p2 = 0.0, pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            p1 = 1.0;
            p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0 - z) * p2 - (j - 1.0) * p3) / j;
            }
            pp = (n * p1 - n * p2) / z;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) <= 1e-15 * std::max(1.0, z)) break;
        }
        // Refresh p2 and pp at the converged node.
        p1 = 1.0;
        p2 = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double p3 = p2;
            p2 = p1;
            p1 = ((2.0 * j - 1.0 - z) * p2 - (j - 1.0) * p3) / j;
        }
        pp = (n * p1 - n * p2) / z;
        rule.nodes[i] = z;
        rule.weights[i] = -1.0 / (pp * n * p2);
    }
    return rule;
}

const Rule1D& cached_gauss_legendre(int n)
{
    static std::map<int, std::unique_ptr<Rule1D>> cache;
    static std::mutex mu;
    return cached(cache, mu, n, gauss_legendre);
}

const Rule1D& cached_gauss_laguerre(int n)
{
    static std::map<int, std::unique_ptr<Rule1D>> cache;
    static std::mutex mu;
    return cached(cache, mu, n, gauss_laguerre);
}

QuadratureGrid::QuadratureGrid(int nt, int nphi)
    : n_t(nt), n_phi(nphi), t_rule(cached_gauss_legendre(nt)), phi_rule(trapezoidal(nphi))
{
}

} // namespace layerr::quad
