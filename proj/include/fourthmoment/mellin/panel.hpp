#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <string>

#include "fourthmoment/core/errors.hpp"
#include "fourthmoment/core/quadrature.hpp"

namespace fourthmoment {

using Complex = std::complex<double>;

/// Panel layout for modified Mellin integrals int_a^b f(x) x^{-s} dx, taken
/// in u = log x where the kernel is e^{(1-s)u}. Each panel gets 8-point
/// Gauss-Legendre.
struct PanelRule {
    /// A panel spans at most pi / (4 max(1, |t| + extra_frequency)) in u.
    double extra_frequency = 0.0;
    /// Cap on a panel's length in x, for integrands oscillating on unit scale
    /// in x (|zeta|^4 sampled on a grid).
    double max_dx = 0.125;
    /// Cap on a panel's length in u.
    double max_du = std::numeric_limits<double>::infinity();
    /// Every length cap is divided by this (convergence studies use 2).
    double refine = 1.0;
    /// Oscillation budget: refuse layouts needing more panels than this.
    double max_panels = 2e7;

    static PanelRule smooth() {
        PanelRule r;
        r.max_dx = std::numeric_limits<double>::infinity();
        r.max_du = 0.05;
        return r;
    }
    PanelRule refined(double factor) const {
        PanelRule r = *this;
        r.refine *= factor;
        return r;
    }
    PanelRule with_frequency(double f) const {
        PanelRule r = *this;
        r.extra_frequency = f;
        return r;
    }
};

/// int_a^b f(x) x^{-s} dx for real-valued f. Values for t < 0 are the
/// conjugates of those for |t|, so the result is exactly conjugate-symmetric.
template <class F>
Complex mellin_integral(F&& f, double a, double b, Complex s, const PanelRule& rule = {}) {
    if (!(a > 0.0)) throw DomainError("mellin_integral requires a > 0");
    if (!(b > a)) return Complex{};
    const double sigma = s.real();
    const double t = std::abs(s.imag());
    const double ua = std::log(a), ub = std::log(b);
    const double du_osc = std::numbers::pi / (4.0 * std::max(1.0, t + rule.extra_frequency)) / rule.refine;
    const double du_cap = std::min(du_osc, rule.max_du / rule.refine);
    const double dx_cap = rule.max_dx / rule.refine;
    const double estimate = (ub - ua) / du_cap + (std::isfinite(dx_cap) ? (b - a) / dx_cap : 0.0);
    if (estimate > rule.max_panels)
        throw BudgetError("oscillation budget exceeded: about " + std::to_string(static_cast<long long>(estimate)) +
                          " panels needed (|t| log X too large)");
    const auto& gl = GaussLegendre<8>::get();
    Complex total{};
    double u = ua;
    while (u < ub) {
        double len = du_cap;
        if (std::isfinite(dx_cap)) len = std::min(len, std::log1p(dx_cap / std::exp(u)));
        len = std::min(len, ub - u);
        const double half = 0.5 * len, mid = u + half;
        Complex part{};
        for (std::size_t k = 0; k < 8; ++k) {
            const double uk = mid + half * gl.nodes[k];
            const double x = std::exp(uk);
            const double mag = f(x) * std::exp((1.0 - sigma) * uk);
            part += gl.weights[k] * Complex(mag * std::cos(t * uk), -mag * std::sin(t * uk));
        }
        total += half * part;
        u += len;
    }
    return s.imag() < 0.0 ? std::conj(total) : total;
}

/// Same, split at interior breakpoints (jumps of a piecewise integrand).
template <class F>
Complex mellin_integral(F&& f, std::span<const double> breaks, Complex s, const PanelRule& rule = {}) {
    Complex total{};
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) total += mellin_integral(f, breaks[i], breaks[i + 1], s, rule);
    return total;
}

}  // namespace fourthmoment
