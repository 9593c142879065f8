#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "fourthmoment/core/errors.hpp"
#include "fourthmoment/mellin/bump.hpp"
#include "fourthmoment/mellin/panel.hpp"
#include "fourthmoment/moment/fourth_moment.hpp"
#include "fourthmoment/zeta/grid.hpp"

namespace fourthmoment {

/// A truncated modified Mellin transform value at s = sigma + it.
struct MellinPoint {
    double sigma = 0.0;
    double t = 0.0;
    Complex value;
    double X = 1.0;
    double tail_est = 0.0;     ///< estimated modulus of int_X^infinity
    bool tail_bounded = true;  ///< false when sigma <= 1: the tail diverges and tail_est is only a scale
};

/// int_1^X |zeta(1/2+ix)|^4 x^{-s} dx.
inline MellinPoint z2_truncated(const ZetaGrid& grid, Complex s, double X, const PanelRule& rule = {}) {
    if (!(s.real() > 0.0)) throw DomainError("z2_truncated requires sigma > 0");
    if (!(X >= 1.0)) throw DomainError("z2_truncated requires X >= 1");
    grid.require_coverage(1.0, X, "z2_truncated");
    MellinPoint p{s.real(), s.imag(), {}, X, 0.0, s.real() > 1.0};
    p.value = mellin_integral([&grid](double x) { return grid.abs4_at(x); }, 1.0, X, s, rule);
    // tail scale: mean of |zeta|^4 over the last stretch before X
    const double lo = std::max(1.0, X - 20.0);
    const double window_mean = X > lo ? fourth_moment_between(grid, lo, X) / (X - lo) : grid.abs4_at(X);
    const double sigma = s.real();
    if (sigma > 1.0) {
        const double logX = std::max(1.0, std::log(X));
        p.tail_est = window_mean * std::pow(X, 1.0 - sigma) / (sigma - 1.0) * (1.0 + 4.0 / ((sigma - 1.0) * logX));
    } else {
        p.tail_est = window_mean * std::pow(X, 1.0 - sigma);
    }
    return p;
}

/// Windowed transform int phi(x) |zeta(1/2+ix)|^4 x^{-s} dx over the bump's support.
inline Complex f_k(const ZetaGrid& grid, Complex s, const SmoothBump& bump, const PanelRule& rule = {}) {
    grid.require_coverage(bump.support_lo(), bump.support_hi(), "f_k");
    PanelRule r = rule;
    r.max_du = std::min(r.max_du, 0.05);
    return mellin_integral([&](double x) { return bump(x) * grid.abs4_at(x); }, bump.support_lo(), bump.support_hi(), s, r);
}

struct WindowDecay {
    double modulus = 0.0;         ///< |int phi(x) x^{w-s-1} dx| by direct quadrature
    double by_parts_bound = 0.0;  ///< bound after r integrations by parts
};

/// |int phi(x) x^{w-s-1} dx| for w = d + iv. The companion bound uses
/// int phi x^{w-s-1} = (-1)^r int phi^{(r)} x^{w-s+r-1} / ((w-s)...(w-s+r-1))
/// with |phi^{(r)}| <= c_r K^{-r}.
inline WindowDecay window_decay(const SmoothBump& bump, Complex w, Complex s, int r) {
    if (r < 0 || r > 4) throw DomainError("window_decay supports 0 <= r <= 4");
    const Complex shift = w - s;
    const Complex kernel = 1.0 - shift;  // x^{w-s-1} = x^{-kernel}
    WindowDecay out;
    out.modulus = std::abs(mellin_integral(bump, bump.support_lo(), bump.support_hi(), kernel, PanelRule::smooth()));
    const double lo = bump.support_lo(), hi = bump.support_hi();
    const double p = shift.real() + r;  // int x^{p-1} dx over the support
    const double span = std::abs(p) < 1e-12 ? std::log(hi / lo) : (std::pow(hi, p) - std::pow(lo, p)) / p;
    double denom = 1.0;
    for (int k = 0; k < r; ++k) denom *= std::abs(shift + static_cast<double>(k));
    out.by_parts_bound = denom > 0.0 ? bump.derivative_constant(r) * std::pow(bump.K(), -r) * span / denom
                                     : std::numeric_limits<double>::infinity();
    return out;
}

// ---- K(s) and k(s) ---------------------------------------------------------------

/// Sign of the s-integral term in the integration-by-parts form of K(s):
/// K = -E2(1)^2/2 + E2(X)^2 X^{-s}/2 + sign * (s/2) int_1^X E2^2 x^{-s-1} dx.
/// Integration by parts of (|zeta|^4 - Q4) E2 x^{-s} = (E2^2/2)' x^{-s} gives +1,
/// and the dual-definition residual confirms it numerically.
inline constexpr double kIbpSign = +1.0;

/// int_1^X (|zeta(1/2+ix)|^4 - Q_4(log x)) E_2(x) x^{-s} dx.
inline Complex k_direct(const ZetaGrid& grid, const ErrorTermSeries& series, const MomentPolynomial& poly, Complex s, double X,
                        const PanelRule& rule = {}) {
    if (!(X >= 1.0)) throw DomainError("k_direct requires X >= 1");
    grid.require_coverage(1.0, X, "k_direct");
    series.require_coverage(1.0, X, "k_direct");
    const auto e2s = series.require_uniform("k_direct");
    return mellin_integral(
        [&](double x) { return (grid.abs4_at(x) - q4_eval(poly, std::log(x))) * e2s.interpolate(x); }, 1.0, X, s, rule);
}

/// k(s) truncated: int_1^X E_2(x)^2 x^{-s-1} dx.
inline Complex k_lower(const ErrorTermSeries& series, Complex s, double X, const PanelRule& rule = {}) {
    if (!(X >= 1.0)) throw DomainError("k_lower requires X >= 1");
    series.require_coverage(1.0, X, "k_lower");
    const auto e2s = series.require_uniform("k_lower");
    return mellin_integral(
        [&](double x) {
            const double e = e2s.interpolate(x);
            return e * e / x;
        },
        1.0, X, s, rule);
}

struct KDual {
    Complex value;     ///< right-hand side including the finite-X boundary term
    Complex boundary;  ///< E2(X)^2 X^{-s} / 2
    Complex k;         ///< truncated k(s)
    double e2_at_1 = 0.0;
};

/// K(s) truncated at X through E_2^2: -E2(1)^2/2 + E2(X)^2 X^{-s}/2 + sign (s/2) k_X(s).
inline KDual k_via_e2sq(const ErrorTermSeries& series, Complex s, double X, double sign = kIbpSign, const PanelRule& rule = {}) {
    const auto e2s = series.require_uniform("k_via_e2sq");
    KDual out;
    out.k = k_lower(series, s, X, rule);
    out.e2_at_1 = e2s.interpolate(1.0);
    const double eX = e2s.interpolate(X);
    out.boundary = 0.5 * eX * eX * std::exp(-s * std::log(X));
    out.value = -0.5 * out.e2_at_1 * out.e2_at_1 + out.boundary + sign * 0.5 * s * out.k;
    return out;
}

/// Residual of k(s) = (2/s)(K(s) + E2(1)^2/2) at finite X, where the boundary
/// term enters: s k_X / 2 - (K_X + E2(1)^2/2 - E2(X)^2 X^{-s}/2).
inline Complex k_relation_residual(Complex K_direct, const KDual& dual, Complex s) {
    return 0.5 * s * dual.k - (K_direct + 0.5 * dual.e2_at_1 * dual.e2_at_1 - dual.boundary);
}

}  // namespace fourthmoment
