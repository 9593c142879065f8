#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "fourthmoment/core/errors.hpp"
#include "fourthmoment/core/finite_difference.hpp"
#include "fourthmoment/core/quadrature.hpp"

namespace fourthmoment {

namespace detail {

inline double mollifier(double v) { return (v <= -1.0 || v >= 1.0) ? 0.0 : std::exp(-1.0 / (1.0 - v * v)); }

inline double mollifier_mass() {
    static const double mass = 2.0 * gl_integrate(mollifier, -1.0, 0.0, 1.0 / 128.0);
    return mass;
}

// int_{-1}^{v} mollifier / mass for v <= 0, on a fixed 48-panel rule so the
// result is a smooth function of v.
inline double mollifier_cdf_left(double v) {
    if (v <= -1.0) return 0.0;
    return gl_integrate(mollifier, -1.0, v, (v + 1.0) / 47.5) / mollifier_mass();
}

}  // namespace detail

/// C-infinity step: 0 for u <= 0, 1 for u >= 1, the normalised integral of
/// exp(-1/(1-v^2)) in between. smooth_step(u) + smooth_step(1-u) == 1.
inline double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double v = 2.0 * u - 1.0;
    return v <= 0.0 ? detail::mollifier_cdf_left(v) : 1.0 - detail::mollifier_cdf_left(-v);
}

/// d/du smooth_step(u).
inline double smooth_step_slope(double u) { return 2.0 * detail::mollifier(2.0 * u - 1.0) / detail::mollifier_mass(); }

/// Window phi for dyadic pieces [K/2, 5K'/2]: rises on [K/2, K], equals 1 on
/// [K, 2K'], falls on [2K', 5K'/2].
class SmoothBump {
   public:
    SmoothBump(double K, double K_prime) : K_(K), Kp_(K_prime) {
        if (!(K > 0.0 && K_prime > K && K_prime <= 2.0 * K)) throw DomainError("make_bump requires K < K' <= 2K");
    }

    double K() const noexcept { return K_; }
    double K_prime() const noexcept { return Kp_; }
    double support_lo() const noexcept { return 0.5 * K_; }
    double support_hi() const noexcept { return 2.5 * Kp_; }
    double plateau_lo() const noexcept { return K_; }
    double plateau_hi() const noexcept { return 2.0 * Kp_; }

    double operator()(double x) const {
        if (x <= support_lo() || x >= support_hi()) return 0.0;
        if (x < K_) return smooth_step((x - support_lo()) / (0.5 * K_));
        if (x <= plateau_hi()) return 1.0;
        return smooth_step((support_hi() - x) / (0.5 * Kp_));
    }

    /// c_r = K^r max |phi^{(r)}| by finite differences over both ramps.
    double derivative_constant(int r, std::size_t samples = 4000) const {
        if (r == 0) return 1.0;
        const double h = 0.004 * K_;
        const auto phi = [this](double x) { return (*this)(x); };
        const double up = max_abs_derivative(phi, support_lo(), plateau_lo(), r, h, samples);
        const double down = max_abs_derivative(phi, plateau_hi(), support_hi(), r, h, samples);
        return std::max(up, down) * std::pow(K_, r);
    }

   private:
    double K_, Kp_;
};

inline SmoothBump make_bump(double K, double K_prime) { return SmoothBump(K, K_prime); }

}  // namespace fourthmoment
