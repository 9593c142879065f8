#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fourthmoment/core/errors.hpp"
#include "fourthmoment/core/quadrature.hpp"
#include "fourthmoment/zeta/grid.hpp"

namespace fourthmoment {

/// Half-width of the Gaussian window in units of t^xi.
inline constexpr double kGaussianCut = 8.0;

struct SmoothedMoment {
    double value = 0.0;
    double truncation_bound = 0.0;  ///< e^{-64} times the window's largest |zeta|^4
};

/// (sqrt(pi) t^xi)^{-1} int f(t+u) exp(-(u/t^xi)^2) du over |u| <= 8 t^xi,
/// for any integrand f of the height.
template <class F>
double gaussian_smoothed(F&& f, double t, double xi) {
    if (!(xi > 0.0 && xi <= 1.0)) throw DomainError("smoothed moment requires 0 < xi <= 1");
    if (!(t > 0.0)) throw DomainError("smoothed moment requires t > 0");
    const double width = std::pow(t, xi);
    const double panel = std::min(0.125, width / 8.0);
    const double integral = gl_integrate(
        [&](double u) {
            const double v = u / width;
            return f(t + u) * std::exp(-v * v);
        },
        -kGaussianCut * width, kGaussianCut * width, panel);
    return integral / (std::sqrt(std::numbers::pi) * width);
}

/// Gaussian-smoothed fourth moment at height t with window t^xi. Heights
/// below zero are reflected, |zeta(1/2+iy)| = |zeta(1/2-iy)|.
inline SmoothedMoment smoothed_moment(const ZetaGrid& grid, double t, double xi) {
    if (!(xi > 0.0 && xi <= 1.0)) throw DomainError("smoothed moment requires 0 < xi <= 1");
    if (!(t > 0.0)) throw DomainError("smoothed moment requires t > 0");
    const double width = std::pow(t, xi);
    const double lo = t - kGaussianCut * width, hi = t + kGaussianCut * width;
    const double need_lo = lo >= 0.0 ? lo : 0.0;
    const double need_hi = std::max(hi, -lo);
    grid.require_coverage(need_lo, need_hi, "smoothed_moment");
    SmoothedMoment out;
    out.value = gaussian_smoothed([&grid](double y) { return grid.abs4_at(y); }, t, xi);
    const auto& v = grid.abs4().values();
    const auto first = static_cast<std::size_t>(std::max(0.0, std::floor((need_lo - grid.t_min()) / grid.step())));
    const auto last = std::min(v.size() - 1, static_cast<std::size_t>(std::ceil((need_hi - grid.t_min()) / grid.step())));
    const double peak = *std::max_element(v.begin() + static_cast<std::ptrdiff_t>(first), v.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    out.truncation_bound = std::exp(-kGaussianCut * kGaussianCut) * peak;
    return out;
}

}  // namespace fourthmoment
