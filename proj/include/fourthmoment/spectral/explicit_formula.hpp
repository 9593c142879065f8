#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "fourthmoment/core/errors.hpp"
#include "fourthmoment/mellin/panel.hpp"
#include "fourthmoment/mellin/smoothed.hpp"
#include "fourthmoment/spectral/data.hpp"

namespace fourthmoment {

inline constexpr double kSpectralThreshold = 1e-16;

struct SpectralSum {
    double value = 0.0;
    double kappa_cut = 0.0;  ///< terms beyond have Gaussian factor below the threshold
    std::size_t terms = 0;
    bool complete = false;  ///< false when the data stop before kappa_cut
};

/// kappa where exp(-(t^{xi-1} kappa)^2 / 4) falls to the threshold.
inline double spectral_cutoff(double t, double xi, double threshold = kSpectralThreshold) {
    return 2.0 * std::pow(t, 1.0 - xi) * std::sqrt(std::log(1.0 / threshold));
}

/// One term of the spectral sum without the pi / sqrt(2t) prefactor.
inline double spectral_term(double t, double xi, const SpectralDatum& d) {
    const double g = std::pow(t, xi - 1.0) * d.kappa;
    return d.alpha_h3 / std::sqrt(d.kappa) * std::sin(d.kappa * std::log(d.kappa / (4.0 * std::numbers::e * t))) *
           std::exp(-0.25 * g * g);
}

/// pi/sqrt(2t) sum_j alpha_j H_j^3 kappa_j^{-1/2} sin(kappa_j log(kappa_j/(4et))) exp(-(t^{xi-1} kappa_j)^2/4)
/// over kappa_j <= kappa_cut.
inline SpectralSum spectral_sum_I(double t, double xi, const SpectralData& data, double threshold = kSpectralThreshold) {
    if (!(xi >= 0.5 && xi < 1.0)) throw DomainError("spectral_sum_I requires 1/2 <= xi < 1");
    if (!(t > 0.0)) throw DomainError("spectral_sum_I requires t > 0");
    if (!(threshold > 0.0 && threshold < 1.0)) throw DomainError("spectral threshold must lie in (0, 1)");
    SpectralSum out;
    out.kappa_cut = spectral_cutoff(t, xi, threshold);
    out.complete = data.max_kappa() >= out.kappa_cut;
    double acc = 0.0;
    for (const auto& d : data) {
        if (d.kappa > out.kappa_cut) break;
        acc += spectral_term(t, xi, d);
        ++out.terms;
    }
    out.value = std::numbers::pi / std::sqrt(2.0 * t) * acc;
    return out;
}

struct ExplicitFormulaComparison {
    double direct = 0.0;    ///< Gaussian-smoothed moment from the grid
    double spectral = 0.0;  ///< truncated spectral sum
    double diff = 0.0;      ///< direct - spectral
    bool complete = false;
};

/// Compares the smoothed moment with any spectral-side evaluator g(t, xi).
template <class Spectral>
ExplicitFormulaComparison compare_explicit_formula_with(const ZetaGrid& grid, double t, double xi, Spectral&& spectral) {
    ExplicitFormulaComparison c;
    c.direct = smoothed_moment(grid, t, xi).value;
    c.spectral = spectral(t, xi);
    c.diff = c.direct - c.spectral;
    c.complete = true;
    return c;
}

inline ExplicitFormulaComparison compare_explicit_formula(const ZetaGrid& grid, double t, double xi, const SpectralData& data) {
    SpectralSum s;
    auto c = compare_explicit_formula_with(grid, t, xi, [&](double tt, double x) {
        s = spectral_sum_I(tt, x, data);
        return s.value;
    });
    c.complete = s.complete;
    return c;
}

struct JPoint {
    Complex value;
    double x_max = 0.0;
    bool regular_region = true;  ///< sigma > 2 - 3 xi / 2
    bool complete = true;        ///< spectral data reached kappa_cut at every abscissa
};

/// int_1^{x_max} I(x; xi) x^{-s} dx with the spectral sum as integrand.
/// Always a truncated value; outside the regular region it is still computed.
inline JPoint j_transform(Complex s, double xi, const SpectralData& data, double x_max, const PanelRule& rule = PanelRule::smooth()) {
    if (!(x_max >= 1.0 && std::isfinite(x_max))) throw DomainError("j_transform requires a finite x_max >= 1");
    JPoint p;
    p.x_max = x_max;
    p.regular_region = s.real() > 2.0 - 1.5 * xi;
    if (data.empty()) return p;
    // the sine contributes frequency kappa in u = log x
    const double top = std::min(data.max_kappa(), spectral_cutoff(x_max, xi));
    p.complete = data.max_kappa() >= spectral_cutoff(x_max, xi);
    p.value = mellin_integral([&](double x) { return spectral_sum_I(x, xi, data).value; }, 1.0, x_max, s,
                              rule.with_frequency(rule.extra_frequency + top));
    return p;
}

}  // namespace fourthmoment
