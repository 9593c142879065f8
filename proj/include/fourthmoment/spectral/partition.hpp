#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "fourthmoment/core/errors.hpp"
#include "fourthmoment/core/finite_difference.hpp"
#include "fourthmoment/mellin/bump.hpp"
#include "fourthmoment/mellin/panel.hpp"
#include "fourthmoment/spectral/data.hpp"
#include "fourthmoment/spectral/explicit_formula.hpp"

namespace fourthmoment {

/// One piece rho_j: rises on [rise_lo, rise_hi], equals 1 up to fall_lo,
/// falls to 0 on [fall_lo, fall_hi]. The first piece has no rise.
struct PartitionPiece {
    double rise_lo = 0.0, rise_hi = 0.0;
    double fall_lo = 0.0, fall_hi = 0.0;
    bool rises = true;

    double support_lo() const noexcept { return rises ? rise_lo : 1.0; }
    double support_hi() const noexcept { return fall_hi; }

    double operator()(double x) const {
        if (x < support_lo() || x >= fall_hi) return 0.0;
        if (rises && x < rise_hi) return 1.0 - smooth_step((rise_hi - x) / (rise_hi - rise_lo));
        if (x <= fall_lo) return 1.0;
        return smooth_step((fall_hi - x) / (fall_hi - fall_lo));
    }
};

/// Smooth dyadic partition of unity on [1, 2^J X]. rho_1 is 1 on [1, X]
/// and falls on [X, 2X]; rho_2 rises on [X, 2X], is 1 on [2X, 4X], falls
/// on [4X, 6X]; rho_j (j >= 3) rises where rho_{j-1} falls, i.e. on
/// [2^{j-1} X, 3 2^{j-2} X], is 1 up to 2^j X and falls on
/// [2^j X, 3 2^{j-1} X]. Each rise is 1 - (the matching fall), so the sum
/// is exactly 1 away from the last fall.
class DyadicPartition {
   public:
    DyadicPartition(double X, int J) : X_(X) {
        if (!(X >= 1.0)) throw DomainError("build_partition requires X >= 1");
        if (J < 2) throw DomainError("build_partition requires J >= 2");
        pieces_.push_back({X, X, X, 2.0 * X, false});
        double prev_lo = X, prev_hi = 2.0 * X;
        for (int j = 2; j <= J; ++j) {
            const double p = std::ldexp(X, j);  // 2^j X
            PartitionPiece r{prev_lo, prev_hi, p, 1.5 * p, true};
            pieces_.push_back(r);
            prev_lo = r.fall_lo;
            prev_hi = r.fall_hi;
        }
    }

    double X() const noexcept { return X_; }
    int J() const noexcept { return static_cast<int>(pieces_.size()); }
    const std::vector<PartitionPiece>& pieces() const noexcept { return pieces_; }
    /// rho_j with 1-based j.
    const PartitionPiece& piece(int j) const { return pieces_.at(static_cast<std::size_t>(j - 1)); }
    /// Upper end of the range where the pieces sum to one.
    double unity_hi() const noexcept { return pieces_.back().fall_lo; }

    double operator()(int j, double x) const { return piece(j)(x); }

    double sum(double x) const {
        double s = 0.0;
        for (const auto& p : pieces_) s += p(x);
        return s;
    }

    /// c_r with max |rho_j^{(r)}| = c_r (2^j X)^{-r}, by finite differences
    /// across both ramps of piece j.
    double derivative_constant(int j, int r, std::size_t samples = 4000) const {
        const auto& p = piece(j);
        const double scale = std::ldexp(X_, j);
        const double h = 1e-3 * (p.fall_hi - p.fall_lo);
        const auto f = [&p](double x) { return p(x); };
        double m = max_abs_derivative(f, p.fall_lo, p.fall_hi, r, h, samples);
        if (p.rises) m = std::max(m, max_abs_derivative(f, p.rise_lo, p.rise_hi, r, std::min(h, 1e-3 * (p.rise_hi - p.rise_lo)), samples));
        return m * std::pow(scale, r);
    }

   private:
    double X_;
    std::vector<PartitionPiece> pieces_;
};

inline DyadicPartition build_partition(double X, int J) { return DyadicPartition(X, J); }

/// The paper-style choice X = t^{1/(1-xi) - delta}.
inline double partition_scale(double t, double xi, double delta = 0.05) { return std::pow(t, 1.0 / (1.0 - xi) - delta); }

/// kappa_j <= K^{1-xi} log K carries the '+' branch up to a negligible error.
inline double kappa_truncation(double K, double xi) { return std::pow(K, 1.0 - xi) * std::log(K); }

struct JBranch {
    Complex value;
    double kappa_limit = 0.0;
    std::size_t terms = 0;
};

/// '+' exponential branch for piece rho (K = 2^j X):
/// sum_j alpha_j H_j^3 kappa^{-1/2} e^{i kappa log(kappa/4e)} int_{K/2}^{3K} rho(x) x^{-1/2-i kappa-s} exp(-(x^{xi-1} kappa)^2/4) dx,
/// truncated at kappa_truncation(K, xi).
inline JBranch j_plus_branch(const PartitionPiece& rho, double K, Complex s, double xi, const SpectralData& data) {
    if (!(K > 1.0)) throw DomainError("j_plus_branch requires K > 1");
    JBranch out;
    out.kappa_limit = kappa_truncation(K, xi);
    const double lo = std::max(0.5 * K, rho.support_lo()), hi = std::min(3.0 * K, rho.support_hi());
    for (const auto& d : data) {
        if (d.kappa > out.kappa_limit) break;
        const double kap = d.kappa;
        const auto inner = mellin_integral(
            [&](double x) {
                const double g = std::pow(x, xi - 1.0) * kap;
                return rho(x) * std::exp(-0.25 * g * g) / std::sqrt(x);
            },
            lo, hi, s + Complex(0.0, kap), PanelRule::smooth());
        out.value += d.alpha_h3 / std::sqrt(kap) * std::polar(1.0, kap * std::log(kap / (4.0 * std::numbers::e))) * inner;
        ++out.terms;
    }
    return out;
}

// ---- short-interval and partial sums ------------------------------------------------

/// Sum of alpha_j H_j^3 over K - G <= kappa_j <= K + G.
inline double short_interval_sum(double K, double G, const SpectralData& data) {
    const auto [a, b] = data.window(K - G, K + G);
    double s = 0.0;
    for (std::size_t i = a; i < b; ++i) s += data.records()[i].alpha_h3;
    return s;
}

struct ShortIntervalRow {
    double K, G, sum, ratio;  ///< ratio = sum / (G K)
};

inline std::vector<ShortIntervalRow> short_interval_scan(const SpectralData& data, const std::vector<double>& K_values, double G) {
    std::vector<ShortIntervalRow> rows;
    for (double K : K_values) {
        const double s = short_interval_sum(K, G, data);
        rows.push_back({K, G, s, s / (G * K)});
    }
    return rows;
}

struct PartialSumRow {
    double T = 0.0;
    double S = 0.0;
    double over_T2 = 0.0;
    double over_T2_log[3] = {0.0, 0.0, 0.0};  ///< S / (T^2 log^C T), C = 1, 2, 3; NaN for T <= 1
};

/// S(T) = sum over kappa_j <= T, with the growth ratios at each T.
inline std::vector<PartialSumRow> partial_sum_scan(const SpectralData& data, const std::vector<double>& T_list) {
    for (std::size_t i = 1; i < T_list.size(); ++i)
        if (!(T_list[i] > T_list[i - 1])) throw DomainError("partial_sum_scan needs increasing T values");
    std::vector<PartialSumRow> rows;
    std::size_t k = 0;
    double S = 0.0;
    for (double T : T_list) {
        while (k < data.size() && data.records()[k].kappa <= T) S += data.records()[k++].alpha_h3;
        PartialSumRow r;
        r.T = T;
        r.S = S;
        r.over_T2 = S / (T * T);
        const double L = std::log(T);
        for (int c = 0; c < 3; ++c) r.over_T2_log[c] = T > 1.0 ? r.over_T2 / std::pow(L, c + 1) : std::nan("");
        rows.push_back(r);
    }
    return rows;
}

}  // namespace fourthmoment
