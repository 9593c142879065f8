#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fourthmoment/core/csv.hpp"
#include "fourthmoment/core/errors.hpp"
#include "fourthmoment/core/parallel.hpp"
#include "fourthmoment/core/quadrature.hpp"
#include "fourthmoment/mellin/panel.hpp"

namespace fourthmoment {

/// int_1^T |F(sigma+it)|^2 dt at each T of a list.
struct ScanSeries {
    std::string quantity;
    double sigma = 0.0;
    std::vector<double> T_values;
    std::vector<double> values;

    void validate() const {
        if (T_values.size() != values.size()) throw DomainError("ScanSeries: length mismatch");
        for (std::size_t i = 1; i < T_values.size(); ++i)
            if (!(T_values[i] > T_values[i - 1])) throw DomainError("ScanSeries: T values must increase");
        for (double v : values)
            if (!(v >= 0.0)) throw DomainError("ScanSeries: values must be nonnegative");
    }
};

inline constexpr double kScanStep = 0.05;

/// Mean-square scan of a pointwise evaluator t -> F(sigma + it). The
/// integrand is sampled once on 1 + k h (h <= step, dividing [1, T_max]
/// evenly) and every T reads the same cumulative Simpson table, so nested
/// ranges share their samples. T values off the lattice use the panel's
/// interpolating quadratic.
template <class Evaluator>
ScanSeries meansq_scan(const std::string& quantity, Evaluator&& evaluate, double sigma, const std::vector<double>& T_list,
                       double step = kScanStep, Parallelism par = {}) {
    if (T_list.empty()) throw DomainError("meansq_scan needs at least one T");
    for (std::size_t i = 0; i < T_list.size(); ++i) {
        if (!(T_list[i] > 1.0)) throw DomainError("meansq_scan needs T > 1");
        if (i && !(T_list[i] > T_list[i - 1])) throw DomainError("meansq_scan needs increasing T values");
    }
    if (!(step > 0.0)) throw DomainError("meansq_scan needs step > 0");
    const double T_max = T_list.back();
    auto n = static_cast<std::size_t>(std::ceil((T_max - 1.0) / step - 1e-9));
    n = std::max<std::size_t>(n + (n % 2), 2);
    const double h = (T_max - 1.0) / static_cast<double>(n);
    std::vector<double> power(n + 1);
    parallel_for(n + 1, par, [&](std::size_t i) {
        const double t = i == n ? T_max : 1.0 + h * static_cast<double>(i);
        power[i] = std::norm(static_cast<Complex>(evaluate(Complex(sigma, t))));
    });
    const CumulativeIntegral cum(UniformSamples(1.0, h, std::move(power)));
    ScanSeries out{quantity, sigma, T_list, {}};
    for (double T : T_list) out.values.push_back(std::max(0.0, cum.from_start(std::min(T, cum.samples().x_last()))));
    return out;
}

struct ExponentFit {
    std::string quantity;
    double sigma = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double theoretical = 0.0;
};

/// OLS of log(value) on log(T).
inline ExponentFit fit_exponent(const ScanSeries& series, double theoretical) {
    series.validate();
    const std::size_t n = series.values.size();
    if (n < 4) throw DomainError("fit_exponent needs at least four points");
    for (double v : series.values)
        if (!(v > 0.0)) throw Error(ErrorKind::numerical, "fit_exponent: degenerate series (value <= 0)");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(series.T_values[i]);
        my += std::log(series.values[i]);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(series.T_values[i]) - mx, dy = std::log(series.values[i]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    ExponentFit f;
    f.quantity = series.quantity;
    f.sigma = series.sigma;
    f.theoretical = theoretical;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::log(series.values[i]) - (f.intercept + f.slope * std::log(series.T_values[i]));
        ss_res += r * r;
    }
    f.r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return f;
}

/// Mean-square growth exponent for Z_2: (15 - 12 sigma)/5 on [5/6, 5/4];
/// beyond 5/4 the mean square stays bounded (exponent 0).
inline double z2_theoretical_exponent(double sigma) {
    if (sigma < 5.0 / 6.0) throw DomainError("no Z_2 mean-square exponent below sigma = 5/6");
    return std::max(0.0, (15.0 - 12.0 * sigma) / 5.0);
}

/// Mean-square growth exponent for K: (13 - 6 sigma)/3 on [7/6, 13/6];
/// elsewhere the whole-range bounds (33 - 18 sigma)/5 for 1 < sigma <= 3/2
/// and 1 for sigma > 3/2.
inline double k_theoretical_exponent(double sigma) {
    if (!(sigma > 1.0)) throw DomainError("no K mean-square exponent for sigma <= 1");
    if (sigma >= 7.0 / 6.0 && sigma <= 13.0 / 6.0) return (13.0 - 6.0 * sigma) / 3.0;
    return sigma <= 1.5 ? (33.0 - 18.0 * sigma) / 5.0 : 1.0;
}

/// Soft regression guard: a fitted slope well above the theorem exponent.
inline constexpr double kTripwireMargin = 0.75;
inline bool tripwire_ok(const ExponentFit& f) { return f.slope <= f.theoretical + kTripwireMargin; }

inline constexpr const char* kDeskScaleFlag = "non-asymptotic desk scale";

inline const std::vector<std::string>& fit_csv_header() {
    static const std::vector<std::string> h{"quantity", "sigma", "slope", "intercept", "r2", "theoretical"};
    return h;
}

inline const std::vector<std::string>& scan_csv_header() {
    static const std::vector<std::string> h{"quantity", "sigma", "T", "value"};
    return h;
}

struct TheoremTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Rows grouped by quantity (first-appearance order), sigma ascending within a group.
inline TheoremTable theorem_table(const std::vector<ExponentFit>& fits) {
    TheoremTable t;
    t.header = {"quantity", "sigma", "slope", "theoretical", "r2", "tripwire", "caveat"};
    std::vector<std::string> order;
    for (const auto& f : fits)
        if (std::find(order.begin(), order.end(), f.quantity) == order.end()) order.push_back(f.quantity);
    for (const auto& q : order) {
        std::vector<const ExponentFit*> group;
        for (const auto& f : fits)
            if (f.quantity == q) group.push_back(&f);
        std::stable_sort(group.begin(), group.end(), [](auto* a, auto* b) { return a->sigma < b->sigma; });
        for (const auto* f : group)
            t.rows.push_back({f->quantity, csv::num(f->sigma), csv::num(f->slope), csv::num(f->theoretical), csv::num(f->r2),
                              tripwire_ok(*f) ? "ok" : "TRIPPED", kDeskScaleFlag});
    }
    return t;
}

inline std::string theorem_table_csv(const TheoremTable& t) {
    std::string out = csv::join(t.header) + "\n";
    for (const auto& r : t.rows) out += csv::join(r) + "\n";
    return out;
}

/// Fixed-width text rendering of the table.
inline std::string theorem_table_text(const TheoremTable& t) {
    std::vector<std::size_t> w(t.header.size());
    for (std::size_t c = 0; c < w.size(); ++c) {
        w[c] = t.header[c].size();
        for (const auto& r : t.rows) w[c] = std::max(w[c], r[c].size());
    }
    auto line = [&](const std::vector<std::string>& r) {
        std::string out;
        for (std::size_t c = 0; c < r.size(); ++c) {
            out += r[c];
            if (c + 1 < r.size()) out += std::string(w[c] - r[c].size() + 2, ' ');
        }
        return out + "\n";
    };
    std::string out = line(t.header);
    std::size_t total = 0;
    for (auto x : w) total += x + 2;
    out += std::string(total - 2, '-') + "\n";
    for (const auto& r : t.rows) out += line(r);
    return out;
}

}  // namespace fourthmoment
