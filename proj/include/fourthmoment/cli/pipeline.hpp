#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "fourthmoment/cli/config.hpp"
#include "fourthmoment/core/csv.hpp"
#include "fourthmoment/core/errors.hpp"
#include "fourthmoment/mellin/smoothed.hpp"
#include "fourthmoment/mellin/transforms.hpp"
#include "fourthmoment/moment/fourth_moment.hpp"
#include "fourthmoment/scaling/exponents.hpp"
#include "fourthmoment/spectral/explicit_formula.hpp"
#include "fourthmoment/spectral/partition.hpp"
#include "fourthmoment/zeta/grid.hpp"

#ifndef FOURTHMOMENT_VERSION
#define FOURTHMOMENT_VERSION "0.1.0"
#endif

namespace fourthmoment::cli {

namespace fs = std::filesystem;

inline constexpr const char* kVersion = FOURTHMOMENT_VERSION;

/// Scan quantities in the order `scan all` runs them.
inline const std::vector<std::string>& scan_quantities() {
    static const std::vector<std::string> q{"fourth-moment", "e2",        "e2-moments", "z2",       "k",     "smoothed", "explicit-formula",
                                            "spectral",      "partition", "j",          "identity-k", "meansq"};
    return q;
}

enum class GridSource { cache_hit, built, rebuilt };

/// Shared state of one invocation. Expensive inputs are produced on first use.
class Session {
   public:
    Session(RunConfig cfg, std::ostream& log) : cfg_(std::move(cfg)), log_(log) {
        validate(cfg_);
        fs::create_directories(cfg_.out);
    }

    const RunConfig& config() const noexcept { return cfg_; }
    std::ostream& log() noexcept { return log_; }
    Parallelism par() const noexcept { return {cfg_.threads}; }
    std::string path(const std::string& name) const { return (fs::path(cfg_.out) / name).string(); }

    std::string grid_path() const { return path(grid_file_name(cfg_.grid_t_min, cfg_.grid_t_max, cfg_.grid_step)); }

    /// Loads the cached grid when its provenance matches the configuration,
    /// otherwise evaluates and persists it. A cache file that fails its
    /// integrity check is an error, not a silent rebuild.
    GridSource ensure_grid() {
        if (grid_) return GridSource::cache_hit;
        const auto file = grid_path();
        GridSource source = GridSource::built;
        if (fs::exists(file)) {
            auto cached = load_grid(file);
            if (cached.t_min() == cfg_.grid_t_min && cached.t_max() == cfg_.grid_t_max && cached.step() == cfg_.grid_step &&
                cached.err_budget() == cfg_.err_budget) {
                grid_.emplace(std::move(cached));
                log_ << "grid: cache hit " << file << " (" << grid_->size() << " samples)\n";
                return GridSource::cache_hit;
            }
            source = GridSource::rebuilt;
            log_ << "grid: cached parameters differ, rebuilding " << file << "\n";
        }
        grid_.emplace(build_grid(cfg_.grid_t_min, cfg_.grid_t_max, cfg_.grid_step, cfg_.err_budget, par()));
        save_grid(*grid_, file);
        log_ << "grid: built " << file << " (" << grid_->size() << " samples)\n";
        return source;
    }

    const ZetaGrid& grid() {
        ensure_grid();
        return *grid_;
    }

    const MomentPolynomial& poly() {
        if (!poly_) {
            if (cfg_.poly == "fit") {
                const auto fit = fit_p4(grid(), cfg_.fit_T_lo, cfg_.fit_T_hi);
                poly_ = fit.poly;
                poly_note_ = "P4 source: least-squares fit on [" + csv::num(cfg_.fit_T_lo) + ", " + csv::num(cfg_.fit_T_hi) + "], " +
                             std::to_string(fit.samples) + " samples, condition " + csv::num(fit.condition);
            } else {
                poly_ = load_polynomial(cfg_.poly);
                poly_note_ = "P4 source: " + cfg_.poly;
            }
        }
        return *poly_;
    }
    const std::string& poly_note() {
        poly();
        return poly_note_;
    }

    /// E_2 at every lattice point of [1, grid end].
    const ErrorTermSeries& lattice_series() {
        if (!series_) series_ = make_error_term_series(grid(), poly(), 1.0, grid().last_t());
        return *series_;
    }

    const SpectralData& spectral() {
        if (!spectral_) spectral_ = load_spectral(cfg_.spectral);
        return *spectral_;
    }

    double z2_X() const {
        if (cfg_.z2_X == "auto") return std::pow(cfg_.meansq_T.back(), 1.2);
        return csv::parse_double(cfg_.z2_X, 0);
    }

    /// Provenance comment lines for an output file.
    std::vector<std::string> provenance(const std::string& command) const {
        std::string echo;
        for (const auto& kv : config_echo(cfg_)) echo += (echo.empty() ? "" : " ") + kv;
        return {"fourthmoment " + std::string(kVersion), "command: " + command, "config: " + echo};
    }

    /// Writes comments, header and rows; returns the path.
    std::string write_table(const std::string& name, const std::vector<std::string>& comments, const std::vector<std::string>& header,
                            const std::vector<std::vector<std::string>>& rows) {
        std::string text;
        for (const auto& c : comments) text += "# " + c + "\n";
        text += csv::join(header) + "\n";
        for (const auto& r : rows) text += csv::join(r) + "\n";
        const auto file = path(name);
        csv::write_file(file, text);
        written_.push_back(file);
        log_ << "wrote " << file << " (" << rows.size() << " rows)\n";
        return file;
    }

    void note_written(const std::string& file) { written_.push_back(file); }
    const std::vector<std::string>& written() const noexcept { return written_; }

   private:
    RunConfig cfg_;
    std::ostream& log_;
    std::optional<ZetaGrid> grid_;
    std::optional<MomentPolynomial> poly_;
    std::string poly_note_;
    std::optional<ErrorTermSeries> series_;
    std::optional<SpectralData> spectral_;
    std::vector<std::string> written_;
};

namespace detail {

inline std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

inline std::string flag(bool b) { return b ? "1" : "0"; }

inline const std::vector<std::string>& mellin_header() {
    static const std::vector<std::string> h{"sigma", "t", "re", "im", "abs", "X", "tail_est"};
    return h;
}

inline std::vector<std::string> mellin_row(double sigma, double t, Complex v, double X, double tail) {
    return {csv::num(sigma), csv::num(t), csv::num(v.real()), csv::num(v.imag()), csv::num(std::abs(v)), csv::num(X), csv::num(tail)};
}

/// Heuristic size of int_X^infinity E2' E2 x^{-s} dx after one integration by parts.
inline double k_tail_estimate(double e2_at_X, Complex s, double X) {
    return 0.5 * e2_at_X * e2_at_X * std::pow(X, -s.real()) * (1.0 + std::abs(s) / s.real());
}

/// The 20 dual-definition test points: sigma in {1.5, 2, 2.5, 3}, t in {-50, -20, 0, 20, 50}.
inline std::vector<Complex> identity_points() {
    std::vector<Complex> pts;
    for (double sigma : {1.5, 2.0, 2.5, 3.0})
        for (double t : {-50.0, -20.0, 0.0, 20.0, 50.0}) pts.emplace_back(sigma, t);
    return pts;
}

}  // namespace detail

struct IdentityRow {
    Complex s;
    Complex direct;
    KDual dual;
    double residual = 0.0;           ///< |direct - dual| / (1 + |direct|)
    double relation_residual = 0.0;  ///< k-relation residual, same scaling
};

inline std::vector<IdentityRow> k_identity_table(const ZetaGrid& grid, const ErrorTermSeries& series, const MomentPolynomial& poly,
                                                 double X, Parallelism par) {
    const auto pts = detail::identity_points();
    std::vector<IdentityRow> rows(pts.size());
    parallel_for(pts.size(), par, [&](std::size_t i) {
        auto& r = rows[i];
        r.s = pts[i];
        r.direct = k_direct(grid, series, poly, r.s, X);
        r.dual = k_via_e2sq(series, r.s, X);
        r.residual = std::abs(r.direct - r.dual.value) / (1.0 + std::abs(r.direct));
        r.relation_residual = std::abs(k_relation_residual(r.direct, r.dual, r.s)) / (1.0 + std::abs(r.direct));
    });
    return rows;
}

struct DerivativeCheck {
    std::vector<double> x;
    std::vector<double> residual;
    double max_residual = 0.0;
    double constant = 0.0;  ///< max |residual| / h^2
};

/// Centred-difference check of E2' = |zeta|^4 - Q4(log x) at n pseudo-random
/// points of [lo, hi] (fixed seed), difference step equal to the grid step.
inline DerivativeCheck derivative_identity_check(const ZetaGrid& grid, const MomentPolynomial& poly, double lo, double hi,
                                                 std::size_t n = 200, std::uint64_t seed = 20261015) {
    std::mt19937_64 rng(seed);
    DerivativeCheck out;
    const double h = grid.step();
    for (std::size_t i = 0; i < n; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double x = lo + (hi - lo) * u;
        const double r = e2_derivative_residual(grid, poly, x, h);
        out.x.push_back(x);
        out.residual.push_back(r);
        out.max_residual = std::max(out.max_residual, std::abs(r));
    }
    out.constant = out.max_residual / (h * h);
    return out;
}

// ---- scans ---------------------------------------------------------------------

inline void scan_fourth_moment(Session& ses) {
    const auto& grid = ses.grid();
    const auto& poly = ses.poly();
    std::vector<std::vector<std::string>> rows;
    for (double T : ses.config().T) {
        const double m = fourth_moment(grid, T);
        rows.push_back({csv::num(T), csv::num(m), csv::num(T * p4_eval(poly, std::log(T)))});
    }
    ses.write_table("fourth_moment.csv", detail::with(ses.provenance("scan fourth-moment"), {ses.poly_note(), polynomial_comment(poly)}),
                    {"T", "moment", "main_term"}, rows);
}

inline void scan_e2(Session& ses) {
    const auto& grid = ses.grid();
    ErrorTermSeries s;
    s.poly = ses.poly();
    for (double T : ses.config().T) {
        s.T_values.push_back(T);
        s.e2_values.push_back(e2(grid, s.poly, T));
    }
    s.validate();
    const auto file = ses.path("e2.csv");
    csv::write_file(file, error_series_to_csv(s, detail::with(ses.provenance("scan e2"), {ses.poly_note()})));
    ses.note_written(file);
    ses.log() << "wrote " << file << " (" << s.size() << " rows)\n";
}

inline void scan_e2_moments(Session& ses) {
    const auto& series = ses.lattice_series();
    const E2Moments moments(series);
    std::vector<std::vector<std::string>> rows;
    for (double T : ses.config().T) {
        const double ms = moments.mean_square(T), fp = moments.fourth_power(T);
        const double ratio = ms / (T * T);
        // empirical log-power C in int E2^2 ~ T^2 log^C T at this T
        const double log_power = std::log(ratio) / std::log(std::log(T));
        rows.push_back({csv::num(T), csv::num(ms), csv::num(fp), csv::num(ratio), csv::num(fp / std::pow(T, 10.0 / 3.0)), csv::num(log_power)});
    }
    ses.write_table("e2_moments.csv", detail::with(ses.provenance("scan e2-moments"), {ses.poly_note(), polynomial_comment(ses.poly())}),
                    {"T", "mean_square", "fourth_power", "mean_square_over_T2", "fourth_power_over_T10_3", "log_power"}, rows);
}

inline void scan_z2(Session& ses) {
    const auto& grid = ses.grid();
    const double X = ses.z2_X();
    const auto& cfg = ses.config();
    std::vector<Complex> pts;
    for (double sigma : cfg.sigma_z2)
        for (double t : cfg.transform_t) pts.emplace_back(sigma, t);
    std::vector<MellinPoint> vals(pts.size());
    parallel_for(pts.size(), ses.par(), [&](std::size_t i) { vals[i] = z2_truncated(grid, pts[i], X); });
    std::vector<std::vector<std::string>> rows;
    bool all_bounded = true;
    for (const auto& p : vals) {
        rows.push_back(detail::mellin_row(p.sigma, p.t, p.value, p.X, p.tail_est));
        all_bounded = all_bounded && p.tail_bounded;
    }
    ses.write_table("z2.csv",
                    detail::with(ses.provenance("scan z2"),
                                 {"truncated Z2 = int_1^X |zeta(1/2+ix)|^4 x^-s dx",
                                  all_bounded ? "tail_est: heuristic size of the discarded tail"
                                              : "tail_est: heuristic; rows with sigma <= 1 have a divergent tail (scale only)"}),
                    detail::mellin_header(), rows);
}

inline void scan_k(Session& ses) {
    const auto& grid = ses.grid();
    const auto& series = ses.lattice_series();
    const auto& poly = ses.poly();
    const auto& cfg = ses.config();
    const double X = cfg.k_X;
    const double e2X = series.require_uniform("scan k").interpolate(X);
    std::vector<Complex> pts;
    for (double sigma : cfg.sigma_k)
        for (double t : cfg.transform_t) pts.emplace_back(sigma, t);
    std::vector<Complex> vals(pts.size());
    parallel_for(pts.size(), ses.par(), [&](std::size_t i) { vals[i] = k_direct(grid, series, poly, pts[i], X); });
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < pts.size(); ++i)
        rows.push_back(detail::mellin_row(pts[i].real(), pts[i].imag(), vals[i], X, detail::k_tail_estimate(e2X, pts[i], X)));
    ses.write_table("k.csv",
                    detail::with(ses.provenance("scan k"), {"truncated K = int_1^X (|zeta|^4 - Q4(log x)) E2(x) x^-s dx", ses.poly_note(),
                                                            polynomial_comment(poly), "tail_est: heuristic, E2(X)^2 X^-sigma (1+|s|/sigma)/2"}),
                    detail::mellin_header(), rows);
}

inline void scan_smoothed(Session& ses) {
    const auto& grid = ses.grid();
    const auto& cfg = ses.config();
    std::vector<std::pair<double, double>> pts;
    for (double xi : cfg.xi)
        for (double t : cfg.smoothed_t) pts.emplace_back(t, xi);
    std::vector<SmoothedMoment> vals(pts.size());
    parallel_for(pts.size(), ses.par(), [&](std::size_t i) { vals[i] = smoothed_moment(grid, pts[i].first, pts[i].second); });
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < pts.size(); ++i)
        rows.push_back({csv::num(pts[i].first), csv::num(pts[i].second), csv::num(vals[i].value), csv::num(vals[i].truncation_bound)});
    ses.write_table("smoothed.csv", ses.provenance("scan smoothed"), {"t", "xi", "value", "truncation_bound"}, rows);
}

inline void scan_explicit_formula(Session& ses) {
    const auto& grid = ses.grid();
    const auto& data = ses.spectral();
    const auto& cfg = ses.config();
    std::vector<std::pair<double, double>> pts;
    for (double xi : cfg.xi)
        for (double t : cfg.smoothed_t) pts.emplace_back(t, xi);
    std::vector<std::vector<std::string>> rows(pts.size());
    parallel_for(pts.size(), ses.par(), [&](std::size_t i) {
        const auto [t, xi] = pts[i];
        const auto c = compare_explicit_formula(grid, t, xi, data);
        const auto s = spectral_sum_I(t, xi, data);
        rows[i] = {csv::num(t), csv::num(xi), csv::num(c.direct), csv::num(c.spectral), csv::num(c.diff),
                   csv::num(s.kappa_cut), std::to_string(s.terms), detail::flag(s.complete)};
    });
    ses.write_table("explicit_formula.csv",
                    detail::with(ses.provenance("scan explicit-formula"),
                                 {"spectral data: " + cfg.spectral + " (" + std::to_string(data.size()) + " records)",
                                  "diff = direct - spectral; expected O(log^C t) only for genuine spectral data"}),
                    {"t", "xi", "direct", "spectral", "diff", "kappa_cut", "terms", "complete"}, rows);
}

inline void scan_spectral(Session& ses) {
    const auto& data = ses.spectral();
    const auto& cfg = ses.config();
    const bool nonneg = data.nonnegative();
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : partial_sum_scan(data, cfg.spectral_T))
        rows.push_back({csv::num(r.T), csv::num(r.S), csv::num(r.over_T2), csv::num(r.over_T2_log[0]), csv::num(r.over_T2_log[1]),
                        csv::num(r.over_T2_log[2])});
    const std::string src = "spectral data: " + cfg.spectral + " (" + std::to_string(data.size()) + " records, max kappa " +
                            csv::num(data.max_kappa()) + ", nonnegative weights: " + (nonneg ? "yes" : "no") + ")";
    ses.write_table("spectral_partial_sums.csv", detail::with(ses.provenance("scan spectral"), {src}),
                    {"T", "S", "S_over_T2", "S_over_T2_log1", "S_over_T2_log2", "S_over_T2_log3"}, rows);
    rows.clear();
    for (const auto& r : short_interval_scan(data, cfg.spectral_K, cfg.spectral_G))
        rows.push_back({csv::num(r.K), csv::num(r.G), csv::num(r.sum), csv::num(r.ratio)});
    ses.write_table("spectral_short_intervals.csv", detail::with(ses.provenance("scan spectral"), {src, "ratio = sum / (G K)"}),
                    {"K", "G", "sum", "ratio"}, rows);
}

inline void scan_partition(Session& ses) {
    const auto& cfg = ses.config();
    const double t0 = cfg.smoothed_t.front(), xi0 = cfg.xi.front();
    const double X = partition_scale(t0, xi0, cfg.partition_delta);
    const auto part = build_partition(X, cfg.partition_J);
    double worst = 0.0;
    constexpr std::size_t kSamples = 10000;
    for (std::size_t i = 0; i < kSamples; ++i) {
        const double x = 1.0 + (part.unity_hi() - 1.0) * static_cast<double>(i) / static_cast<double>(kSamples - 1);
        worst = std::max(worst, std::abs(part.sum(x) - 1.0));
    }
    std::vector<std::vector<std::string>> rows;
    for (int j = 1; j <= part.J(); ++j) {
        const auto& p = part.piece(j);
        rows.push_back({std::to_string(j), csv::num(p.support_lo()), csv::num(p.support_hi()), csv::num(p.rises ? p.rise_hi : 1.0),
                        csv::num(p.fall_lo), csv::num(part.derivative_constant(j, 1)), csv::num(part.derivative_constant(j, 2)),
                        csv::num(part.derivative_constant(j, 3))});
    }
    ses.write_table("partition.csv",
                    detail::with(ses.provenance("scan partition"),
                                 {"X = t^(1/(1-xi) - delta) with t = " + csv::num(t0) + ", xi = " + csv::num(xi0) + ": X = " + csv::num(X),
                                  "max |sum rho_j - 1| on [1, " + csv::num(part.unity_hi()) + "] (10000 samples) = " + csv::num(worst),
                                  "c_r = max |rho_j^(r)| (2^j X)^r"}),
                    {"j", "support_lo", "support_hi", "plateau_lo", "plateau_hi", "c1", "c2", "c3"}, rows);
}

inline void scan_j(Session& ses) {
    const auto& data = ses.spectral();
    const auto& cfg = ses.config();
    struct Pt {
        double sigma, t, xi;
    };
    std::vector<Pt> pts;
    for (double xi : cfg.xi)
        for (double sigma : cfg.j_sigma)
            for (double t : cfg.j_t) pts.push_back({sigma, t, xi});
    std::vector<JPoint> vals(pts.size());
    parallel_for(pts.size(), ses.par(), [&](std::size_t i) { vals[i] = j_transform(Complex(pts[i].sigma, pts[i].t), pts[i].xi, data, cfg.j_x_max); });
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& v = vals[i];
        rows.push_back({csv::num(pts[i].sigma), csv::num(pts[i].t), csv::num(pts[i].xi), csv::num(v.x_max), csv::num(v.value.real()),
                        csv::num(v.value.imag()), csv::num(std::abs(v.value)), detail::flag(v.regular_region), detail::flag(v.complete)});
    }
    ses.write_table("j.csv",
                    detail::with(ses.provenance("scan j"), {"truncated J = int_1^x_max I(x; xi) x^-s dx over the spectral sum",
                                                            "regular_region = sigma > 2 - 3 xi / 2"}),
                    {"sigma", "t", "xi", "x_max", "re", "im", "abs", "regular_region", "complete"}, rows);
}

inline void scan_identity_k(Session& ses) {
    const auto& cfg = ses.config();
    const auto table = k_identity_table(ses.grid(), ses.lattice_series(), ses.poly(), cfg.k_X, ses.par());
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : table)
        rows.push_back({csv::num(r.s.real()), csv::num(r.s.imag()), csv::num(cfg.k_X), csv::num(r.direct.real()), csv::num(r.direct.imag()),
                        csv::num(r.dual.value.real()), csv::num(r.dual.value.imag()), csv::num(r.dual.boundary.real()),
                        csv::num(r.dual.boundary.imag()), csv::num(r.residual), csv::num(r.relation_residual)});
    ses.write_table("identity_k.csv",
                    detail::with(ses.provenance("scan identity-k"),
                                 {"dual = -E2(1)^2/2 + E2(X)^2 X^-s/2 + (+1) (s/2) int_1^X E2^2 x^-s-1 dx", ses.poly_note(),
                                  polynomial_comment(ses.poly()), "residuals are relative to 1 + |direct|"}),
                    {"sigma", "t", "X", "re_direct", "im_direct", "re_dual", "im_dual", "re_boundary", "im_boundary", "residual",
                     "relation_residual"},
                    rows);
}

inline void scan_meansq(Session& ses) {
    const auto& cfg = ses.config();
    const auto& grid = ses.grid();
    std::vector<ScanSeries> series;
    std::vector<ExponentFit> fits;
    const double zX = ses.z2_X();
    for (double sigma : cfg.sigma_z2) {
        auto s = meansq_scan("Z2", [&](Complex z) { return z2_truncated(grid, z, zX).value; }, sigma, cfg.meansq_T, cfg.meansq_step, ses.par());
        fits.push_back(fit_exponent(s, z2_theoretical_exponent(sigma)));
        series.push_back(std::move(s));
    }
    const auto& es = ses.lattice_series();
    const auto& poly = ses.poly();
    for (double sigma : cfg.sigma_k) {
        auto s = meansq_scan("K", [&](Complex z) { return k_direct(grid, es, poly, z, cfg.k_X); }, sigma, cfg.meansq_T, cfg.meansq_step, ses.par());
        fits.push_back(fit_exponent(s, k_theoretical_exponent(sigma)));
        series.push_back(std::move(s));
    }
    std::vector<std::vector<std::string>> rows;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.T_values.size(); ++i)
            rows.push_back({s.quantity, csv::num(s.sigma), csv::num(s.T_values[i]), csv::num(s.values[i])});
    const std::string note = "value = int_1^T |F(sigma+it)|^2 dt; Z2 truncated at X = " + csv::num(zX) + ", K at X = " + csv::num(cfg.k_X);
    ses.write_table("meansq_scan.csv", detail::with(ses.provenance("scan meansq"), {note}), scan_csv_header(), rows);
    rows.clear();
    for (const auto& f : fits)
        rows.push_back({f.quantity, csv::num(f.sigma), csv::num(f.slope), csv::num(f.intercept), csv::num(f.r2), csv::num(f.theoretical)});
    ses.write_table("meansq_fits.csv", detail::with(ses.provenance("scan meansq"), {note, "slope: OLS of log value on log T", kDeskScaleFlag}),
                    fit_csv_header(), rows);
}

/// Runs one named scan; "all" runs every scan in order.
inline void cmd_scan(Session& ses, const std::string& quantity) {
    if (quantity == "all") {
        for (const auto& q : scan_quantities()) cmd_scan(ses, q);
        return;
    }
    if (quantity == "fourth-moment") return scan_fourth_moment(ses);
    if (quantity == "e2") return scan_e2(ses);
    if (quantity == "e2-moments") return scan_e2_moments(ses);
    if (quantity == "z2") return scan_z2(ses);
    if (quantity == "k") return scan_k(ses);
    if (quantity == "smoothed") return scan_smoothed(ses);
    if (quantity == "explicit-formula") return scan_explicit_formula(ses);
    if (quantity == "spectral") return scan_spectral(ses);
    if (quantity == "partition") return scan_partition(ses);
    if (quantity == "j") return scan_j(ses);
    if (quantity == "identity-k") return scan_identity_k(ses);
    if (quantity == "meansq") return scan_meansq(ses);
    std::string known;
    for (const auto& q : scan_quantities()) known += " " + q;
    throw DomainError("unknown scan quantity '" + quantity + "' (known: all" + known + ")");
}

inline GridSource cmd_grid(Session& ses) { return ses.ensure_grid(); }

// ---- report ---------------------------------------------------------------------

inline std::vector<ExponentFit> load_fits(const std::string& path) {
    const auto table = csv::read_file(path);
    csv::expect_header(table, fit_csv_header(), path);
    std::vector<ExponentFit> fits;
    for (const auto& r : table.rows)
        fits.push_back({r.fields[0], csv::parse_double(r.fields[1], r.line), csv::parse_double(r.fields[2], r.line),
                        csv::parse_double(r.fields[3], r.line), csv::parse_double(r.fields[4], r.line), csv::parse_double(r.fields[5], r.line)});
    return fits;
}

/// Aggregates the exponent fits into report.txt and report.csv.
inline TheoremTable cmd_report(Session& ses) {
    const std::vector<std::string> required{ses.path("meansq_fits.csv"), ses.path("meansq_scan.csv")};
    std::string missing;
    for (const auto& f : required)
        if (!fs::exists(f)) missing += (missing.empty() ? "" : ", ") + f;
    if (!missing.empty()) throw Error(ErrorKind::input, "report: missing required input(s): " + missing + " (run `scan meansq` first)");
    const auto table = theorem_table(load_fits(required.front()));
    const auto prov = ses.provenance("report");
    std::string text;
    for (const auto& c : prov) text += "# " + c + "\n";
    text += "\nMean-square growth exponents: fitted slope vs theorem exponent (" + std::string(kDeskScaleFlag) + ")\n\n";
    text += theorem_table_text(table);
    text += "\ntripwire: slope <= theoretical + " + csv::num(kTripwireMargin) + " (regression guard, not a mathematical claim)\n";
    csv::write_file(ses.path("report.txt"), text);
    ses.note_written(ses.path("report.txt"));
    ses.write_table("report.csv", prov, table.header, table.rows);
    ses.log() << text.substr(text.find("\nMean-square"));
    return table;
}

// ---- checks ---------------------------------------------------------------------

/// Loads and summarises the spectral data: record count, range, sign, and
/// whether the data reach kappa_cut at each configured (t, xi).
inline bool cmd_spectral_check(Session& ses) {
    const auto& data = ses.spectral();
    const auto& cfg = ses.config();
    ses.log() << "spectral: " << data.size() << " records";
    if (!data.empty()) ses.log() << ", kappa in [" << data.records().front().kappa << ", " << data.max_kappa() << "]";
    ses.log() << ", nonnegative weights: " << (data.nonnegative() ? "yes" : "no") << "\n";
    bool complete = true;
    std::vector<std::vector<std::string>> rows;
    for (double xi : cfg.xi)
        for (double t : cfg.smoothed_t) {
            const auto s = spectral_sum_I(t, xi, data);
            complete = complete && s.complete;
            rows.push_back({csv::num(t), csv::num(xi), csv::num(s.kappa_cut), std::to_string(s.terms), detail::flag(s.complete)});
        }
    ses.write_table("spectral_check.csv", ses.provenance("spectral-check"), {"t", "xi", "kappa_cut", "terms", "complete"}, rows);
    ses.log() << "spectral: data " << (complete ? "reach" : "do NOT reach") << " kappa_cut at every configured (t, xi)\n";
    return complete;
}

struct IdentityCheckResult {
    DerivativeCheck derivative;
    double max_k_residual = 0.0;
    double max_relation_residual = 0.0;
    bool ok = false;
};

inline constexpr double kIdentityTolerance = 1e-6;

/// Derivative identity at 200 points and the K(s) dual definition at 20
/// points; fails (numerical) when a dual residual exceeds 1e-6.
inline IdentityCheckResult cmd_identity_check(Session& ses) {
    const auto& cfg = ses.config();
    IdentityCheckResult res;
    const double hi = std::min(ses.grid().last_t() - 1.0, cfg.fit_T_hi);
    res.derivative = derivative_identity_check(ses.grid(), ses.poly(), std::max(2.0, cfg.fit_T_lo), hi);
    const auto table = k_identity_table(ses.grid(), ses.lattice_series(), ses.poly(), cfg.k_X, ses.par());
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < res.derivative.x.size(); ++i)
        rows.push_back({"derivative", csv::num(res.derivative.x[i]), "", csv::num(std::abs(res.derivative.residual[i]))});
    for (const auto& r : table) {
        res.max_k_residual = std::max(res.max_k_residual, r.residual);
        res.max_relation_residual = std::max(res.max_relation_residual, r.relation_residual);
        rows.push_back({"k-dual", csv::num(r.s.real()), csv::num(r.s.imag()), csv::num(r.residual)});
        rows.push_back({"k-relation", csv::num(r.s.real()), csv::num(r.s.imag()), csv::num(r.relation_residual)});
    }
    res.ok = res.max_k_residual <= kIdentityTolerance && res.max_relation_residual <= kIdentityTolerance;
    ses.write_table("identity_check.csv",
                    detail::with(ses.provenance("identity-check"),
                                 {"derivative rows: x, |E2'(x) - (|zeta|^4 - Q4(log x))| by centred difference, step " + csv::num(cfg.grid_step),
                                  "derivative constant C = max residual / step^2 = " + csv::num(res.derivative.constant),
                                  "k rows: sigma, t, residual relative to 1 + |K|"}),
                    {"check", "a", "b", "residual"}, rows);
    ses.log() << "identity: derivative C = " << csv::num(res.derivative.constant) << " (max residual " << csv::num(res.derivative.max_residual)
              << ")\nidentity: K dual residual max " << csv::num(res.max_k_residual) << ", k relation residual max "
              << csv::num(res.max_relation_residual) << (res.ok ? " (ok)" : " (FAILED)") << "\n";
    return res;
}

}  // namespace fourthmoment::cli
