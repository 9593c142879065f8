// Acceptance run: one PASS/FAIL line per primary criterion. Exit status is
// nonzero when a hard check fails; the exponent tripwire is reported but soft.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "fourthmoment/cli/pipeline.hpp"
#include "fourthmoment/mellin/lemma1.hpp"
#include "fourthmoment/mellin/smoothed.hpp"
#include "fourthmoment/mellin/transforms.hpp"
#include "fourthmoment/scaling/exponents.hpp"
#include "fourthmoment/spectral/explicit_formula.hpp"
#include "fourthmoment/spectral/partition.hpp"
#include "golden.hpp"
#include "support.hpp"

using namespace fourthmoment;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    bool soft = false;
    std::ostringstream note;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            note << " [failed: " << what << "]";
        }
    }
};

int hard_failures = 0;

template <class F>
void criterion(int id, const std::string& name, F&& body) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.soft = false;
        o.note << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass && !o.soft) ++hard_failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << name << ":" << o.note.str() << " (" << std::fixed
              << std::setprecision(1) << secs << " s)" << std::defaultfloat << std::setprecision(6) << std::endl;
}

double bisect_oracle_zero(double a, double b) {
    double fa = hardy_z_oracle(a);
    for (int i = 0; i < 200 && b - a > 1e-15; ++i) {
        const double m = 0.5 * (a + b), fm = hardy_z_oracle(m);
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

double trapezoid(const std::vector<double>& y, double h) {
    double acc = 0.5 * (y.front() + y.back());
    for (std::size_t i = 1; i + 1 < y.size(); ++i) acc += y[i];
    return acc * h;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> files_in(const fs::path& dir) {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

// Full default pipeline into a fresh directory.
fs::path run_default_pipeline(unsigned threads) {
    const auto dir = fs::temp_directory_path() / ("fourthmoment_acceptance_" + std::to_string(threads));
    fs::remove_all(dir);
    cli::RunConfig cfg;
    cfg.spectral = std::string(FOURTHMOMENT_SOURCE_DIR) + "/data/spectral_sample.csv";
    cfg.out = dir.string();
    cfg.threads = threads;
    cli::validate(cfg);
    std::ostringstream log;
    cli::Session ses(cfg, log);
    cli::cmd_scan(ses, "all");
    cli::cmd_report(ses);
    cli::cmd_spectral_check(ses);
    cli::cmd_identity_check(ses);
    return dir;
}

}  // namespace

int main() {
    using testsupport::grid_300;

    criterion(1, "zeta oracle agreement", [](Outcome& o) {
        const auto start = std::chrono::steady_clock::now();
        std::mt19937_64 rng(20261015);
        std::uniform_real_distribution<double> dist(10.0, 1e4);
        double worst = 0.0, worst_rs = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double t = dist(rng);
            const Complex em = euler_maclaurin_zeta(Complex(0.5, t)).value;
            worst = std::max(worst, std::abs(zeta_half(t) - em));
            if (t >= kRiemannSiegelCrossover) worst_rs = std::max(worst_rs, std::abs(hardy_z(t) - hardy_z_oracle(t)));
        }
        const double half = std::abs(zeta_half(0.0).real() - golden::kZetaHalf);
        const double root = bisect_oracle_zero(14.0, 14.2);
        const double z_root = std::abs(hardy_z(root));
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        o.note << " max|zeta_half - EM| = " << worst << " over 1000 t (RS branch alone, t >= " << kRiemannSiegelCrossover
               << ": " << worst_rs << "); |zeta(1/2) - golden| = " << half << "; |Z| = " << z_root << " at t = "
               << std::setprecision(15) << root << std::setprecision(6);
        o.require(worst <= 1e-7 && worst_rs <= 1e-7, "RS/EM agreement 1e-7");
        o.require(half <= 1e-10, "zeta(1/2) to 1e-10");
        o.require(z_root < 1e-6, "|Z| < 1e-6 at first zero");
        o.require(secs <= 60.0, "runtime 60 s");
    });

    criterion(2, "fourth-moment quadrature", [&](Outcome& o) {
        const auto& g = grid_300();
        const auto start = std::chrono::steady_clock::now();
        const double got = fourth_moment(g, 100.0);
        double additivity = 0.0;
        for (auto [a, b] : {std::pair{37.123, 100.0}, {0.005, 299.99}, {12.5, 280.0}}) {
            const double whole = fourth_moment(g, b);
            additivity = std::max(additivity, std::abs(fourth_moment(g, a) + fourth_moment_between(g, a, b) - whole) / whole);
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const double oracle = trapezoid(testsupport::direct_abs4(0.0, 100.0, 100000), 0.001);
        const double rel = std::abs(got - oracle) / oracle;
        o.note << " fourth_moment(100) = " << std::setprecision(12) << got << " vs step/10 oracle " << oracle << std::setprecision(6)
               << " (rel " << rel << "); additivity rel " << additivity;
        o.require(rel <= 1e-5, "relative 1e-5");
        o.require(additivity <= 1e-9, "additivity 1e-9");
        o.require(secs <= 60.0, "runtime 60 s");
    });

    criterion(3, "derivative identity", [&](Outcome& o) {
        const auto& poly = testsupport::fit_300().poly;
        const auto fine = build_grid(0.0, 300.0, 0.005, 1e-8);
        const auto coarse = cli::derivative_identity_check(grid_300(), poly, 2.0, 290.0);
        const auto halved = cli::derivative_identity_check(fine, poly, 2.0, 290.0);
        const double ratio = halved.constant / coarse.constant;
        o.note << " " << coarse.x.size() << " points; C = " << coarse.constant << " at step 0.01, " << halved.constant
               << " at step 0.005 (ratio " << ratio << ")";
        o.require(coarse.x.size() == 200 && halved.x.size() == 200, "200 points");
        o.require(coarse.max_residual <= coarse.constant * 1e-4 * (1.0 + 1e-12), "residual <= C step^2");
        o.require(std::abs(ratio - 1.0) <= 0.2, "C stable within 20%");
    });

    criterion(4, "K(s) dual definition", [&](Outcome& o) {
        const auto rows = cli::k_identity_table(grid_300(), testsupport::series_300(), testsupport::fit_300().poly, 200.0, {});
        double dual = 0.0, relation = 0.0, flipped = 0.0;
        for (const auto& r : rows) {
            dual = std::max(dual, r.residual);
            relation = std::max(relation, r.relation_residual);
            const auto other = k_via_e2sq(testsupport::series_300(), r.s, 200.0, -kIbpSign);
            flipped = std::max(flipped, std::abs(r.direct - other.value) / (1.0 + std::abs(r.direct)));
        }
        o.note << " " << rows.size() << " points (sigma 1.5..3, |t| <= 50, X = 200); dual residual " << dual
               << ", relation residual " << relation << "; integration-by-parts sign " << (kIbpSign > 0 ? "+" : "-")
               << " (opposite sign gives " << flipped << ")";
        o.require(rows.size() == 20, "20 points");
        o.require(dual <= 1e-6, "dual residual 1e-6");
        o.require(relation <= 1e-6, "relation residual 1e-6");
    });

    criterion(5, "mean-square inequality", [](Outcome& o) {
        int violations = 0, checks = 0;
        auto g = [](double x) { return 1.0 / (x * x); };
        for (double T : {1.0, 10.0, 100.0}) {
            const auto pair = lemma1_pair(g, {2.0, 4.0}, 1.0, T);
            ++checks;
            if (!(pair.lhs <= pair.rhs * (1.0 + 1e-6)) || std::abs(pair.rhs - golden::kLemma1Rhs) > 1e-14) ++violations;
        }
        std::mt19937_64 rng(1015);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int trial = 0; trial < 50; ++trial) {
            PiecewiseConstant pc;
            const int pieces = 1 + static_cast<int>(unit(rng) * 6.0);
            pc.breaks.push_back(2.0);
            for (int k = 1; k < pieces; ++k) pc.breaks.push_back(2.0 + 8.0 * unit(rng));
            pc.breaks.push_back(10.0);
            std::sort(pc.breaks.begin(), pc.breaks.end());
            for (int k = 0; k < pieces; ++k) pc.values.push_back(4.0 * unit(rng) - 2.0);
            for (double sigma : {0.75, 1.0, 1.5})
                for (double T : {1.0, 10.0}) {
                    const auto pair = lemma1_pair(pc, sigma, T);
                    ++checks;
                    if (!(pair.lhs <= pair.rhs * (1.0 + 1e-6))) ++violations;
                }
        }
        o.note << " closed-form example (rhs 2 pi 15/1024) plus 50 random g: " << violations << " violations in " << checks << " checks";
        o.require(violations == 0, "zero violations");
    });

    criterion(6, "Gaussian smoothing", [](Outcome& o) {
        const auto one = testsupport::synthetic_grid(0.0, 1700.0, 0.01, [](double) { return 1.0; });
        double worst = 0.0;
        for (double xi : {0.5, 0.8})
            for (double t : {50.0, 500.0}) worst = std::max(worst, std::abs(smoothed_moment(one, t, xi).value - 1.0));
        o.note << " constant injection max error " << worst << " (xi 0.5, 0.8; t 50, 500)";
        o.require(worst <= 1e-10, "1e-10");
    });

    criterion(7, "partition of unity", [](Outcome& o) {
        double worst = 0.0;
        for (auto [X, J] : {std::pair{1.0, 2}, {10.0, 6}, {37.5, 9}}) {
            const auto p = build_partition(X, J);
            for (int i = 0; i < 10000; ++i) worst = std::max(worst, std::abs(p.sum(1.0 + (p.unity_hi() - 1.0) * i / 9999.0) - 1.0));
        }
        const auto a = build_partition(10.0, 6), b = build_partition(1000.0, 6);
        double drift = 0.0;
        o.note << " max|sum - 1| = " << worst << " on 10^4 samples; c_r (r = 1, 2, 3) for rho_1..rho_6:";
        for (int j = 1; j <= 6; ++j) {
            o.note << " [";
            for (int r = 1; r <= 3; ++r) {
                const double c = a.derivative_constant(j, r);
                drift = std::max(drift, std::abs(b.derivative_constant(j, r) / c - 1.0));
                o.require(std::isfinite(c) && c > 0.0, "finite constants");
                o.note << (r > 1 ? " " : "") << std::setprecision(4) << c << std::setprecision(6);
            }
            o.note << "]";
        }
        o.note << "; X-independence drift " << drift;
        o.require(worst <= 1e-12, "unity 1e-12");
        o.require(drift <= 1e-3, "scale-free constants");
    });

    criterion(8, "spectral single term", [](Outcome& o) {
        const SpectralData one({{9.533, 1.7}});
        double single = 0.0;
        for (double t : {50.0, 123.4, 500.0})
            for (double xi : {0.5, 0.7, 0.9}) {
                const double kappa = 9.533, a = 1.7;
                const double gauss = std::exp(-0.25 * std::pow(std::pow(t, xi - 1.0) * kappa, 2.0));
                const double want = std::numbers::pi / std::sqrt(2.0 * t) * a / std::sqrt(kappa) *
                                    std::sin(kappa * std::log(kappa / (4.0 * std::numbers::e * t))) * gauss;
                single = std::max(single, std::abs(spectral_sum_I(t, xi, one).value - want) / std::max(1.0, std::abs(want)));
            }
        const auto data = load_spectral(std::string(FOURTHMOMENT_SOURCE_DIR) + "/data/spectral_sample.csv");
        double tighten = 0.0;
        for (double t : {50.0, 100.0, 300.0})
            for (double xi : {0.5, 0.8}) {
                const double a = spectral_sum_I(t, xi, data).value, b = spectral_sum_I(t, xi, data, 1e-20).value;
                tighten = std::max(tighten, std::abs(b - a) / std::abs(a));
            }
        o.note << " single-term error " << single << "; threshold 1e-16 -> 1e-20 changes sums by " << tighten << " relative (synthetic data)";
        o.require(single <= 1e-12, "single term 1e-12");
        o.require(tighten <= 1e-12, "threshold 1e-12");
    });

    fs::path single_thread_run;
    criterion(9, "exponent lab", [&](Outcome& o) {
        ScanSeries power{"synthetic", 1.0, {10.0, 20.0, 40.0, 80.0, 160.0}, {}};
        for (double T : power.T_values) power.values.push_back(std::pow(T, 1.7));
        const double power_err = std::abs(fit_exponent(power, 2.0).slope - 1.7);

        const auto& grid = grid_300();
        auto f = [&](Complex z) { return z2_truncated(grid, z, 200.0).value; };
        const std::vector<double> Ts{10.0, 20.0, 40.0, 80.0};
        const auto scan = meansq_scan("Z2", f, 2.0, Ts);
        double scan_err = 0.0;
        for (std::size_t k = 0; k < Ts.size(); ++k) {
            const double h = 0.025;
            const auto n = static_cast<std::size_t>(std::llround((Ts[k] - 1.0) / h));
            std::vector<double> y(n + 1);
            for (std::size_t i = 0; i <= n; ++i) y[i] = std::norm(f(Complex(2.0, 1.0 + h * static_cast<double>(i))));
            const double oracle = testsupport::simpson(y, h);
            scan_err = std::max(scan_err, std::abs(scan.values[k] - oracle) / oracle);
        }

        single_thread_run = run_default_pipeline(1);
        const auto fits = cli::load_fits((single_thread_run / "meansq_fits.csv").string());
        const auto table = theorem_table(fits);
        bool flagged = !table.rows.empty();
        for (const auto& r : table.rows) flagged = flagged && r.back() == kDeskScaleFlag;
        std::vector<std::string> tripped;
        for (const auto& fit : fits)
            if (!tripwire_ok(fit)) {
                std::ostringstream s;
                s << fit.quantity << " sigma " << std::setprecision(4) << fit.sigma << " slope " << fit.slope << " > " << fit.theoretical
                  << " + " << kTripwireMargin;
                tripped.push_back(s.str());
            }
        o.note << " power-law slope error " << power_err << "; Z2 sigma 2 scan vs refined step rel " << scan_err << "; "
               << table.rows.size() << " table rows flagged '" << kDeskScaleFlag << "': " << (flagged ? "yes" : "no");
        o.require(power_err <= 1e-9, "power law 1e-9");
        o.require(scan_err <= 1e-4, "Z2 scan 1e-4");
        o.require(flagged, "desk-scale flag");
        if (o.pass && !tripped.empty()) {
            // the only failing part is the soft regression guard
            o.soft = true;
            o.pass = false;
            o.note << " [soft tripwire, regression guard only:";
            for (const auto& t : tripped) o.note << " " << t << ";";
            o.note << " hard sub-checks pass]";
        } else {
            o.note << "; tripwire " << (tripped.empty() ? "clear" : "tripped");
        }
    });

    criterion(10, "determinism across thread counts", [&](Outcome& o) {
        if (single_thread_run.empty()) single_thread_run = run_default_pipeline(1);
        const auto names = files_in(single_thread_run);
        const auto csvs = std::count_if(names.begin(), names.end(), [](const std::string& n) { return n.ends_with(".csv"); });
        std::size_t differing = 0;
        for (unsigned threads : {2u, 8u}) {
            const auto dir = run_default_pipeline(threads);
            o.require(files_in(dir) == names, "same file set at " + std::to_string(threads) + " threads");
            for (const auto& n : names) {
                if (slurp(dir / n) != slurp(single_thread_run / n)) {
                    ++differing;
                    o.note << " " << n << " differs at " << threads << " threads;";
                }
            }
        }
        o.note << " " << names.size() << " output files (" << csvs << " CSV) compared at 1 vs 2 and 1 vs 8 threads; " << differing
               << " differ";
        o.require(differing == 0, "byte-identical outputs");
    });

    std::cout << (hard_failures ? "acceptance: hard failures: " + std::to_string(hard_failures) : std::string("acceptance: all hard checks pass"))
              << std::endl;
    return hard_failures ? 1 : 0;
}
