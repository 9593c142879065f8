// Command-line front end: grid, scan <quantity>, report, spectral-check, identity-check.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "fourthmoment/cli/pipeline.hpp"

namespace fm = fourthmoment;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitNumerical = 4;

int exit_code(fm::ErrorKind kind) {
    switch (kind) {
        case fm::ErrorKind::usage: return kExitUsage;
        case fm::ErrorKind::input: return kExitInput;
        case fm::ErrorKind::numerical: return kExitNumerical;
    }
    return kExitNumerical;
}

std::string flag_name(std::string key) {
    for (auto& c : key)
        if (c == '_') c = '-';
    return "--" + key;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourth-moment numerical laboratory for |zeta(1/2+it)|^4"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("-c,--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);

    // one flag per configuration key; flags override the file
    std::map<std::string, std::string> overrides;
    for (const auto& f : fm::cli::config_fields()) {
        app.add_option_function<std::string>(flag_name(f.key), [&overrides, key = f.key](const std::string& v) { overrides[key] = v; }, f.help);
    }

    auto* grid = app.add_subcommand("grid", "build or reuse the cached zeta grid");
    auto* scan = app.add_subcommand("scan", "emit CSV tables for one quantity (or 'all')");
    std::string quantity;
    scan->add_option("quantity", quantity, "fourth-moment | e2 | e2-moments | z2 | k | smoothed | explicit-formula | spectral | partition | j | identity-k | meansq | all")
        ->required();
    auto* report = app.add_subcommand("report", "summarise exponent fits into report.txt / report.csv");
    auto* spectral_check = app.add_subcommand("spectral-check", "validate spectral data and report completeness");
    auto* identity_check = app.add_subcommand("identity-check", "derivative identity and K(s) dual-definition residuals");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        fm::cli::RunConfig cfg;
        if (!config_path.empty()) fm::cli::apply_config_file(cfg, config_path);
        for (const auto& f : fm::cli::config_fields())
            if (auto it = overrides.find(f.key); it != overrides.end()) f.set(cfg, it->second);
        fm::cli::Session ses(cfg, std::cout);
        if (grid->parsed()) {
            const auto src = fm::cli::cmd_grid(ses);
            std::cout << (src == fm::cli::GridSource::cache_hit ? "cache hit" : "computed") << "\n";
        } else if (scan->parsed()) {
            fm::cli::cmd_scan(ses, quantity);
        } else if (report->parsed()) {
            fm::cli::cmd_report(ses);
        } else if (spectral_check->parsed()) {
            fm::cli::cmd_spectral_check(ses);
        } else if (identity_check->parsed()) {
            if (!fm::cli::cmd_identity_check(ses).ok) return kExitNumerical;
        }
    } catch (const fm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
