#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "fourthmoment/cli/config.hpp"
#include "fourthmoment/cli/pipeline.hpp"

using namespace fourthmoment;
using namespace fourthmoment::cli;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("fourthmoment_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

const std::string kSmallConfig = R"(# reduced desk configuration for tests
grid_t_max = 400
fit_T_lo = 2
fit_T_hi = 300
T = 50, 100, 200, 300
z2_X = 100
k_X = 100
transform_t = -10, 0, 10
sigma_z2 = 1.25
sigma_k = 2
meansq_T = 5:20:5
smoothed_t = 50, 60
spectral_T = 10, 20, 40
spectral_K = 20, 40
j_sigma = 2.5
j_t = 0, 5
j_x_max = 30
partition_J = 4
)";

RunConfig small_config(const fs::path& out, unsigned threads = 1) {
    RunConfig c;
    std::istringstream in(kSmallConfig);
    apply_config_text(c, in, "small");
    c.spectral = std::string(FOURTHMOMENT_SOURCE_DIR) + "/data/spectral_sample.csv";
    c.out = out.string();
    c.threads = threads;
    return c;
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

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FOURTHMOMENT_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

// ---- configuration ---------------------------------------------------------------------

TEST(Config, ParsesKeysListsAndRanges) {
    const auto c = small_config("unused");
    EXPECT_EQ(c.grid_t_max, 400.0);
    EXPECT_EQ(c.meansq_T, (std::vector<double>{5, 10, 15, 20}));
    EXPECT_EQ(c.sigma_k, std::vector<double>{2.0});
    EXPECT_EQ(c.z2_X, "100");
    EXPECT_EQ(c.partition_J, 4);
    EXPECT_NO_THROW(validate(c));
}

TEST(Config, RejectsBadInput) {
    RunConfig c;
    EXPECT_THROW(set_config_value(c, "no_such_key", "1"), DomainError);
    EXPECT_THROW(set_config_value(c, "grid_step", "abc"), DomainError);
    EXPECT_THROW(set_config_value(c, "T", "1:0:1"), DomainError);
    std::istringstream bad("grid_step 0.1\n");
    EXPECT_THROW(apply_config_text(c, bad, "f"), DomainError);
    c.meansq_step = 0.1;
    EXPECT_THROW(validate(c), DomainError);
    c = RunConfig{};
    c.xi = {1.0};
    EXPECT_THROW(validate(c), DomainError);
}

TEST(Config, EchoLeavesOutExecutionSettings) {
    auto a = small_config("dir_a", 1);
    auto b = small_config("dir_b", 8);
    EXPECT_EQ(config_echo(a), config_echo(b));
    for (const auto& kv : config_echo(a)) {
        EXPECT_NE(kv.rfind("out=", 0), 0u);
        EXPECT_NE(kv.rfind("threads=", 0), 0u);
    }
}

TEST(Config, DefaultSigmaListsSpanTheoremRanges) {
    const RunConfig c;
    EXPECT_DOUBLE_EQ(c.sigma_z2.front(), 5.0 / 6.0);
    EXPECT_DOUBLE_EQ(c.sigma_z2.back(), 1.25);
    EXPECT_DOUBLE_EQ(c.sigma_k.front(), 7.0 / 6.0);
    EXPECT_DOUBLE_EQ(c.sigma_k.back(), 13.0 / 6.0);
}

// ---- grid cache ---------------------------------------------------------------------------

TEST(CmdGrid, CacheHitThenRebuildOnStepChange) {
    const auto dir = fresh_dir("cache");
    std::ostringstream log;
    auto cfg = small_config(dir);
    {
        Session s(cfg, log);
        EXPECT_EQ(cmd_grid(s), GridSource::built);
    }
    {
        Session s(cfg, log);
        EXPECT_EQ(cmd_grid(s), GridSource::cache_hit);
    }
    EXPECT_NE(log.str().find("cache hit"), std::string::npos);
    // same file name, different error budget
    cfg.err_budget = 2e-8;
    {
        Session s(cfg, log);
        EXPECT_EQ(cmd_grid(s), GridSource::rebuilt);
    }
    cfg.grid_step = 0.02;
    {
        Session s(cfg, log);
        EXPECT_EQ(cmd_grid(s), GridSource::built);
        EXPECT_EQ(s.grid().step(), 0.02);
    }
}

TEST(CmdGrid, CorruptCacheIsInputError) {
    const auto dir = fresh_dir("corrupt");
    std::ostringstream log;
    const auto cfg = small_config(dir);
    {
        Session s(cfg, log);
        cmd_grid(s);
    }
    Session probe(cfg, log);
    auto text = slurp(probe.grid_path());
    text.replace(text.find("zeta-grid"), 9, "zeta-gird");
    csv::write_file(probe.grid_path(), text);
    Session s(cfg, log);
    try {
        cmd_grid(s);
        FAIL() << "expected integrity error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::input);
    }
}

// ---- scans and report ------------------------------------------------------------------------

TEST(CmdScan, E2RowCountAndPolynomialComment) {
    const auto dir = fresh_dir("e2");
    std::ostringstream log;
    Session s(small_config(dir), log);
    cmd_scan(s, "e2");
    const auto series = load_error_series((dir / "e2.csv").string());
    EXPECT_EQ(series.size(), 4u);
    EXPECT_EQ(series.T_values, (std::vector<double>{50, 100, 200, 300}));
    EXPECT_EQ(series.poly.coefficients(), s.poly().coefficients());
}

TEST(CmdScan, UnknownQuantityIsUsageError) {
    const auto dir = fresh_dir("unknown");
    std::ostringstream log;
    Session s(small_config(dir), log);
    try {
        cmd_scan(s, "zeta-squared");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::usage);
        EXPECT_NE(std::string(e.what()).find("identity-k"), std::string::npos);
    }
}

TEST(CmdScan, IdentityKEmitsResidualTable) {
    const auto dir = fresh_dir("identity");
    std::ostringstream log;
    Session s(small_config(dir), log);
    cmd_scan(s, "identity-k");
    const auto table = csv::read_file((dir / "identity_k.csv").string());
    ASSERT_EQ(table.rows.size(), 20u);
    const auto col = std::find(table.header.begin(), table.header.end(), "residual") - table.header.begin();
    for (const auto& r : table.rows) EXPECT_LE(csv::parse_double(r.fields[static_cast<std::size_t>(col)], r.line), 1e-6);
}

TEST(CmdReport, MissingInputsAreNamed) {
    const auto dir = fresh_dir("report_missing");
    std::ostringstream log;
    Session s(small_config(dir), log);
    try {
        cmd_report(s);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::input);
        EXPECT_NE(std::string(e.what()).find("meansq_fits.csv"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("meansq_scan.csv"), std::string::npos);
    }
}

TEST(CmdReport, OneRowPerQuantitySigmaAndStableRerun) {
    const auto dir = fresh_dir("report");
    std::ostringstream log;
    auto cfg = small_config(dir);
    cfg.sigma_z2 = {1.0, 1.25};
    {
        Session s(cfg, log);
        cmd_scan(s, "meansq");
        const auto table = cmd_report(s);
        EXPECT_EQ(table.rows.size(), 3u);
    }
    const auto first_txt = slurp(dir / "report.txt"), first_csv = slurp(dir / "report.csv"), first_scan = slurp(dir / "meansq_scan.csv");
    {
        Session s(cfg, log);
        cmd_scan(s, "meansq");
        cmd_report(s);
    }
    EXPECT_EQ(slurp(dir / "report.txt"), first_txt);
    EXPECT_EQ(slurp(dir / "report.csv"), first_csv);
    EXPECT_EQ(slurp(dir / "meansq_scan.csv"), first_scan);
    EXPECT_NE(first_txt.find(kDeskScaleFlag), std::string::npos);
}

TEST(Pipeline, EveryOutputIsSelfDescribingAndParses) {
    const auto dir = fresh_dir("all");
    std::ostringstream log;
    Session s(small_config(dir), log);
    cmd_scan(s, "all");
    cmd_report(s);
    EXPECT_TRUE(cmd_spectral_check(s));
    EXPECT_TRUE(cmd_identity_check(s).ok);
    for (const auto& name : files_in(dir)) {
        if (name.size() < 4 || name.substr(name.size() - 4) != ".csv") continue;
        const auto table = csv::read_file((dir / name).string());
        ASSERT_FALSE(table.comments.empty()) << name;
        if (name.rfind("zeta_grid", 0) != 0) {
            EXPECT_EQ(table.comments[0].rfind("fourthmoment ", 0), 0u) << name;
            EXPECT_NE(table.comments[2].find("config: grid_t_min="), std::string::npos) << name;
        }
        for (const auto& r : table.rows) EXPECT_EQ(r.fields.size(), table.header.size()) << name << ":" << r.line;
    }
}

TEST(Pipeline, ByteIdenticalAcrossThreadCounts) {
    std::vector<fs::path> dirs;
    for (unsigned threads : {1u, 2u, 8u}) {
        const auto dir = fresh_dir("threads_" + std::to_string(threads));
        std::ostringstream log;
        Session s(small_config(dir, threads), log);
        cmd_scan(s, "all");
        cmd_report(s);
        cmd_identity_check(s);
        dirs.push_back(dir);
    }
    const auto names = files_in(dirs[0]);
    EXPECT_GT(names.size(), 15u);
    for (std::size_t k = 1; k < dirs.size(); ++k) {
        EXPECT_EQ(files_in(dirs[k]), names);
        for (const auto& n : names) EXPECT_EQ(slurp(dirs[k] / n), slurp(dirs[0] / n)) << n << " differs at dir " << k;
    }
}

// ---- executable ----------------------------------------------------------------------------

TEST(Executable, ExitCodes) {
    const auto dir = fresh_dir("exe");
    const auto cfg_file = dir / "small.conf";
    csv::write_file(cfg_file.string(), kSmallConfig + "spectral = " + FOURTHMOMENT_SOURCE_DIR + "/data/spectral_sample.csv\n");
    const std::string base = "-c " + cfg_file.string() + " --out " + (dir / "out").string();
    EXPECT_EQ(run_cli("--help"), 0);
    EXPECT_EQ(run_cli(""), 2);
    EXPECT_EQ(run_cli("--no-such-flag 1 grid"), 2);
    EXPECT_EQ(run_cli("-c /nonexistent.conf grid"), 2);
    EXPECT_EQ(run_cli(base + " scan nonsense"), 2);
    EXPECT_EQ(run_cli(base + " --grid-step -1 grid"), 2);
    EXPECT_EQ(run_cli(base + " report"), 3);
    EXPECT_EQ(run_cli(base + " --spectral /nonexistent.csv spectral-check"), 3);
    EXPECT_EQ(run_cli(base + " --grid-t-max 20 --err-budget 1e-30 grid"), 4);
    EXPECT_EQ(run_cli(base + " grid"), 0);
    EXPECT_EQ(run_cli(base + " scan e2"), 0);
    // flags override the file
    EXPECT_EQ(run_cli(base + " --T 60,70 scan e2"), 0);
    EXPECT_EQ(load_error_series((dir / "out" / "e2.csv").string()).size(), 2u);
    const auto grid_file = dir / "out" / grid_file_name(0.0, 400.0, 0.01);
    auto text = slurp(grid_file);
    text.replace(text.find("count="), 6, "count=9");
    csv::write_file(grid_file.string(), text);
    EXPECT_EQ(run_cli(base + " grid"), 3);
}
