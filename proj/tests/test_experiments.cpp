#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ajscc/experiments.hpp"

using namespace ajscc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    auto d = fs::temp_directory_path() / ("ajscc_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

Settings small_link() {
    return {{"nx", "10"}, {"ny", "10"}, {"s_p", "5"}, {"nt", "10"}, {"t_p", "5"}, {"trials", "2"}};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

int run_tool(const std::string& args) {
    const std::string cmd = std::string(AJSCC_RUN_TOOL) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(format_number(0.0), "0");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(200000.0), "200000");
    EXPECT_EQ(format_number(0.41), "0.41");
    EXPECT_EQ(format_number(-60.0), "-60");
    EXPECT_EQ(format_number(std::size_t{33}), "33");
    for (double v : {0.1 + 0.2, 1.0 / 3, 2.5e-7, 123456.789}) EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(ParseList, CommaAndRange) {
    EXPECT_EQ(parse_list("k", "1, 0.5,0.25"), (std::vector<double>{1, 0.5, 0.25}));
    const auto r = parse_list("k", "0.1:0.05:1.0");
    ASSERT_EQ(r.size(), 19u);
    EXPECT_EQ(r[3], 0.25);
    EXPECT_EQ(r.back(), 1.0);
    EXPECT_EQ(parse_list("k", "-60:10:20").size(), 9u);
    EXPECT_THROW(parse_list("k", ""), ConfigError);
    EXPECT_THROW(parse_list("k", "1:0:2"), ConfigError);
    EXPECT_THROW(parse_list("k", "1:2"), ConfigError);
    EXPECT_THROW(parse_list("k", "1,x"), ConfigError);
}

TEST(Settings, ParseText) {
    const auto s = parse_settings_text("# comment\n a = 1 \n\nb=x y\n");
    EXPECT_EQ(s.size(), 2u);
    EXPECT_EQ(s.at("a"), "1");
    EXPECT_EQ(s.at("b"), "x y");
    EXPECT_THROW(parse_settings_text("novalue\n"), ConfigError);
    EXPECT_THROW(parse_settings_text("= 3\n"), ConfigError);
}

TEST(Settings, UnknownKeysRejected) {
    for (auto name : experiment_names) {
        EXPECT_NO_THROW(resolve_settings(name, {}));
        EXPECT_THROW(resolve_settings(name, {{"no_such_key", "1"}}), ConfigError) << name;
    }
    EXPECT_THROW(default_settings("nope"), ConfigError);
    EXPECT_EQ(resolve_settings("phi-opt", {{"trials", "3"}}).at("trials"), "3");
}

TEST(Settings, ViewErrorsNameTheKey) {
    Settings s{{"n", "abc"}, {"d", "gamma"}};
    SettingsView v(s);
    try {
        (void)v.num("n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("'n'"), std::string::npos);
    }
    EXPECT_THROW((void)v.distribution("d"), ConfigError);
    EXPECT_THROW((void)v.str("missing"), ConfigError);
}

TEST(Manifest, RoundTripsThroughParser) {
    const auto resolved = resolve_settings("snr-bw", {{"trials", "4"}});
    const auto m = parse_settings_text(manifest_text("snr-bw", 77, resolved));
    EXPECT_EQ(m.at("experiment"), "snr-bw");
    EXPECT_EQ(m.at("seed"), "77");
    EXPECT_EQ(m.at("version"), std::string(version));
    for (const auto& [k, v] : resolved) EXPECT_EQ(m.at(k), v) << k;
}

TEST(RmseSweep, CorrectionRows) {
    const auto s = resolve_settings("rmse-sweep", {});
    const auto t = run_experiment("rmse-sweep", 1, s)[0];
    EXPECT_EQ(t.file_name, "rmse_sweep.csv");
    ASSERT_EQ(t.rows.size(), 10u);
    const auto csv = parse_csv(t.to_csv());
    EXPECT_EQ(csv[0], (std::vector<std::string>{"phi", "rmse_vgs_before", "rmse_vds_before", "rmse_vgs_after",
                                                "rmse_vds_after"}));
    for (std::size_t i = 1; i < csv.size(); ++i) {
        const double phi = std::stod(csv[i][0]);
        const double gb = std::stod(csv[i][1]), db = std::stod(csv[i][2]);
        const double ga = std::stod(csv[i][3]), da = std::stod(csv[i][4]);
        EXPECT_GE(gb, ga) << phi;
        EXPECT_GE(db, da) << phi;
        if (std::abs(phi - 0.5) < 1e-9) {
            EXPECT_EQ(ga, 0.0);
            EXPECT_LE(da, 1e-6);
        }
        if (std::abs(phi - 0.1) < 1e-9) {
            EXPECT_LE(ga, 0.15);
            EXPECT_LE(da, 2.5);
        }
    }
}

TEST(Power, Rows) {
    const auto t = run_experiment("power", 1, resolve_settings("power", {}))[0];
    const auto csv = parse_csv(t.to_csv());
    ASSERT_EQ(csv.size(), 5u);
    EXPECT_EQ(csv[0], (std::vector<std::string>{"phi", "levels", "stages", "power_uW"}));
    EXPECT_EQ(csv[1][1], "5");
    EXPECT_NEAR(std::stod(csv[1][3]), 16.0, 0.1);
    EXPECT_EQ(csv[2][1], "9");
    EXPECT_NEAR(std::stod(csv[2][3]), 24.0, 0.1);
    EXPECT_EQ(csv[4][1], "33");
    EXPECT_EQ(csv[4][2], "4");
    EXPECT_NEAR(std::stod(csv[4][3]), 40.0, 0.1);
    EXPECT_THROW(run_experiment("power", 1, resolve_settings("power", {{"phi_list", "0.3"}})), ConfigError);
}

TEST(EstimateAccuracy, TablesAndZeroTrials) {
    auto o = small_link();
    o["phi_list"] = "0.2,1.0";
    o["snr_list"] = "20";
    o["bw_list"] = "200000";
    const auto tables = run_experiment("estimate-accuracy", 5, resolve_settings("estimate-accuracy", o));
    ASSERT_EQ(tables.size(), 2u);
    EXPECT_EQ(tables[0].file_name, "accuracy.csv");
    EXPECT_EQ(tables[1].file_name, "kld_scores.csv");
    const auto acc = parse_csv(tables[0].to_csv());
    EXPECT_EQ(acc[0], (std::vector<std::string>{"sweep", "phi", "snr_db", "bandwidth_hz", "signal", "distribution",
                                                "accuracy", "trials"}));
    // fixed point + 2 phi + 1 snr + 1 bw, x 2 signals x 6 kinds
    EXPECT_EQ(acc.size(), 1u + 5 * 12);
    for (std::size_t i = 1; i < acc.size(); ++i) {
        const double a = std::stod(acc[i][6]);
        EXPECT_GE(a, 0.0);
        EXPECT_LE(a, 1.0);
        EXPECT_EQ(acc[i][7], "2");
    }
    // 6 kinds x 2 trials x 2 signals x 6 candidates
    EXPECT_EQ(parse_csv(tables[1].to_csv()).size(), 1u + 6 * 2 * 2 * 6);

    o["trials"] = "0";
    EXPECT_THROW(run_experiment("estimate-accuracy", 5, resolve_settings("estimate-accuracy", o)), ConfigError);
}

TEST(PhiOptAndSnrBw, Shapes) {
    auto o = small_link();
    o["phi_list"] = "0.3,0.6";
    const auto p = parse_csv(run_experiment("phi-opt", 3, resolve_settings("phi-opt", o))[0].to_csv());
    EXPECT_EQ(p[0], (std::vector<std::string>{"phi", "mse_gs", "mse_ds", "mse_sum"}));
    ASSERT_EQ(p.size(), 3u);
    for (std::size_t i = 1; i < p.size(); ++i)
        EXPECT_DOUBLE_EQ(std::stod(p[i][3]), 0.5 * (std::stod(p[i][1]) + std::stod(p[i][2])));

    auto q = small_link();
    q["snr_list"] = "-60,0";
    q["bw_list"] = "50000,500000";
    const auto s = parse_csv(run_experiment("snr-bw", 3, resolve_settings("snr-bw", q))[0].to_csv());
    EXPECT_EQ(s[0], (std::vector<std::string>{"snr_db", "bandwidth_hz", "mse_sum"}));
    ASSERT_EQ(s.size(), 5u);
    EXPECT_EQ(s[1][0], "-60");
    EXPECT_EQ(s[2][1], "500000");
}

TEST(Determinism, ByteIdenticalAcrossThreadCounts) {
    for (std::string name : {"phi-opt", "snr-bw", "estimate-accuracy"}) {
        auto o = small_link();
        if (name == "phi-opt") o["phi_list"] = "0.4,0.8";
        if (name == "snr-bw") o["snr_list"] = "-40,10";
        if (name == "estimate-accuracy") {
            o["phi_list"] = "0.4";
            o["snr_list"] = "0";
            o["bw_list"] = "100000";
        }
        o["threads"] = "1";
        const auto a = run_experiment(name, 9, resolve_settings(name, o));
        o["threads"] = "0";
        const auto b = run_experiment(name, 9, resolve_settings(name, o));
        o["threads"] = "3";
        const auto c = run_experiment(name, 9, resolve_settings(name, o));
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_EQ(a[i].to_csv(), b[i].to_csv()) << name;
            EXPECT_EQ(a[i].to_csv(), c[i].to_csv()) << name;
        }
        const auto d = run_experiment(name, 10, resolve_settings(name, o));
        EXPECT_NE(a[0].to_csv(), d[0].to_csv()) << name;
    }
}

TEST(RunExperiment, WritesCsvAndManifest) {
    const auto dir = scratch("write");
    ExperimentSpec spec{"power", 4, {{"comparators", "2"}}, dir};
    const auto paths = run_experiment(spec);
    ASSERT_EQ(paths.size(), 2u);
    EXPECT_EQ(paths[0], dir / "power.csv");
    EXPECT_EQ(paths[1], dir / "power.manifest");
    const auto m = parse_settings_text(slurp(paths[1]));
    EXPECT_EQ(m.at("seed"), "4");
    EXPECT_EQ(m.at("comparators"), "2");
    EXPECT_EQ(slurp(paths[0]).substr(0, 4), "phi,");
}

TEST(Cli, ExitCodesAndManifestRerun) {
    const auto dir = scratch("cli");
    const std::string link = "--set nx=10 ny=10 s_p=5 nt=10 t_p=5 trials=2 phi_list=0.3,0.7";
    ASSERT_EQ(run_tool("phi-opt --seed 12 --out " + (dir / "a").string() + " " + link), 0);
    const auto first = slurp(dir / "a" / "phi_opt.csv");
    ASSERT_FALSE(first.empty());

    // the manifest alone reproduces the run
    ASSERT_EQ(run_tool("phi-opt --config " + (dir / "a" / "phi_opt.manifest").string() + " --out " +
                       (dir / "b").string()),
              0);
    EXPECT_EQ(slurp(dir / "b" / "phi_opt.csv"), first);
    EXPECT_EQ(slurp(dir / "b" / "phi_opt.manifest"), slurp(dir / "a" / "phi_opt.manifest"));

    EXPECT_NE(run_tool("no-such-experiment"), 0);
    EXPECT_EQ(run_tool("power --out " + dir.string() + " --set bogus=1"), 1);
    EXPECT_EQ(run_tool("power --out " + dir.string() + " --set trials"), 1);
    EXPECT_EQ(run_tool("power --config " + (dir / "a" / "phi_opt.manifest").string()), 1);
    EXPECT_EQ(run_tool("power --config " + (dir / "missing.cfg").string()), 1);
    EXPECT_EQ(run_tool("power --out " + dir.string()), 0);
}
