#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "porder/experiments.hpp"
#include "porder/sequence_io.hpp"

using namespace porder;
namespace fs = std::filesystem;

namespace {

ExperimentReport run(const std::string& name, json overrides = json::object()) {
    ExperimentConfig cfg;
    cfg.experiment = name;
    cfg.overrides = std::move(overrides);
    return run_experiment(cfg);
}

bool has_artifact(const ExperimentReport& rep, const std::string& prefix) {
    for (const auto& a : rep.artifacts)
        if (a.path.rfind(prefix, 0) == 0) return true;
    return false;
}

const char* cli() { return std::getenv("PORDER_CLI"); }

struct Shell {
    int code;
    std::string out;
};

Shell sh(const std::string& args) {
    const fs::path out = fs::temp_directory_path() / "porder_cli_stdout.txt";
    const std::string cmd = std::string(cli()) + " " + args + " > " + out.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(status), ss.str()};
}

fs::path fresh_dir(const std::string& name) {
    fs::path d = fs::temp_directory_path() / name;
    fs::remove_all(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Registry, ListsExperiments) {
    for (const char* n : {"fig2_newton_fracpower", "fig3_newton_lith", "fig4_gd_frac", "fig5_kpoint_holder",
                          "thm41_spectral", "counterexamples_s34"}) {
        const auto& e = find_experiment(n);
        EXPECT_TRUE(e.defaults.contains("precision")) << n;
        EXPECT_FALSE(e.description.empty()) << n;
    }
    EXPECT_THROW(find_experiment("nope"), ConfigError);
}

TEST(Config, RejectsUnknownKeysAndBadTypes) {
    EXPECT_THROW(run("fig5_kpoint_holder", {{"bogus", 1}}), ConfigError);
    EXPECT_THROW(run("fig5_kpoint_holder", {{"tol", "loose"}}), ConfigError);
    EXPECT_THROW(run("fig5_kpoint_holder", {{"K_values", 3}}), ConfigError);
    EXPECT_THROW(run("fig5_kpoint_holder", {{"precision", 64}}), ConfigError);
    EXPECT_THROW(parse_format("xml"), ConfigError);
}

TEST(Config, OverridesReplaceDefaults) {
    auto rep = run("fig5_kpoint_holder", {{"K_values", {2}}, {"nu_values", {1.0}}});
    ASSERT_EQ(rep.runs.size(), 1u);
    EXPECT_EQ(rep.runs[0].params["K"], 2);
}

TEST(Experiments, Fig5PassesWithDefaults) {
    auto rep = run("fig5_kpoint_holder");
    EXPECT_EQ(rep.runs.size(), 6u);
    for (const auto& r : rep.runs) EXPECT_TRUE(r.pass) << r.name << ": " << r.reason;
}

TEST(Experiments, CounterexamplesPassWithDefaults) {
    auto rep = run("counterexamples_s34");
    EXPECT_EQ(rep.runs.size(), 3u);
    for (const auto& r : rep.runs) EXPECT_TRUE(r.pass) << r.name << ": " << r.reason;
}

// A run passes only when its gap is within tolerance.
TEST(ExperimentsProperty, ReportSoundness) {
    for (const char* n : {"fig5_kpoint_holder", "counterexamples_s34"}) {
        for (const auto& r : run(n).runs) {
            if (!r.pass) continue;
            EXPECT_TRUE(std::isfinite(r.gap)) << r.name;
            EXPECT_LE(r.gap, r.tolerance) << r.name;
            EXPECT_TRUE(r.reason.empty()) << r.name;
        }
    }
    auto tight = run("fig5_kpoint_holder", {{"tol", 1e-12}});
    EXPECT_FALSE(tight.pass());
    for (const auto& r : tight.runs) {
        if (!r.pass) {
            EXPECT_NE(r.reason.find("exceeds tolerance"), std::string::npos) << r.reason;
        }
    }
}

TEST(ExperimentsProperty, Deterministic) {
    auto a = to_json(run("thm41_spectral", {{"matrices", 4}})).dump();
    auto b = to_json(run("thm41_spectral", {{"matrices", 4}})).dump();
    EXPECT_EQ(a, b);
    auto c = run("fig5_kpoint_holder"), d = run("fig5_kpoint_holder");
    ASSERT_EQ(c.artifacts.size(), d.artifacts.size());
    for (std::size_t i = 0; i < c.artifacts.size(); ++i) EXPECT_EQ(c.artifacts[i].content, d.artifacts[i].content);
}

TEST(ExperimentsProperty, FailedRunKeepsSiblingArtifacts) {
    auto rep = run("fig5_kpoint_holder", {{"K_values", {2}}, {"nu_values", {0.5, 2.0}}});
    ASSERT_EQ(rep.runs.size(), 2u);
    EXPECT_TRUE(rep.runs[0].pass) << rep.runs[0].reason;
    EXPECT_FALSE(rep.runs[1].pass);
    EXPECT_FALSE(rep.runs[1].reason.empty());
    EXPECT_TRUE(has_artifact(rep, rep.runs[0].name));
}

TEST(Experiments, FormatSelectsArtifacts) {
    json o{{"K_values", {2}}, {"nu_values", {1.0}}};
    ExperimentConfig cfg{"fig5_kpoint_holder", o, "", OutputFormat::json};
    for (const auto& a : run_experiment(cfg).artifacts) EXPECT_EQ(a.path.find("_errors.csv"), std::string::npos);
    cfg.format = OutputFormat::both;
    auto rep = run_experiment(cfg);
    bool csv = false, js = false;
    for (const auto& a : rep.artifacts) {
        csv |= a.path.find("_errors.csv") != std::string::npos;
        js |= a.path.find("_errors.json") != std::string::npos;
    }
    EXPECT_TRUE(csv && js);
}

TEST(Cli, ExitCodes) {
    if (!cli()) GTEST_SKIP() << "PORDER_CLI not set";
    auto dir = fresh_dir("porder_cli_ok");
    auto ok = sh("run counterexamples_s34 --out " + dir.string());
    EXPECT_EQ(ok.code, 0) << ok.out;
    EXPECT_TRUE(fs::exists(dir / "counterexamples_s34" / "report.json"));

    auto bad = sh("run fig5_kpoint_holder --set tol=1e-12 --out " + fresh_dir("porder_cli_fail").string());
    EXPECT_EQ(bad.code, 1) << bad.out;
    EXPECT_NE(bad.out.find("FAIL"), std::string::npos);

    EXPECT_EQ(sh("run no_such_experiment").code, 2);
    EXPECT_EQ(sh("run fig5_kpoint_holder --set bogus=1").code, 2);
    EXPECT_EQ(sh("frobnicate").code, 2);
    EXPECT_EQ(sh("list").code, 0);
}

TEST(Cli, ConfigFileAndSetPrecedence) {
    if (!cli()) GTEST_SKIP() << "PORDER_CLI not set";
    auto cfg = fs::temp_directory_path() / "porder_cfg.json";
    std::ofstream(cfg) << R"({"K_values": [2], "nu_values": [1.0], "tol": 1e-12})";
    auto dir = fresh_dir("porder_cli_cfg");
    auto r = sh("run fig5_kpoint_holder --config " + cfg.string() + " --set tol=0.05 --out " + dir.string());
    EXPECT_EQ(r.code, 0) << r.out;
    auto rep = json::parse(slurp(dir / "fig5_kpoint_holder" / "report.json"));
    ASSERT_EQ(rep["runs"].size(), 1u);
    EXPECT_DOUBLE_EQ(rep["runs"][0]["tolerance"].get<double>(), 0.05);
}

TEST(Cli, OutputIsByteIdentical) {
    if (!cli()) GTEST_SKIP() << "PORDER_CLI not set";
    auto a = fresh_dir("porder_det_a"), b = fresh_dir("porder_det_b");
    ASSERT_EQ(sh("run fig5_kpoint_holder --format both --out " + a.string()).code, 0);
    ASSERT_EQ(sh("run fig5_kpoint_holder --format both --out " + b.string()).code, 0);
    int files = 0;
    for (const auto& f : fs::directory_iterator(a / "fig5_kpoint_holder")) {
        EXPECT_EQ(slurp(f.path()), slurp(b / "fig5_kpoint_holder" / f.path().filename())) << f.path();
        ++files;
    }
    EXPECT_GT(files, 6);
}

TEST(Cli, ClassifyAndCharRoot) {
    if (!cli()) GTEST_SKIP() << "PORDER_CLI not set";
    ErrorSequence s("geometric");
    for (long k = 0; k <= 200; ++k) s.push_lambda(k, XReal(k) * ln(XReal(2L)));
    auto file = fs::temp_directory_path() / "porder_geometric.csv";
    {
        std::ofstream out(file);
        write_csv(out, s);
    }
    auto c = sh("classify " + file.string());
    ASSERT_EQ(c.code, 0) << c.out;
    auto j = json::parse(c.out);
    EXPECT_EQ(j["best_model"].get<std::string>().rfind("Power(1", 0), 0u) << j["best_model"];
    EXPECT_NEAR(j["fitted_base"].get<double>(), 0.5, 1e-6);

    auto r3 = sh("charroot -K 3 --nu 1");
    EXPECT_EQ(r3.code, 0);
    EXPECT_NEAR(std::stod(r3.out), 1.839286755214161, 1e-12);
    EXPECT_NEAR(std::stod(sh("charroot -K 4 --nu 1").out), 1.927561975482925, 1e-12);
    EXPECT_EQ(sh("charroot -K 1 --nu 1").code, 2);
    EXPECT_NE(sh("classify /nonexistent/seq.csv").code, 0);
}
