#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include "cli.hpp"

namespace {

using Json = nlohmann::ordered_json;

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "cmcgap");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cmcgap::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

Json run_json(const std::vector<std::string>& args) {
    const auto r = run(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return Json::parse(r.out);
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("cmcgap_cli_" + name);
}

}  // namespace

TEST(Cli, MetricInfoHyperbolic) {
    const auto j = run_json({"metric-info", "--metric", "hyperbolic", "--r", "0.5"});
    EXPECT_EQ(j["meta"]["command"], "metric-info");
    EXPECT_EQ(j["meta"]["config_hash"].get<std::string>().size(), 16u);
    EXPECT_EQ(j["config"]["metric"]["kind"], "hyperbolic");
    EXPECT_TRUE(j["result"].dump().find("distance") != std::string::npos);
}

TEST(Cli, IntegrateCatenoidSelfCheck) {
    const auto j = run_json({"integrate", "--x0", "1", "--t-end", "2", "--tol", "1e-10"});
    EXPECT_LE(j["result"]["self_check"]["max_error"].get<double>(), 1e-8);
}

TEST(Cli, FreeBoundaryCatenoid) {
    const auto j = run_json({"find-free-boundary", "--x0", "1"});
    EXPECT_NEAR(j["result"]["parameter"].get<double>(), 1.1996786402576960, 1e-10);
}

TEST(Cli, ConfigFileWithOverride) {
    const auto path = temp_file("config.json");
    {
        std::ofstream f(path);
        f << R"({"x0": 2.0, "lo": 1.0, "hi": 4.0, "tol": 1e-12})";
    }
    const auto a = run_json({"find-free-boundary", "--config", path.string()});
    EXPECT_NEAR(a["result"]["parameter"].get<double>(), 2 * 1.1996786402576960, 1e-9);
    const auto b = run_json({"find-free-boundary", "--config", path.string(), "--x0", "1", "--lo", "0.5",
                             "--hi", "2"});
    EXPECT_NEAR(b["result"]["parameter"].get<double>(), 1.1996786402576960, 1e-10);
    EXPECT_EQ(b["config"]["x0"], 1.0);
    EXPECT_NE(a["meta"]["config_hash"], b["meta"]["config_hash"]);
    std::filesystem::remove(path);
}

TEST(Cli, ThreadsDoNotChangeOutput) {
    const auto a = run({"gap-interval", "--x0", "0.3,0.45,0.9", "--threads", "1"});
    const auto b = run({"gap-interval", "--x0", "0.3,0.45,0.9", "--threads", "4"});
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, CsvAndTableFormats) {
    const auto csv = run({"phi-table", "--metric", "gaussian", "--s-max", "1", "--n", "16", "--format", "csv"});
    ASSERT_EQ(csv.code, 0) << csv.err;
    EXPECT_EQ(csv.out.rfind("# ", 0), 0u);
    EXPECT_NE(csv.out.find("s,phi,dphi,d2phi,t\n"), std::string::npos);
    const auto table = run({"find-free-boundary", "--format", "table"});
    EXPECT_EQ(table.code, 0);
    EXPECT_NE(table.out.find("parameter"), std::string::npos);
}

TEST(Cli, OutputFile) {
    const auto path = temp_file("out.json");
    const auto r = run({"example", "--x0", "0.45", "-o", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream f(path);
    const auto j = Json::parse(f);
    EXPECT_EQ(j["result"]["gap"]["verdict"], "holds");
    EXPECT_FALSE(j["config"].contains("output"));
    std::filesystem::remove(path);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({"integrate", "--x0", "-1"}).code, 2);
    EXPECT_EQ(run({"integrate", "--metric", "lorentzian"}).code, 2);
    EXPECT_EQ(run({"integrate", "--no-such-flag"}).code, 2);
    EXPECT_EQ(run({"integrate", "--metric", "gaussian", "--mode", "arclength", "--x0", "2", "--max-s", "4"}).code,
              3);
    EXPECT_EQ(run({"gap-check", "--metric", "gaussian", "--x0", "1.9", "--t-end", "1"}).code, 4);
    EXPECT_EQ(run({"find-free-boundary", "--lo", "0.1", "--hi", "0.2"}).code, 5);
    EXPECT_EQ(run({"gap-interval", "--x0", "1.2"}).code, 2);
    EXPECT_EQ(run({"example", "--metric", "hyperbolic"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, GapCheckLeavingSigmaDomain) {
    const auto r = run({"gap-check", "--metric", "gaussian", "--x0", "1.9", "--xp0", "1", "--t-end", "1",
                        "--sample-step", "0.05"});
    EXPECT_EQ(r.code, 4);
    const auto j = Json::parse(r.out);
    EXPECT_EQ(j["result"]["report"]["verdict"], "fails");
    EXPECT_GT(j["result"]["report"]["sigma_violations"].get<int>(), 0);
    EXPECT_FALSE(j["result"]["report"]["fails_at"].empty());
}

TEST(Cli, ErrorsGoToStderr) {
    const auto r = run({"find-free-boundary", "--lo", "0.1", "--hi", "0.2"});
    EXPECT_TRUE(r.out.empty());
    EXPECT_NE(r.err.find("g("), std::string::npos);
}

TEST(Cli, BinaryRuns) {
    const auto path = temp_file("binary.json");
    const std::string cmd = std::string(CMCGAP_TOOL_PATH) + " find-free-boundary -o " + path.string();
    const int status = std::system(cmd.c_str());
    ASSERT_TRUE(WIFEXITED(status));
    EXPECT_EQ(WEXITSTATUS(status), 0);
    std::ifstream f(path);
    EXPECT_EQ(Json::parse(f)["meta"]["tool"], "cmcgap");
    std::filesystem::remove(path);

    const std::string bad = std::string(CMCGAP_TOOL_PATH) + " integrate --x0 -1 2>/dev/null";
    const int bad_status = std::system(bad.c_str());
    ASSERT_TRUE(WIFEXITED(bad_status));
    EXPECT_EQ(WEXITSTATUS(bad_status), 2);
}
