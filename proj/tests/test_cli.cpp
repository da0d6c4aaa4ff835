#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

// End-to-end checks of the installed command-line tool: exit codes, output
// formats, and determinism across worker counts.  The binary path is injected
// by the build system.

namespace {

using json = nlohmann::json;

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_command(const std::string& cmd) {
    RunResult r;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (pipe == nullptr) {
        ADD_FAILURE() << "popen failed for: " << cmd;
        return r;
    }
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) r.output.append(buf, got);
    const int status = pclose(pipe);
    if (status == -1 || !WIFEXITED(status)) {
        ADD_FAILURE() << "command did not exit normally: " << cmd;
        return r;
    }
    r.exit_code = WEXITSTATUS(status);
    return r;
}

RunResult run_cli(const std::string& args) {
    return run_command(std::string(LATCERT_CLI_BIN) + " " + args);
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text) n += (c == '\n');
    return n;
}

TEST(CliZeta, CertifiedValueOnStdout) {
    const RunResult r = run_cli("zeta --x 0 --y 1 --s 6 --tol 1e-8");
    EXPECT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("4.6589"), std::string::npos) << r.output;

    const json env = json::parse(r.output);
    EXPECT_EQ(env.at("schema_version").get<std::string>(), "1.0");
    EXPECT_EQ(env.at("command").get<std::string>(), "zeta");
    const json& value = env.at("result").at("value");
    EXPECT_NEAR(value.at("mid").get<double>(), 4.65891361560384344016, 1e-8);
    EXPECT_LE(value.at("rad").get<double>(), 1e-8);
    EXPECT_TRUE(env.at("paper_comparison").is_object());
    EXPECT_TRUE(env.at("timing").contains("wall_ms"));
}

TEST(CliZeta, UnreachableToleranceExitsThree) {
    const RunResult r = run_cli("zeta --x 0 --y 1 --s 6 --tol 1e-13");
    EXPECT_EQ(r.exit_code, 3) << r.output;
    EXPECT_NE(r.output.find("error"), std::string::npos) << r.output;
}

TEST(CliExitCodes, ConfigErrorsExitTwo) {
    // alpha must exceed beta.
    EXPECT_EQ(run_cli("certify --alpha 6 --beta 12").exit_code, 2);
    // Unknown functional.
    EXPECT_EQ(run_cli("scan --functional X").exit_code, 2);
    // Grid step that cannot cover the band.
    EXPECT_EQ(run_cli("scan --functional F --s 4 --delta 0.02").exit_code, 2);
}

TEST(CliExitCodes, ParseErrorsExitTwo) {
    EXPECT_EQ(run_cli("frobnicate").exit_code, 2);
    EXPECT_EQ(run_cli("zeta --y 1 --s 6 --tol abc").exit_code, 2);
    EXPECT_EQ(run_cli("zeta --x 0 --s 6").exit_code, 2);  // missing required --y
}

TEST(CliExitCodes, HelpExitsZero) {
    const RunResult r = run_cli("--help");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("certify"), std::string::npos);
}

TEST(CliCertify, PaperModeExitTracksVerdict) {
    const RunResult r =
        run_cli("certify --alpha 12 --beta 6 --mode paper --delta 0.01 --n 40 --m 181");
    const json env = json::parse(r.output);
    const json& result = env.at("result");
    ASSERT_TRUE(result.at("verdict").is_boolean());
    const bool verdict = result.at("verdict").get<bool>();
    EXPECT_EQ(r.exit_code, verdict ? 0 : 1);

    EXPECT_EQ(result.at("mode").get<std::string>(), "paper");
    EXPECT_DOUBLE_EQ(result.at("M").get<double>(), 181.0);
    const json& cmp = env.at("paper_comparison");
    EXPECT_EQ(cmp.at("y_bar_printed").get<std::string>(), "7.52");
    EXPECT_TRUE(cmp.at("y_bar_matches").get<bool>());
    EXPECT_DOUBLE_EQ(cmp.at("M_printed").get<double>(), 181.0);
}

TEST(CliCertify, ImpossibleMarginExitsOne) {
    const RunResult r =
        run_cli("certify --alpha 12 --beta 6 --margin 1000 --delta 0.25 --max-depth 1");
    EXPECT_EQ(r.exit_code, 1) << r.output;
    const json env = json::parse(r.output);
    const json& result = env.at("result");
    EXPECT_FALSE(result.at("verdict").get<bool>());
    EXPECT_GT(result.at("cells").at("failed").get<int>(), 0);
}

TEST(CliTable1, PrintsComputedAndReferenceColumns) {
    const RunResult r = run_cli("table1 --samples 3 --tol 1e-4");
    EXPECT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("5.23"), std::string::npos);
    EXPECT_NE(r.output.find("nonmatching-as-printed"), std::string::npos);
    // The last tabulated pair rounds to 2.78 while the reference prints 2.77;
    // both must appear, with the mismatch flagged.
    EXPECT_NE(r.output.find("2.78"), std::string::npos);
    EXPECT_NE(r.output.find("2.77"), std::string::npos);

    const json env = json::parse(r.output);
    const json& rows = env.at("result").at("rows");
    ASSERT_EQ(rows.size(), 7u);
    bool saw_mismatch = false;
    for (const auto& row : rows) {
        if (row.contains("y_bar_matches") && !row.at("y_bar_matches").get<bool>())
            saw_mismatch = true;
    }
    EXPECT_TRUE(saw_mismatch);
}

TEST(CliScan, LogWeightedSumCsv) {
    const RunResult r = run_cli("scan --functional F --s 4 --delta 0.1 --n 30 --y-top 1.5");
    EXPECT_EQ(r.exit_code, 0) << r.output;
    EXPECT_EQ(count_lines(r.output), 43);  // header + 6 x 7 grid
    EXPECT_EQ(r.output.rfind("x,y,value\n", 0), 0u);

    // Every data row is three comma-separated finite numbers.
    std::istringstream lines(r.output);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
        char* end = nullptr;
        const double x = std::strtod(line.c_str(), &end);
        ASSERT_EQ(*end, ',') << line;
        const double y = std::strtod(end + 1, &end);
        ASSERT_EQ(*end, ',') << line;
        const double v = std::strtod(end + 1, &end);
        ASSERT_EQ(*end, '\0') << line;
        EXPECT_GE(x, 0.0);
        EXPECT_GE(y, 0.87);
        EXPECT_TRUE(std::isfinite(v));
    }
}

TEST(CliScan, WorkerCountDoesNotChangeOutput) {
    const std::string args = "scan --functional Q --alpha 12 --beta 6 --delta 0.1 --y-top 1.5 --n 25";
    const RunResult serial = run_cli(args + " --workers 1");
    const RunResult env_workers =
        run_command(std::string("LATCERT_WORKERS=3 ") + LATCERT_CLI_BIN + " " + args);
    EXPECT_EQ(serial.exit_code, 0);
    EXPECT_EQ(env_workers.exit_code, 0);
    EXPECT_EQ(serial.output, env_workers.output);
}

TEST(CliEnergy, OptimalVolumeAndPointEnergy) {
    const RunResult vol = run_cli("optimal-volume --alpha 12 --beta 6");
    EXPECT_EQ(vol.exit_code, 0) << vol.output;
    EXPECT_NE(vol.output.find("1.0698"), std::string::npos) << vol.output;
    const json venv = json::parse(vol.output);
    EXPECT_NEAR(venv.at("result").at("volume").get<double>(), 1.06982865316480955, 1e-6);
    EXPECT_NEAR(venv.at("result").at("min_dilated_energy").get<double>(), -1.69106173930553315,
                1e-6);

    const RunResult en = run_cli("energy --volume 1.1");
    EXPECT_EQ(en.exit_code, 0) << en.output;
    const json eenv = json::parse(en.output);
    EXPECT_LT(eenv.at("result").at("value").get<double>(), 0.0);
}

TEST(CliOutput, WritesReportToFile) {
    const std::string path = testing::TempDir() + "latcert_cli_zeta.json";
    std::remove(path.c_str());
    const RunResult r = run_cli("zeta --x 0 --y 1 --s 6 --output " + path);
    EXPECT_EQ(r.exit_code, 0) << r.output;

    std::ifstream in(path);
    ASSERT_TRUE(in.good()) << "missing output file " << path;
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    ASSERT_FALSE(text.empty());
    EXPECT_EQ(text.front(), '{');
    EXPECT_NO_THROW(json::parse(text));
    std::remove(path.c_str());
}

}  // namespace
