// Copyright 2026 The OAMNet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// End-to-end checks of the command-line tool: output content, CSV artifacts,
// determinism and the exit-code contract (0 ok, 1 simulation failure,
// 2 config error).

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string g_cli_path;

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    std::string cmd = g_cli_path + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    EXPECT_NE(pipe, nullptr);
    std::string output;
    char buf[512];
    while (fgets(buf, sizeof buf, pipe)) output += buf;
    int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

fs::path sandbox() {
    fs::path dir = fs::temp_directory_path() / "oamnet_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& body) {
    fs::path path = dir / name;
    std::ofstream out(path);
    out << body;
    return path;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string configs_dir() { return std::string(OAMNET_SOURCE_DIR) + "/configs"; }

}  // namespace

TEST(Cli, PlanPrintsReferenceChartAndWritesCsv) {
    fs::path dir = sandbox();
    RunResult r = run("plan --config " + configs_dir() + "/fully_connected.json --out " +
                      dir.string());
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("A\t0\t1\t2\t3"), std::string::npos);
    EXPECT_NE(r.output.find("B\t3\t0\t1\t2"), std::string::npos);
    EXPECT_NE(r.output.find("resources: 1x U_4"), std::string::npos);
    std::string csv = slurp(dir / "assignment.csv");
    EXPECT_NE(csv.find("# schema: oamnet.assignment v1"), std::string::npos);
    EXPECT_NE(csv.find("sender,group,receiver,oam_label,signed_oam"), std::string::npos);
}

TEST(Cli, PlanRejectsNonCoprimeDims) {
    fs::path dir = sandbox();
    fs::path bad = write_config(dir, "bad.json",
                                R"({"architecture": "p2mp-coprime", "dims": {"d_s": 4, "d_r": 6}})");
    RunResult r = run("plan --config " + bad.string() + " --out " + dir.string());
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.output.find("coprime"), std::string::npos);
}

TEST(Cli, SimulateIdealNetworkExitsZeroWithAllOnes) {
    fs::path dir = sandbox();
    fs::path cfg =
        write_config(dir, "n5.json", R"({"architecture": "fully-connected", "dims": {"n": 5}})");
    RunResult r = run("simulate --config " + cfg.string() + " --include-self");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("pairs: 25"), std::string::npos);
    EXPECT_NE(r.output.find("min probability: 1"), std::string::npos);
}

TEST(Cli, SimulateNoisySorterWarnsAndReportsCitedProbability) {
    RunResult r = run("simulate --config " + configs_dir() + "/fully_connected_noisy.json");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("warning"), std::string::npos);
    // min probability 0.9616 > 0.96 for a 2π/15 arm error at d = 3.
    EXPECT_NE(r.output.find("min probability: 0.9615"), std::string::npos);
}

TEST(Cli, MalformedConfigExitsTwo) {
    fs::path dir = sandbox();
    fs::path bad = write_config(dir, "broken.json", "{ not json");
    RunResult r = run("simulate --config " + bad.string());
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.output.find("error"), std::string::npos);

    fs::path unknown = write_config(dir, "unknown.json",
                                    R"({"architecture": "fully-connected", "dims": {"n": 4}, "x": 1})");
    EXPECT_EQ(run("simulate --config " + unknown.string()).exit_code, 2);

    EXPECT_EQ(run("simulate --config /missing.json").exit_code, 2);
    EXPECT_EQ(run("bogus-subcommand").exit_code, 2);
}

TEST(Cli, SweepSingleZeroMagnitudeRowIsExactlyOne) {
    fs::path dir = sandbox();
    fs::path cfg = write_config(dir, "zero.json", R"({
        "architecture": "fully-connected", "dims": {"n": 3},
        "sweep": {"magnitudes": [0.0], "samples": 4}
    })");
    RunResult r = run("sweep --config " + cfg.string() + " --out " + dir.string());
    EXPECT_EQ(r.exit_code, 0);
    std::string csv = slurp(dir / "sweep.csv");
    EXPECT_NE(csv.find("magnitude,mean_prob,min_prob,samples"), std::string::npos);
    EXPECT_NE(csv.find("0,1,1,4"), std::string::npos);
}

TEST(Cli, SweepRerunsAreByteIdentical) {
    fs::path dir = sandbox();
    RunResult a = run("sweep --config " + configs_dir() + "/fully_connected_sweep.json --out " +
                      dir.string() + " --seed 7 --force");
    EXPECT_EQ(a.exit_code, 0);
    std::string first = slurp(dir / "sweep.csv");
    RunResult b = run("sweep --config " + configs_dir() + "/fully_connected_sweep.json --out " +
                      dir.string() + " --seed 7 --force");
    EXPECT_EQ(b.exit_code, 0);
    EXPECT_EQ(first, slurp(dir / "sweep.csv"));
    EXPECT_FALSE(first.empty());

    // The cited magnitude stays above the cited probability.
    EXPECT_NE(first.find("0.418879020479,0.96"), std::string::npos);
}

TEST(Cli, SweepEmptyGridIsConfigError) {
    fs::path dir = sandbox();
    fs::path cfg = write_config(dir, "empty.json", R"({
        "architecture": "fully-connected", "dims": {"n": 3},
        "sweep": {"magnitudes": [], "samples": 4}
    })");
    EXPECT_EQ(run("sweep --config " + cfg.string() + " --out " + dir.string()).exit_code, 2);
}

TEST(Cli, ProtocolPrintsSummariesAndGuardsMismatch) {
    fs::path dir = sandbox();
    RunResult bb = run("protocol --config " + configs_dir() + "/point_to_point.json --out " +
                       dir.string());
    EXPECT_EQ(bb.exit_code, 0);
    EXPECT_NE(bb.output.find("QBER 0,"), std::string::npos);

    fs::path active = write_config(dir, "active.json", R"({
        "architecture": "ent-active", "dims": {"d": 3},
        "protocol": {"type": "active-ent", "pair": [0, 2]}
    })");
    RunResult ae = run("protocol --config " + active.string() + " --out " + dir.string());
    EXPECT_EQ(ae.exit_code, 0);
    EXPECT_NE(ae.output.find("Bell fidelity 1, ports (0,2)"), std::string::npos);

    // Histogram for a d = 3 passive network: 9 rows, each 1/9.
    RunResult pe = run("protocol --config " + configs_dir() + "/ent_passive.json --out " +
                       dir.string());
    EXPECT_EQ(pe.exit_code, 0);
    std::string hist = slurp(dir / "coincidences.csv");
    int rows = 0;
    for (size_t pos = 0; (pos = hist.find("0.111111111111", pos)) != std::string::npos; ++pos) ++rows;
    EXPECT_EQ(rows, 9);

    // BBM92 needs an entanglement-distribution spec.
    fs::path mismatch = write_config(dir, "mismatch.json", R"({
        "architecture": "fully-connected", "dims": {"n": 4},
        "protocol": {"type": "bbm92", "pair": [0, 1]}
    })");
    EXPECT_EQ(run("protocol --config " + mismatch.string() + " --out " + dir.string()).exit_code, 2);
}

TEST(Cli, RefusesToOverwriteWithoutForce) {
    fs::path dir = sandbox();
    std::string cmd = "plan --config " + configs_dir() + "/fully_connected.json --out " + dir.string();
    EXPECT_EQ(run(cmd).exit_code, 0);
    RunResult second = run(cmd);
    EXPECT_EQ(second.exit_code, 2);
    EXPECT_NE(second.output.find("--force"), std::string::npos);
    EXPECT_EQ(run(cmd + " --force").exit_code, 0);
}

int main(int argc, char** argv) {
    ::testing::InitGoogleTest(&argc, argv);
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-oamnet-binary>\n");
        return 1;
    }
    g_cli_path = argv[1];
    return RUN_ALL_TESTS();
}
