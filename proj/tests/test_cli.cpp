// Copyright 2026 The adaptq Authors
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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string output;  // stdout and stderr
};

Result cli(const std::string &args) {
    const std::string cmd = std::string(ADAPTQ_CLI) + " " + args + " 2>&1";
    FILE *p = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path &p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path fresh(const std::string &name) {
    const auto p = fs::temp_directory_path() / ("adaptq_cli_" + name);
    fs::remove_all(p);
    return p;
}

const std::string kTiny = " --paths 40 --horizon 0.05 --stride 25";

}  // namespace

TEST(Cli, SameInvocationSameBytes) {
    const auto a = fresh("a"), b = fresh("b"), c = fresh("c");
    ASSERT_EQ(cli("run --preset fig2 --seed 42" + kTiny + " --out " + a.string()).code, 0);
    ASSERT_EQ(cli("run --preset fig2 --seed 42" + kTiny + " --out " + b.string()).code, 0);
    ASSERT_EQ(cli("run --preset fig2 --seed 42 --workers 8" + kTiny + " --out " + c.string()).code, 0);
    for (const char *f : {"robust.stats.csv", "jacobs.stats.csv"}) {
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
        EXPECT_EQ(slurp(a / f), slurp(c / f)) << f;
    }
    const auto d = fresh("d");
    ASSERT_EQ(cli("run --config " + (a / "manifest.json").string() + " --out " + d.string()).code, 0);
    EXPECT_EQ(slurp(a / "robust.stats.csv"), slurp(d / "robust.stats.csv"));
    for (const auto &p : {a, b, c, d}) fs::remove_all(p);
}

TEST(Cli, ConfigErrorsExitTwoAndNameTheField) {
    auto r = cli("run --preset fig2 --dt -1");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.output.find("'dt'"), std::string::npos) << r.output;
    r = cli("run --preset fig2 --tier bogus");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.output.find("'tier'"), std::string::npos) << r.output;
    r = cli("run --preset nope");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.output.find("'preset'"), std::string::npos) << r.output;
    const auto cfg = fresh("cfg.ini");
    std::ofstream(cfg) << "[run x]\nscheme = robust\nkappa = 3\n";
    r = cli("run --config " + cfg.string());
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.output.find("'kappa'"), std::string::npos) << r.output;
    fs::remove(cfg);
    EXPECT_EQ(cli("run").code, 2);
    EXPECT_EQ(cli("frobnicate").code, 2);
    EXPECT_EQ(cli("--help").code, 0);
}

TEST(Cli, IntegrationErrorsExitThreeWithPathAndStep) {
    const auto out = fresh("bad");
    const auto r = cli("run --preset fig4 --tier matrix_coupled --dt 0.01 --paths 4 --horizon 1 --out " + out.string());
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.output.find("path 0"), std::string::npos) << r.output;
    EXPECT_NE(r.output.find("step"), std::string::npos) << r.output;
    fs::remove_all(out);
}

TEST(Cli, SweepWritesIndex) {
    const auto out = fresh("sweep");
    const auto r = cli("sweep --preset fig4 --param Delta_nominal --values 0.001,0.01" + kTiny + " --out " + out.string());
    ASSERT_EQ(r.code, 0) << r.output;
    EXPECT_TRUE(fs::exists(out / "index.csv"));
    EXPECT_TRUE(fs::exists(out / "Delta_nominal_0.001" / "jacobs.stats.csv"));
    EXPECT_TRUE(fs::exists(out / "Delta_nominal_0.01" / "robust.paths.csv"));
    fs::remove_all(out);
}

TEST(Cli, VerifyPassesAndCatchesInjectedFaults) {
    auto r = cli("verify");
    EXPECT_EQ(r.code, 0) << r.output;
    EXPECT_NE(r.output.find("oracle_equivalence"), std::string::npos);
    r = cli("verify --inject-innovation-flip");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.output.find("oracle_equivalence"), std::string::npos);
    r = cli("verify --dt 1e-2");
    EXPECT_EQ(r.code, 1) << r.output;
}
