/*
* Copyright (C) 2026 The apis authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#include <gtest/gtest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args)
{
    const std::string cmd = std::string(APIS_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe            = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        return {-1, ""};
    }
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        out.append(buf.data(), n);
    }
    const int st = pclose(pipe);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

bool has_line(const std::string& out, const std::string& line)
{
    return ("\n" + out).find("\n" + line + "\n") != std::string::npos;
}

std::string cfg(const char* f)
{
    return std::string(APIS_CONFIG_DIR) + "/" + f;
}

} // namespace

TEST(Cli, Thresholds)
{
    auto r = run("thresholds --params " + cfg("fig2.cfg"));
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(has_line(r.out, "R0_V=0.96")) << r.out;
    EXPECT_TRUE(has_line(r.out, "H_star=4000")) << r.out;
    EXPECT_TRUE(has_line(r.out, "a=undefined")) << r.out;
    auto d = run("thresholds --preset fig2_full --format doc");
    ASSERT_EQ(d.code, 0);
    EXPECT_DOUBLE_EQ(nlohmann::json::parse(d.out)["H_star"].get<double>(), 4000.0);
}

TEST(Cli, Overrides)
{
    auto r = run("thresholds --params " + cfg("fig2.cfg") + " --set beta_h=0.5");
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(has_line(r.out, "R0_V=2")) << r.out;
}

TEST(Cli, MissingParamsIsAValidationError)
{
    auto r = run("simulate --sys full --params none");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("error=validation"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("missing params"), std::string::npos) << r.out;
}

TEST(Cli, BadInputs)
{
    EXPECT_EQ(run("simulate --preset fig2_full --x0 1,2,3").code, 2);
    EXPECT_EQ(run("simulate --preset fig2_full --params " + cfg("fig2.cfg")).code, 2);
    EXPECT_EQ(run("thresholds --params " + cfg("missing.cfg")).code, 2);
    EXPECT_EQ(run("reproduce nope").code, 2);
    EXPECT_EQ(run("bogus").code, 2);
    EXPECT_EQ(run("simulate --preset fig2_full --set d_h=-1").code, 2);
}

TEST(Cli, Version)
{
    auto r = run("--version");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find('.'), std::string::npos);
}

TEST(Cli, SimulateWritesFiles)
{
    const auto dir = std::filesystem::temp_directory_path() / "apis_cli_sim";
    std::filesystem::remove_all(dir);
    auto r = run("simulate --preset fig2_mitefree --t-end 50 --out " + dir.string());
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(std::filesystem::exists(dir / "trajectory.csv"));
    EXPECT_TRUE(std::filesystem::exists(dir / "events.csv"));
    std::ifstream in(dir / "trajectory.csv");
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "t,S_h,I_h");
    std::filesystem::remove_all(dir);
}

TEST(Cli, ReproduceFig1)
{
    auto r = run("reproduce fig1");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("id=fig1 "), std::string::npos);
    EXPECT_NE(r.out.find("pass=true"), std::string::npos) << r.out;
}

TEST(Cli, Equilibria)
{
    auto r = run("equilibria --preset fig2_full --sys virus-free");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("tag=\"interior\" class=sink"), std::string::npos) << r.out;
}

TEST(Cli, CheckSinglePoint)
{
    auto r = run("check --preset fig2_full --theorem 1");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("clause=T1.a hypothesis=true"), std::string::npos) << r.out;
}

TEST(Cli, Hopf)
{
    auto r = run("hopf --preset fig1 --parameter d_m --lo 0.05 --hi 0.15 --step 0.001");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(has_line(r.out, "crossings=1")) << r.out;
}

TEST(Cli, Sweep)
{
    const auto dir = std::filesystem::temp_directory_path() / "apis_cli_sweep";
    std::filesystem::remove_all(dir);
    auto r = run("sweep --preset fig1 --sys virus-free --x0 2200,87 --t-end 100 --axis d_m:0.08:0.12:3 --out " +
                 dir.string());
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(std::filesystem::exists(dir / "sweep.csv"));
    std::ifstream m(dir / "sweep_manifest.json");
    EXPECT_EQ(nlohmann::json::parse(m)["axes"].size(), 1u);
    EXPECT_EQ(run("sweep --preset fig1 --axis d_m:1:0:3").code, 2);
    std::filesystem::remove_all(dir);
}
