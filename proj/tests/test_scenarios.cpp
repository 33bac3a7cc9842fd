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
#include "apis/scenarios.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <set>
#include <sstream>

using namespace apis;

namespace {
constexpr std::uint64_t PINNED_CHECKSUM = 9190742075194732221ull;
}

TEST(Scenarios, TableIsPinned)
{
    // any edit to a preset value, initial state, horizon or expectation changes this
    EXPECT_EQ(preset_checksum(), PINNED_CHECKSUM);
    EXPECT_EQ(presets().size(), 9u);
    std::set<std::string> ids;
    for (auto& s : presets()) {
        EXPECT_TRUE(ids.insert(s.id).second) << s.id;
        EXPECT_NO_THROW(s.params.validate()) << s.id;
    }
    EXPECT_THROW(preset("nope"), DomainError);
}

TEST(Scenarios, Fig1CollapseThroughGrowingOscillations)
{
    const auto r = reproduce(preset("fig1"));
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.trajectory.outcome.label, OutcomeLabel::CatastrophicCollapse);
    ASSERT_TRUE(r.trajectory.outcome.collapse_time);
    EXPECT_GT(*r.trajectory.outcome.collapse_time, 100.0);
    EXPECT_LT(*r.trajectory.outcome.collapse_time, 500.0);
}

TEST(Scenarios, Fig2Outcomes)
{
    for (const char* id : {"fig2_mitefree", "fig2_virusfree", "fig2_full"}) {
        const auto r = reproduce(preset(id));
        EXPECT_TRUE(r.pass) << id << " got " << name(r.trajectory.outcome.label);
        for (auto& c : r.checks) {
            EXPECT_NE(c.agreement, Agreement::Violated) << id << " " << c.verdict.id();
        }
    }
    // healthy mites die out while infected mites persist
    const auto full = reproduce(preset("fig2_full")).trajectory;
    EXPECT_LT(full.back().S_m, 1e-2);
    EXPECT_GT(full.back().I_m, 1.0);
}

TEST(Scenarios, Fig3Outcomes)
{
    EXPECT_TRUE(reproduce(preset("fig3_mitefree")).pass);
    EXPECT_TRUE(reproduce(preset("fig3_full")).pass);
    EXPECT_TRUE(reproduce(preset("fig3_virusfree_k160001")).pass);
}

TEST(Scenarios, ReproductionFiles)
{
    const auto dir = std::filesystem::temp_directory_path() / "apis_test_repro";
    std::filesystem::remove_all(dir);
    const auto r = reproduce(preset("fig2_mitefree"));
    write_reproduction(r, dir);
    for (const char* f : {"fig2_mitefree_trajectory.csv", "fig2_mitefree_events.csv", "fig2_mitefree_report.json"}) {
        EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
    }
    std::ifstream j(dir / "fig2_mitefree_report.json");
    const Json doc = Json::parse(j);
    EXPECT_EQ(doc["expected"], "DiseaseFreePersistence");
    EXPECT_EQ(doc["pass"], true);
    std::filesystem::remove_all(dir);
}

TEST(Scenarios, SweepGrid)
{
    SweepSpec spec;
    spec.sys     = SystemId::VirusFree;
    spec.base    = preset("fig1").params;
    spec.x0      = State{2200, 0, 87, 0};
    spec.horizon = 300;
    spec.axes    = {{"d_m", 0.08, 0.12, 3}, {"alpha", 0.004, 0.006, 2}};
    const auto cells = sweep(spec, 1);
    ASSERT_EQ(cells.size(), 6u);
    EXPECT_DOUBLE_EQ(cells[0].coords[0], 0.08);
    EXPECT_DOUBLE_EQ(cells[0].coords[1], 0.004);
    EXPECT_DOUBLE_EQ(cells[1].coords[1], 0.006);
    EXPECT_DOUBLE_EQ(cells[5].coords[0], 0.12);
    // d_m = 0.1, alpha = 0.004: H* = 2500 > 2000
    EXPECT_EQ(cells[2].hopf_sign, 1);
    // d_m = 0.08, alpha = 0.006: H* = 1333 < 2000
    EXPECT_EQ(cells[1].hopf_sign, -1);
    std::ostringstream os;
    write_sweep_csv(os, spec, cells);
    EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "cell,d_m,alpha,outcome,hopf_sign,R0_V,error");
    EXPECT_EQ(sweep_manifest(spec)["axes"].size(), 2u);
    // threads do not change results
    const auto again = sweep(spec, 3);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        EXPECT_EQ(cells[i].outcome, again[i].outcome);
    }
}

TEST(Scenarios, SweepValidation)
{
    SweepSpec spec;
    spec.base = preset("fig2_full").params;
    EXPECT_THROW(spec.validate(), DomainError);
    spec.axes = {{"zeta", 0, 1, 2}};
    EXPECT_THROW(spec.validate(), DomainError);
    spec.axes = {{"r", 0, 1, 2000}, {"c", 0, 1, 1000}};
    EXPECT_THROW(spec.validate(), DomainError);
    spec.axes = {{"r", 1, 0, 2}};
    EXPECT_THROW(spec.validate(), DomainError);
}
