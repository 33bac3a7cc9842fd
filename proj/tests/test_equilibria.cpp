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
#include "apis/campaign.hpp"
#include "apis/interior.hpp"
#include "apis/scenarios.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace apis;

namespace {

double scale_of(const State& x)
{
    return std::max({1.0, x.S_h, x.I_h, x.S_m, x.I_m});
}

} // namespace

TEST(Equilibria, AllResidualsSmall)
{
    for (const char* id : {"fig1_dm009", "fig2_full", "fig3_full"}) {
        const Params& p = preset(id).params;
        for (SystemId sys : all_systems) {
            for (const auto& e : equilibria(sys, p)) {
                EXPECT_LE(e.residual, 1e-7 * scale_of(e.location)) << id << " " << name(sys) << " "
                                                                    << e.existence_condition;
            }
        }
    }
}

TEST(Equilibria, ExtinctionIsASink)
{
    const Params& p = preset("fig2_full").params;
    for (SystemId sys : all_systems) {
        EXPECT_EQ(extinction_point(sys, p).cls, StabilityClass::Sink) << name(sys);
    }
}

TEST(Equilibria, VirusFreeInteriorFig2)
{
    const Params& p = preset("fig2_full").params;
    bool found      = false;
    for (const auto& e : equilibria_virus_free(p)) {
        if (e.existence_condition == "interior") {
            found = true;
            EXPECT_NEAR(e.location.S_h, 4000, 1e-9);
            EXPECT_NEAR(e.location.S_m, 40.588235294, 1e-6);
            EXPECT_EQ(e.cls, StabilityClass::Sink); // H* = 4000 > sqrt(K_hat) = 1000
        }
    }
    EXPECT_TRUE(found);
}

TEST(Equilibria, MiteFreeInteriorPairFig3)
{
    const Params& p = preset("fig3_mitefree").params;
    auto pts        = mite_free_interior_points(p);
    ASSERT_EQ(pts.size(), 2u);
    for (auto [S, I] : pts) {
        EXPECT_NEAR(S / I, 5.0, 1e-12);
        EXPECT_LE(max_abs_rhs(SystemId::MiteFree, State{S, I, 0, 0}, p), 1e-8 * S);
    }
}

TEST(Equilibria, EigenvaluesAgreeWithTables)
{
    // the table rows use threshold comparisons only; the eigen route uses the Jacobian
    std::vector<Params> cases{preset("fig2_full").params, preset("fig3_full").params, preset("fig1_dm009").params,
                              preset("fig3_virusfree_k160001").params};
    for (std::size_t i = 0; i < 40; ++i) {
        cases.push_back(sample_draw(99, i).p);
    }
    std::size_t compared = 0;
    for (const Params& p : cases) {
        for (SystemId sys : {SystemId::VirusFree, SystemId::MiteFree}) {
            for (const auto& e : equilibria(sys, p)) {
                const StabilityClass t = table_class(e, p);
                if (t == StabilityClass::Nonhyperbolic) {
                    continue;
                }
                EXPECT_EQ(e.cls, t) << name(sys) << " " << e.existence_condition;
                ++compared;
            }
        }
    }
    EXPECT_GT(compared, 100u);
}

TEST(Equilibria, AnalyticAndNumericJacobiansAgreeAtEquilibria)
{
    // fig2 has R0_V < 1, so the mite-free closed form is only exercised on fig3
    const Params& p = preset("fig3_full").params;
    for (SystemId sys : {SystemId::VirusFree, SystemId::MiteFree}) {
        for (const auto& e : equilibria(sys, p)) {
            if (e.existence_condition == "extinction" ||
                (sys == SystemId::MiteFree && e.existence_condition.rfind("interior", 0) != 0)) {
                continue;
            }
            auto v        = project(sys, e.location);
            auto a        = jacobian(sys, std::span<const double>(v), p, JacobianMode::Analytic);
            auto n        = jacobian(sys, std::span<const double>(v), p, JacobianMode::Numeric);
            const double s = std::max(1.0, n.cwiseAbs().maxCoeff());
            EXPECT_LE((a - n).cwiseAbs().maxCoeff() / s, 1e-6) << name(sys) << " " << e.existence_condition;
        }
    }
}

TEST(Equilibria, HopfBoundaryOnFig1)
{
    // d_m/(alpha c) = sqrt(K_hat) at d_m = 0.1
    const auto scan = hopf_scan(preset("fig1").params, "d_m", 0.05, 0.15, 0.001);
    ASSERT_EQ(scan.crossings.size(), 1u);
    EXPECT_NEAR(scan.crossings[0].value, 0.1, 1e-9);
    EXPECT_TRUE(scan.crossings[0].trace_changes_sign);
    EXPECT_THROW(hopf_scan(preset("fig1").params, "r", 1, 2, 0.1), DomainError);
    EXPECT_THROW(hopf_scan(preset("fig1").params, "d_m", 2, 1, 0.1), DomainError);
}

TEST(Equilibria, Fig1InteriorIsNonhyperbolic)
{
    const Params& p = preset("fig1").params;
    for (const auto& e : equilibria_virus_free(p)) {
        if (e.existence_condition == "interior") {
            EXPECT_EQ(table_class(e, p), StabilityClass::Nonhyperbolic);
            EXPECT_NEAR(e.location.S_h, 2000, 1e-9);
            EXPECT_NEAR(e.location.S_m, 73, 0.5);
        }
    }
}

TEST(Equilibria, HealthyMiteFreeInteriorFig2)
{
    const auto rep = interior_healthy_mite_free(preset("fig2_full").params);
    ASSERT_EQ(rep.roots.size(), 1u);
    const auto& e = rep.roots[0].equilibrium;
    EXPECT_NEAR(e.location.S_h, 2781.94, 0.01);
    EXPECT_NEAR(e.location.I_h, 1618.06, 0.01);
    EXPECT_NEAR(e.location.I_m, 27.23, 0.01);
    EXPECT_EQ(e.cls, StabilityClass::Sink);
    // the HVMI face is listed among the full equilibria too
    bool listed = false;
    for (const auto& f : equilibria(SystemId::Full, preset("fig2_full").params)) {
        listed = listed || f.existence_condition == "healthy-mite-free-interior";
    }
    EXPECT_TRUE(listed);
}
