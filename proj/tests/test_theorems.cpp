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
#include "apis/scenarios.hpp"
#include "apis/theorems.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace apis;

namespace {

Trajectory flat(SystemId sys, const State& x, double t_end)
{
    Trajectory tr;
    tr.sys    = sys;
    tr.params = preset("fig2_full").params;
    tr.t_end  = t_end;
    for (int k = 0; k <= 100; ++k) {
        tr.t.push_back(t_end * k / 100.0);
        tr.x.push_back(x);
    }
    tr.outcome = classify_outcome(tr, thresholds(tr.params));
    return tr;
}

TheoremVerdict holding(Claim cl, SystemId sys = SystemId::Full)
{
    TheoremVerdict v;
    v.theorem          = "T0";
    v.clause           = "x";
    v.hypothesis       = Tri::True;
    v.hypothesis_holds = true;
    v.predicted.sys    = sys;
    v.predicted.claims = {cl};
    return v;
}

} // namespace

TEST(Theorems, GuardBand)
{
    EXPECT_EQ(compare(1.0, ">", 1.0 + 1e-12), Tri::Boundary);
    EXPECT_EQ(compare(1.0, ">=", 1.0 + 1e-12), Tri::True);
    EXPECT_EQ(compare(1.0, "<", 1.0 + 1e-6), Tri::True);
    EXPECT_EQ(compare(1.0, ">", 1.0 + 1e-6), Tri::False);
    EXPECT_EQ(compare(std::nullopt, ">", 1.0), Tri::Undefined);
    EXPECT_EQ(compare(std::nan(""), "<", 1.0), Tri::Undefined);
    EXPECT_EQ(compare(0.0, ">", 0.0), Tri::Boundary);
}

TEST(Theorems, Conjunction)
{
    auto t = ineq("t", 2.0, ">", 1.0), f = ineq("f", 0.0, ">", 1.0), u = ineq("u", std::nullopt, ">", 1.0),
         b = ineq("b", 1.0, ">", 1.0);
    EXPECT_EQ(conjunction({t, t}), Tri::True);
    EXPECT_EQ(conjunction({t, u, f}), Tri::False);
    EXPECT_EQ(conjunction({t, b, u}), Tri::Undefined);
    EXPECT_EQ(conjunction({t, b}), Tri::Boundary);
    EXPECT_EQ(conjunction({}), Tri::True);
}

TEST(Theorems, ClauseIdsUniqueAndComplete)
{
    const auto& s = preset("fig2_full");
    auto vs       = check_all(s.params, s.x0);
    std::set<std::string> ids, thms;
    for (auto& v : vs) {
        EXPECT_TRUE(ids.insert(v.id()).second) << v.id();
        thms.insert(v.theorem);
    }
    EXPECT_EQ(thms, (std::set<std::string>{"T1", "T2", "T3", "T4", "T5", "T6"}));
    EXPECT_THROW(check_theorem(7, s.params, s.x0), DomainError);
}

TEST(Theorems, Fig2GrowthClausesHold)
{
    const auto& s = preset("fig2_full");
    for (auto& v : check_theorem(1, s.params, s.x0)) {
        if (v.clause == "a" || v.clause == "b") {
            EXPECT_TRUE(v.hypothesis_holds) << v.id();
        }
        if (v.clause == "e") {
            EXPECT_FALSE(v.hypothesis_holds);
        }
    }
}

TEST(Theorems, NoSimulatedViolationsOnFig2)
{
    const auto& s = preset("fig2_full");
    IntegrationConfig cfg;
    cfg.t_end = check_horizon(s.params);
    auto ev   = evaluate_point(s.params, s.x0, cfg);
    EXPECT_TRUE(ev.errors.empty());
    std::size_t confirmed = 0;
    for (auto& r : ev.results) {
        EXPECT_NE(r.agreement, Agreement::Violated) << r.verdict.id() << ": " << r.diagnostics.back();
        confirmed += r.agreement == Agreement::Confirmed;
    }
    EXPECT_GT(confirmed, 3u);
}

TEST(Theorems, ExtinctClaimAgainstPersistentColony)
{
    std::map<SystemId, Trajectory> trs{{SystemId::Full, flat(SystemId::Full, State{4000, 10, 5, 10}, 200)}};
    const Params& p = trs[SystemId::Full].params;
    auto r = cross_validate({holding(Claim{ClaimKind::Extinct, Observable::N_h})}, trs, p);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].agreement, Agreement::Violated);
    r = cross_validate({holding(Claim{ClaimKind::Persistent, Observable::N_h, 3000})}, trs, p);
    EXPECT_EQ(r[0].agreement, Agreement::Confirmed);
    r = cross_validate({holding(Claim{ClaimKind::BoundedAbove, Observable::N_h, 3000})}, trs, p);
    EXPECT_EQ(r[0].agreement, Agreement::Violated);
}

TEST(Theorems, ShortHorizonIsUndetermined)
{
    std::map<SystemId, Trajectory> trs{{SystemId::Full, flat(SystemId::Full, State{4000, 10, 5, 10}, 20)}};
    auto r = cross_validate({holding(Claim{ClaimKind::Extinct, Observable::N_h})}, trs, trs[SystemId::Full].params);
    EXPECT_EQ(r[0].agreement, Agreement::Undetermined);
}

TEST(Theorems, FalseHypothesisIsVacuous)
{
    auto v             = holding(Claim{ClaimKind::Extinct, Observable::N_h});
    v.hypothesis       = Tri::False;
    v.hypothesis_holds = false;
    std::map<SystemId, Trajectory> trs{{SystemId::Full, flat(SystemId::Full, State{4000, 10, 5, 10}, 200)}};
    EXPECT_EQ(cross_validate({v}, trs, trs[SystemId::Full].params)[0].agreement, Agreement::Vacuous);
}

TEST(Theorems, ConvergenceClaims)
{
    const Params p = preset("fig2_full").params;
    const State vf{4000, 0, 40.588235294117645, 0};
    std::map<SystemId, Trajectory> trs{{SystemId::VirusFree, flat(SystemId::VirusFree, vf, 200)}};
    Claim cl{ClaimKind::ConvergesToOneOf, Observable::N_h, 0, {vf}};
    EXPECT_EQ(cross_validate({holding(cl, SystemId::VirusFree)}, trs, p)[0].agreement, Agreement::Confirmed);
    // resting at a real equilibrium that is not listed contradicts the claim
    Claim other{ClaimKind::ConvergesToOneOf, Observable::N_h, 0, {State{*thresholds(p).Nbar_h_star, 0, 0, 0}}};
    EXPECT_EQ(cross_validate({holding(other, SystemId::VirusFree)}, trs, p)[0].agreement, Agreement::Violated);
    // flat but at no equilibrium: a slow approach, not a contradiction
    std::map<SystemId, Trajectory> off{{SystemId::VirusFree, flat(SystemId::VirusFree, State{5000, 0, 20, 0}, 200)}};
    EXPECT_EQ(cross_validate({holding(other, SystemId::VirusFree)}, off, p)[0].agreement, Agreement::Undetermined);
}

TEST(Theorems, VirusFreeInteriorStructural)
{
    const auto& s = preset("fig2_full");
    auto results  = cross_validate(check_theorem(3, s.params, s.x0), {}, s.params);
    bool seen     = false;
    for (auto& r : results) {
        if (r.verdict.predicted.structural == StructuralClaim::VirusFreeInterior && r.verdict.hypothesis_holds) {
            EXPECT_EQ(r.agreement, Agreement::Confirmed) << r.verdict.id();
            seen = true;
        }
    }
    EXPECT_TRUE(seen);
}

TEST(Theorems, PrintedBundleFourAdmitsInteriorPoints)
{
    // documented defect: the printed bundle holds yet an interior root exists
    const Draw d = sample_draw(1, 402);
    auto results = cross_validate(check_theorem(6, d.p, d.x0), {}, d.p);
    bool seen    = false;
    for (auto& r : results) {
        if (r.verdict.predicted.bundle == "bundle-4" && r.verdict.hypothesis_holds) {
            EXPECT_EQ(r.agreement, Agreement::Violated);
            seen = true;
        }
    }
    EXPECT_TRUE(seen);
}
