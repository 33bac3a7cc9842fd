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
#include "apis/outcome.hpp"
#include "apis/scenarios.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

using namespace apis;

namespace {

// Synthetic trajectory on [0, 100] with one sample per time unit.
Trajectory synthetic(SystemId sys, const std::function<State(double)>& f)
{
    Trajectory tr;
    tr.sys    = sys;
    tr.params = preset("fig2_full").params;
    tr.t_end  = 100;
    for (int k = 0; k <= 100; ++k) {
        tr.t.push_back(k);
        tr.x.push_back(f(k));
    }
    return tr;
}

OutcomeLabel label_of(const Trajectory& tr)
{
    return classify_outcome(tr, thresholds(tr.params)).label;
}

} // namespace

TEST(Outcome, Labels)
{
    EXPECT_EQ(label_of(synthetic(SystemId::Full, [](double) { return State{4000, 20, 5, 30}; })),
              OutcomeLabel::Coexistence);
    EXPECT_EQ(label_of(synthetic(SystemId::Full, [](double) { return State{9000, 0, 0, 0}; })),
              OutcomeLabel::DiseaseFreePersistence);
    EXPECT_EQ(label_of(synthetic(SystemId::VirusFree, [](double) { return State{9000, 0, 0, 0}; })),
              OutcomeLabel::DiseaseFreePersistence);
    // in the mite-free system bees and virus are everything modeled
    EXPECT_EQ(label_of(synthetic(SystemId::MiteFree, [](double) { return State{3000, 500, 0, 0}; })),
              OutcomeLabel::Coexistence);
    EXPECT_EQ(label_of(synthetic(SystemId::Full, [](double) { return State{3000, 500, 0, 0}; })),
              OutcomeLabel::MiteFreePersistence);
    EXPECT_EQ(label_of(synthetic(SystemId::Full, [](double t) { return State{5000 * std::exp(-t), 0, 0, 0}; })),
              OutcomeLabel::AllExtinct);
}

TEST(Outcome, BeeOnlyIsNeverCoexistence)
{
    EXPECT_EQ(label_of(synthetic(SystemId::BeeOnly, [](double) { return State{9000, 0, 0, 0}; })),
              OutcomeLabel::DiseaseFreePersistence);
}

TEST(Outcome, AlleeCommitment)
{
    // bees still present but under the Allee threshold at window end
    auto tr = synthetic(SystemId::BeeOnly, [](double) { return State{50, 0, 0, 0}; });
    const auto o = classify_outcome(tr, thresholds(tr.params));
    EXPECT_EQ(o.label, OutcomeLabel::AllExtinct);
    EXPECT_TRUE(o.bees_committed);
}

TEST(Outcome, ExpandingOscillationsThenCollapse)
{
    auto tr = synthetic(SystemId::VirusFree, [](double t) {
        const double amp = 300 * std::exp(0.015 * t);
        const double v   = t < 92 ? 2000 + amp * std::sin(0.5 * t) : 0.0;
        return State{std::max(0.0, v), 0, 50, 0};
    });
    const auto o = classify_outcome(tr, thresholds(tr.params));
    EXPECT_EQ(o.label, OutcomeLabel::CatastrophicCollapse);
    EXPECT_GE(o.expanding_peaks, 2);
    ASSERT_TRUE(o.collapse_time);
    EXPECT_EQ(*o.collapse_time, 92.0);
}

TEST(Outcome, IndeterminateDip)
{
    // mites dip to near zero inside the window and recover: neither gone nor persistent
    auto tr = synthetic(SystemId::VirusFree, [](double t) { return State{4000, 0, t == 90 ? 1e-4 : 30, 0}; });
    EXPECT_EQ(label_of(tr), OutcomeLabel::Undetermined);
}

TEST(Outcome, PeakHelpers)
{
    std::vector<Peak> peaks{{1, 10}, {2, 5}, {3, 6}, {4, 7}};
    EXPECT_EQ(trailing_expanding(peaks, 1.02), 2);
    EXPECT_EQ(trailing_expanding({}, 1.02), 0);
}

TEST(Outcome, Matching)
{
    EXPECT_TRUE(outcome_matches(OutcomeLabel::AllExtinct, OutcomeLabel::CatastrophicCollapse));
    EXPECT_FALSE(outcome_matches(OutcomeLabel::CatastrophicCollapse, OutcomeLabel::AllExtinct));
    EXPECT_EQ(parse_outcome("Coexistence"), OutcomeLabel::Coexistence);
    EXPECT_THROW(parse_outcome("x"), DomainError);
}

TEST(Outcome, ShortRunIsAnAnalysisError)
{
    Trajectory tr;
    tr.t_end = 100;
    tr.t     = {0, 1};
    tr.x     = {State{1, 0, 0, 0}, State{1, 0, 0, 0}};
    EXPECT_THROW(classify_outcome(tr, thresholds(tr.params)), AnalysisError);
}
