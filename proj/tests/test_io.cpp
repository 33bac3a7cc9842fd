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
#include "apis/io.hpp"
#include "apis/scenarios.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace apis;

TEST(Io, ShortestRoundTrip)
{
    for (double v : {0.1, 1.0 / 3.0, 9898.979485566357, 1e-300, 6.02e23, 0.0}) {
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(std::nan("")), "nan");
    EXPECT_EQ(format_double(-INFINITY), "-inf");
}

TEST(Io, JsonNullsForNonFinite)
{
    EXPECT_TRUE(number(std::numeric_limits<double>::quiet_NaN()).is_null());
    EXPECT_TRUE(number(Opt{}).is_null());
    EXPECT_EQ(number(Opt{2.5}).get<double>(), 2.5);
    const Json th = to_json(thresholds(preset("fig3_full").params));
    EXPECT_NEAR(th["R0_V"].get<double>(), 1.2, 1e-12);
    EXPECT_FALSE(to_json(thresholds(preset("fig2_full").params))["a"].is_number());
}

TEST(Io, TrajectoryCsvColumnsFollowTheSystem)
{
    const auto& s = preset("fig2_virusfree");
    IntegrationConfig cfg;
    cfg.t_end = 2;
    const auto tr = integrate(s.sys, s.x0, s.params, cfg);
    std::ostringstream os;
    write_trajectory_csv(os, tr);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "t,S_h,S_m");
    std::getline(in, line);
    EXPECT_EQ(line, "0,4001,5");
    std::size_t rows = 1;
    while (std::getline(in, line)) {
        ++rows;
    }
    EXPECT_EQ(rows, tr.size());
}

TEST(Io, EventsCsv)
{
    Trajectory tr;
    tr.events.push_back({1.5, EventKind::CompartmentExtinct, "I_h"});
    std::ostringstream os;
    write_events_csv(os, tr);
    EXPECT_EQ(os.str(), "t,kind,compartment\n1.5,compartment-extinct,I_h\n");
}

TEST(Io, ParamsAndStateJson)
{
    const Params p = preset("fig2_full").params;
    const Json j   = to_json(p);
    for (auto& [n, m] : params_fields) {
        EXPECT_EQ(j[std::string(n)].get<double>(), p.*m) << n;
    }
    const Json x = to_json(SystemId::MiteFree, State{1, 2, 3, 4});
    EXPECT_EQ(x.size(), 2u);
    EXPECT_EQ(x["I_h"].get<double>(), 2.0);
}

TEST(Io, EquilibriumJson)
{
    const auto eqs = equilibria_virus_free(preset("fig2_full").params);
    const Json j   = to_json(eqs.back());
    EXPECT_EQ(j["class"], "sink");
    EXPECT_EQ(j["eigenvalues"].size(), 2u);
}
