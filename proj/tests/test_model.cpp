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
#include "apis/equilibria.hpp"
#include "apis/model.hpp"
#include "apis/scenarios.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace apis;

namespace {

Params fig2()
{
    return preset("fig2_full").params;
}

State random_state(std::mt19937_64& g)
{
    std::uniform_real_distribution<double> u(0.0, 5000.0), m(0.0, 200.0);
    return {u(g), u(g), m(g), m(g)};
}

} // namespace

TEST(Model, FullRightHandSideByHand)
{
    const Params p = fig2();
    const State x{3000, 500, 20, 10};
    const double Nh = 3500, Nm = 30, q = 3000 + 0.9 * 500;
    const double birth = p.r * q * q / (p.K_hat + q * q);
    const double force = p.beta_h * 500 / Nh + p.beta_mh_hat * 10 / Nh + p.beta_mh_tilde * 10;
    const State f      = rhs(SystemId::Full, x, p);
    EXPECT_NEAR(f.S_h, birth - p.d_h * 3000 - 3000 * force - p.alpha * 3000 * Nm, 1e-9);
    EXPECT_NEAR(f.I_h, 3000 * force - p.alpha * 500 * Nm - (p.d_h + p.mu_h) * 500, 1e-9);
    EXPECT_NEAR(f.S_m, 20 * (p.c * p.alpha * 3000 - p.beta_hm_hat * 500 / Nh - p.d_m), 1e-12);
    EXPECT_NEAR(f.I_m, p.c * p.alpha * (500 * Nm + 3000 * 10) + p.beta_hm_hat * 500 / Nh * 20 - (p.d_m + p.mu_m) * 10,
                1e-12);
}

TEST(Model, SubsystemsAreExactRestrictions)
{
    const Params p = fig2();
    std::mt19937_64 g(7);
    for (int k = 0; k < 200; ++k) {
        State x = random_state(g);
        for (SystemId sys : all_systems) {
            State pinned = embed(sys, project(sys, x));
            State full   = rhs(SystemId::Full, pinned, p);
            State sub    = rhs(sys, pinned, p);
            for (Compartment c : compartments(sys)) {
                EXPECT_EQ(full[c], sub[c]) << name(sys) << " " << name(c);
            }
            // absent compartments stay at zero under the full flow
            for (int i = 0; i < 4; ++i) {
                const auto c = static_cast<Compartment>(i);
                if (!has(sys, c)) {
                    EXPECT_EQ(full[c], 0.0) << name(sys) << " " << name(c);
                }
            }
        }
    }
}

TEST(Model, EmptyColonyConvention)
{
    const Params p = fig2();
    const State f  = rhs(SystemId::Full, State{0, 0, 10, 5}, p);
    EXPECT_TRUE(std::isfinite(f.S_h) && std::isfinite(f.I_h));
    EXPECT_EQ(f.S_h, 0.0);
    EXPECT_EQ(f.I_h, 0.0);
    EXPECT_DOUBLE_EQ(f.S_m, -p.d_m * 10);
    EXPECT_DOUBLE_EQ(f.I_m, -(p.d_m + p.mu_m) * 5);
}

TEST(Model, BoundaryFacesInvariant)
{
    // nonnegative orthant: a zero compartment never has a negative derivative
    const Params p = fig2();
    std::mt19937_64 g(11);
    for (int k = 0; k < 500; ++k) {
        State x = random_state(g);
        for (int i = 0; i < 4; ++i) {
            State y                        = x;
            y[static_cast<Compartment>(i)] = 0;
            EXPECT_GE(rhs(SystemId::Full, y, p)[static_cast<Compartment>(i)], 0.0);
        }
    }
}

TEST(Model, DimensionChecked)
{
    const Params p = fig2();
    std::vector<double> three{1, 2, 3};
    EXPECT_THROW(rhs(SystemId::Full, std::span<const double>(three), p), DomainError);
    EXPECT_EQ(dimension(SystemId::HealthyMiteFree), 3u);
    EXPECT_EQ(parse_system("virus-free"), SystemId::VirusFree);
    EXPECT_THROW(parse_system("nope"), DomainError);
}

TEST(Model, AnalyticJacobianMatchesDifferences)
{
    const Params p = fig2();
    std::mt19937_64 g(3);
    for (int k = 0; k < 100; ++k) {
        State x = random_state(g);
        x.S_h += 10;
        for (SystemId sys : all_systems) {
            auto v   = project(sys, x);
            auto num = numeric_jacobian(sys, std::span<const double>(v), p);
            Eigen::MatrixXd ana(num.rows(), num.cols());
            auto fill = [&]<SystemId Sys>() {
                Vec<dim_v<Sys>> a;
                std::copy(v.begin(), v.end(), a.begin());
                auto J = jacobian_exact<Sys>(a, p);
                for (std::size_t i = 0; i < a.size(); ++i) {
                    for (std::size_t j = 0; j < a.size(); ++j) {
                        ana(static_cast<int>(i), static_cast<int>(j)) = J[i][j];
                    }
                }
            };
            switch (sys) {
            case SystemId::Full:
                fill.template operator()<SystemId::Full>();
                break;
            case SystemId::VirusFree:
                fill.template operator()<SystemId::VirusFree>();
                break;
            case SystemId::MiteFree:
                fill.template operator()<SystemId::MiteFree>();
                break;
            case SystemId::HealthyMiteFree:
                fill.template operator()<SystemId::HealthyMiteFree>();
                break;
            case SystemId::BeeOnly:
                fill.template operator()<SystemId::BeeOnly>();
                break;
            }
            const double scale = std::max(1.0, num.cwiseAbs().maxCoeff());
            EXPECT_LE((ana - num).cwiseAbs().maxCoeff() / scale, 1e-6) << name(sys);
        }
    }
}
