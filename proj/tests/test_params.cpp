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
#include "apis/param_file.hpp"
#include "apis/params.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace apis;

namespace {

ParamsRaw raw_example()
{
    ParamsRaw r;
    r.r         = 1500;
    r.K         = 500000;
    r.xi_h      = 0.5;
    r.xi_m      = 0.8;
    r.rho       = 0.9;
    r.d_h       = 0.15;
    r.d_m       = 0.1;
    r.mu_h      = 0.1;
    r.mu_m      = 0.01;
    r.alpha_hat = 0.00625;
    r.c         = 0.005;
    r.beta_h    = 0.24;
    r.beta_mh   = 0.0375;
    r.beta_mh2  = 0.005;
    r.beta_hm   = 0.0375;
    return r;
}

} // namespace

TEST(Params, DeriveRescales)
{
    const Params p = derive_params(raw_example());
    EXPECT_DOUBLE_EQ(p.K_hat, 500000 / 0.25);
    EXPECT_DOUBLE_EQ(p.alpha, 0.00625 * 0.5 * 0.2);
    EXPECT_DOUBLE_EQ(p.beta_mh_hat, 0.0375 * 0.8);
    EXPECT_DOUBLE_EQ(p.beta_mh_tilde, 0.005 * p.alpha);
    EXPECT_DOUBLE_EQ(p.beta_hm_hat, 0.0375 * 0.8);
    EXPECT_DOUBLE_EQ(p.r, 1500);
    EXPECT_DOUBLE_EQ(p.c, 0.005);
}

TEST(Params, ZeroAdultFractionRejected)
{
    auto r = raw_example();
    r.xi_h = 0;
    EXPECT_THROW(derive_params(r), DomainError);
}

TEST(Params, RawProbabilitiesMustBeOpenUnit)
{
    auto r    = raw_example();
    r.beta_hm = 1.0;
    EXPECT_THROW(derive_params(r), DomainError);
    r.beta_hm = 0.0;
    EXPECT_THROW(derive_params(r), DomainError);
}

TEST(Params, ValidateRejectsNegativesAndNan)
{
    Params p = derive_params(raw_example());
    EXPECT_NO_THROW(p.validate());
    EXPECT_THROW(with(p, "d_h", -0.1).validate(), DomainError);
    EXPECT_THROW(with(p, "rho", 1.5).validate(), DomainError);
    EXPECT_THROW(with(p, "K_hat", 0).validate(), DomainError);
    EXPECT_THROW(with(p, "alpha", std::nan("")).validate(), DomainError);
}

TEST(Params, NamedAccess)
{
    Params p;
    p = with(p, "beta_h", 0.3);
    EXPECT_DOUBLE_EQ(get(p, "beta_h"), 0.3);
    EXPECT_THROW(get(p, "nope"), DomainError);
    for (auto& [n, m] : params_fields) {
        EXPECT_EQ(field(p, n), &(p.*m));
    }
}

TEST(ParamFile, ReadsRescaledKeys)
{
    std::istringstream in("; comment\nr = 1500\nK_hat = 1e6\nrho=0.9\nd_h = 0.15\nd_m = 0.1\nmu_h = 0.1\nmu_m = "
                          "0.01\nalpha = 0.005\nc = 0.005\nbeta_h = 0.24\nbeta_mh_hat = 0.03\nbeta_mh_tilde = "
                          "0.005\nbeta_hm_hat = 0.03\n");
    auto loaded = params_from_key_values(read_key_values(in));
    EXPECT_FALSE(loaded.raw.has_value());
    EXPECT_DOUBLE_EQ(loaded.params.K_hat, 1e6);
    EXPECT_DOUBLE_EQ(loaded.params.rho, 0.9);
}

TEST(ParamFile, RawKeysGoThroughRescaling)
{
    KeyValues kv;
    const auto r = raw_example();
    for (auto& [n, m] : raw_fields) {
        kv[std::string(n)] = r.*m;
    }
    auto loaded = params_from_key_values(kv);
    ASSERT_TRUE(loaded.raw.has_value());
    EXPECT_EQ(loaded.params, derive_params(r));
}

TEST(ParamFile, MixedFormsNameBothKeys)
{
    KeyValues kv{{"K", 1}, {"K_hat", 1}};
    try {
        params_from_key_values(kv);
        FAIL() << "expected LoadError";
    }
    catch (const LoadError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("'K'"), std::string::npos);
        EXPECT_NE(msg.find("'K_hat'"), std::string::npos);
    }
}

TEST(ParamFile, UnknownAndMissingKeys)
{
    std::istringstream bad("zeta = 1\n");
    EXPECT_THROW(read_key_values(bad), LoadError);
    std::istringstream partial("r = 1\n");
    EXPECT_THROW(params_from_key_values(read_key_values(partial)), LoadError);
    std::istringstream notnum("r = fast\n");
    EXPECT_THROW(read_key_values(notnum), LoadError);
    std::istringstream section("[a]\nr = 1\n");
    EXPECT_THROW(read_key_values(section), LoadError);
}

TEST(ParamFile, OverridesApplyAfterLoad)
{
    KeyValues kv{{"r", 1}};
    apply_overrides(kv, {"r=2", "c = 0.5"});
    EXPECT_DOUBLE_EQ(kv["r"], 2);
    EXPECT_DOUBLE_EQ(kv["c"], 0.5);
    EXPECT_THROW(apply_overrides(kv, {"r"}), LoadError);
    EXPECT_THROW(apply_overrides(kv, {"q=1"}), LoadError);
}

TEST(ParamFile, InvalidValuesBecomeLoadErrors)
{
    KeyValues kv;
    Params p;
    p.K_hat = 1;
    for (auto& [n, m] : params_fields) {
        kv[std::string(n)] = p.*m;
    }
    kv["d_h"] = -1;
    EXPECT_THROW(params_from_key_values(kv), LoadError);
}

TEST(ParamFile, RoundTripThroughText)
{
    const Params p = derive_params(raw_example());
    std::istringstream in(to_key_values(p));
    EXPECT_EQ(params_from_key_values(read_key_values(in)).params, p);
}

TEST(ParamFile, ShippedConfigsLoad)
{
    for (const char* f : {"fig1.cfg", "fig2.cfg", "fig3.cfg", "raw_example.cfg"}) {
        EXPECT_NO_THROW(load_params(std::string(APIS_CONFIG_DIR) + "/" + f)) << f;
    }
    EXPECT_THROW(load_params(std::string(APIS_CONFIG_DIR) + "/missing.cfg"), LoadError);
}
