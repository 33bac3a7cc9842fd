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
#pragma once

#include "apis/errors.hpp"

#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>

namespace apis {

/// Biological parameters as measured, before the brood/adult rescaling.
struct ParamsRaw {
    double r         = 0; // max egg laying, bees/day
    double K         = 0; // half-saturation of brood survival, bees^2
    double xi_h      = 1; // adult fraction of the colony
    double xi_m      = 0; // phoretic fraction of the mites
    double rho       = 1; // reproduction discount of infected bees
    double d_h       = 0;
    double d_m       = 0;
    double mu_h      = 0;
    double mu_m      = 0;
    double alpha_hat = 0; // parasitism, 1/(mite day)
    double c         = 0; // mites per bee conversion
    double beta_h    = 0;
    double beta_mh   = 0; // phoretic mite -> adult bee
    double beta_mh2  = 0; // reproductive mite -> brood
    double beta_hm   = 0; // bee -> phoretic mite

    void validate() const;
};

/// Rescaled parameters used by every right-hand side.
struct Params {
    double r             = 0;
    double K_hat         = 1;
    double rho           = 1;
    double d_h           = 0;
    double d_m           = 0;
    double mu_h          = 0;
    double mu_m          = 0;
    double alpha         = 0;
    double c             = 0;
    double beta_h        = 0;
    double beta_mh_hat   = 0;
    double beta_mh_tilde = 0;
    double beta_hm_hat   = 0;

    void validate() const;

    friend bool operator==(const Params&, const Params&) = default;
};

inline constexpr std::array<std::pair<std::string_view, double Params::*>, 13> params_fields{{
    {"r", &Params::r},
    {"K_hat", &Params::K_hat},
    {"rho", &Params::rho},
    {"d_h", &Params::d_h},
    {"d_m", &Params::d_m},
    {"mu_h", &Params::mu_h},
    {"mu_m", &Params::mu_m},
    {"alpha", &Params::alpha},
    {"c", &Params::c},
    {"beta_h", &Params::beta_h},
    {"beta_mh_hat", &Params::beta_mh_hat},
    {"beta_mh_tilde", &Params::beta_mh_tilde},
    {"beta_hm_hat", &Params::beta_hm_hat},
}};

inline constexpr std::array<std::pair<std::string_view, double ParamsRaw::*>, 15> raw_fields{{
    {"r", &ParamsRaw::r},
    {"K", &ParamsRaw::K},
    {"xi_h", &ParamsRaw::xi_h},
    {"xi_m", &ParamsRaw::xi_m},
    {"rho", &ParamsRaw::rho},
    {"d_h", &ParamsRaw::d_h},
    {"d_m", &ParamsRaw::d_m},
    {"mu_h", &ParamsRaw::mu_h},
    {"mu_m", &ParamsRaw::mu_m},
    {"alpha_hat", &ParamsRaw::alpha_hat},
    {"c", &ParamsRaw::c},
    {"beta_h", &ParamsRaw::beta_h},
    {"beta_mh", &ParamsRaw::beta_mh},
    {"beta_mh2", &ParamsRaw::beta_mh2},
    {"beta_hm", &ParamsRaw::beta_hm},
}};

namespace detail {

inline void require(bool ok, const std::string& what)
{
    if (!ok) {
        throw DomainError(what);
    }
}

inline bool finite_nonneg(double x)
{
    return std::isfinite(x) && x >= 0.0;
}

} // namespace detail

inline void ParamsRaw::validate() const
{
    using detail::finite_nonneg;
    using detail::require;
    require(std::isfinite(K) && K > 0.0, "K must be positive");
    for (double v : {r, d_h, d_m, mu_h, mu_m, alpha_hat, c}) {
        require(finite_nonneg(v), "rates must be finite and nonnegative");
    }
    for (double v : {xi_h, xi_m, rho}) {
        require(finite_nonneg(v) && v <= 1.0, "xi_h, xi_m and rho must lie in [0,1]");
    }
    for (double v : {beta_h, beta_mh, beta_mh2, beta_hm}) {
        require(std::isfinite(v) && v > 0.0 && v < 1.0, "raw infection probabilities must lie in (0,1)");
    }
}

inline void Params::validate() const
{
    using detail::finite_nonneg;
    using detail::require;
    require(std::isfinite(K_hat) && K_hat > 0.0, "K_hat must be positive");
    for (double v : {r, d_h, d_m, mu_h, mu_m, alpha, c}) {
        require(finite_nonneg(v), "rates must be finite and nonnegative");
    }
    require(finite_nonneg(rho) && rho <= 1.0, "rho must lie in [0,1]");
    for (double v : {beta_h, beta_mh_hat, beta_mh_tilde, beta_hm_hat}) {
        require(finite_nonneg(v), "transmission coefficients must be finite and nonnegative");
    }
}

/// Rescale measured parameters. Throws DomainError when xi_h = 0.
inline Params derive_params(const ParamsRaw& raw)
{
    if (raw.xi_h == 0.0) {
        throw DomainError("xi_h = 0: K_hat = K/xi_h^2 is undefined");
    }
    raw.validate();
    Params p;
    p.r             = raw.r;
    p.K_hat         = raw.K / (raw.xi_h * raw.xi_h);
    p.rho           = raw.rho;
    p.d_h           = raw.d_h;
    p.d_m           = raw.d_m;
    p.mu_h          = raw.mu_h;
    p.mu_m          = raw.mu_m;
    p.alpha         = raw.alpha_hat * (1.0 - raw.xi_h) * (1.0 - raw.xi_m);
    p.c             = raw.c;
    p.beta_h        = raw.beta_h;
    p.beta_mh_hat   = raw.beta_mh * raw.xi_m;
    p.beta_mh_tilde = raw.beta_mh2 * p.alpha;
    p.beta_hm_hat   = raw.beta_hm * raw.xi_m;
    p.validate();
    return p;
}

inline double* field(Params& p, std::string_view name)
{
    for (auto& [key, member] : params_fields) {
        if (key == name) {
            return &(p.*member);
        }
    }
    return nullptr;
}

inline double get(const Params& p, std::string_view name)
{
    for (auto& [key, member] : params_fields) {
        if (key == name) {
            return p.*member;
        }
    }
    throw DomainError("unknown parameter '" + std::string(name) + "'");
}

inline Params with(Params p, std::string_view name, double value)
{
    double* f = field(p, name);
    if (f == nullptr) {
        throw DomainError("unknown parameter '" + std::string(name) + "'");
    }
    *f = value;
    return p;
}

} // namespace apis
