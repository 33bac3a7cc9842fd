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
#include "apis/params.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace apis {

enum class SystemId { Full, VirusFree, MiteFree, HealthyMiteFree, BeeOnly };

enum class Compartment { S_h = 0, I_h = 1, S_m = 2, I_m = 3 };

inline constexpr std::array<SystemId, 5> all_systems{SystemId::Full, SystemId::VirusFree, SystemId::MiteFree,
                                                     SystemId::HealthyMiteFree, SystemId::BeeOnly};

// Below this a bee (or mite) total counts as zero in frequency-dependent terms.
inline constexpr double eps_denom = 1e-12;

template <SystemId Sys>
inline constexpr std::size_t dim_v = Sys == SystemId::Full              ? 4
                                     : Sys == SystemId::HealthyMiteFree ? 3
                                     : Sys == SystemId::BeeOnly         ? 1
                                                                        : 2;

template <std::size_t N>
using Vec = std::array<double, N>;

inline std::span<const Compartment> compartments(SystemId sys)
{
    using C                                         = Compartment;
    static constexpr std::array<C, 4> full          = {C::S_h, C::I_h, C::S_m, C::I_m};
    static constexpr std::array<C, 2> virus_free    = {C::S_h, C::S_m};
    static constexpr std::array<C, 2> mite_free     = {C::S_h, C::I_h};
    static constexpr std::array<C, 3> healthy_mite  = {C::S_h, C::I_h, C::I_m};
    static constexpr std::array<C, 1> bee_only      = {C::S_h};
    switch (sys) {
    case SystemId::Full:
        return full;
    case SystemId::VirusFree:
        return virus_free;
    case SystemId::MiteFree:
        return mite_free;
    case SystemId::HealthyMiteFree:
        return healthy_mite;
    case SystemId::BeeOnly:
        return bee_only;
    }
    return full;
}

inline std::size_t dimension(SystemId sys)
{
    return compartments(sys).size();
}

inline bool has(SystemId sys, Compartment c)
{
    for (Compartment k : compartments(sys)) {
        if (k == c) {
            return true;
        }
    }
    return false;
}

inline std::string_view name(Compartment c)
{
    static constexpr std::array<std::string_view, 4> names{"S_h", "I_h", "S_m", "I_m"};
    return names[static_cast<int>(c)];
}

inline std::string_view name(SystemId sys)
{
    switch (sys) {
    case SystemId::Full:
        return "full";
    case SystemId::VirusFree:
        return "virus-free";
    case SystemId::MiteFree:
        return "mite-free";
    case SystemId::HealthyMiteFree:
        return "healthy-mite-free";
    case SystemId::BeeOnly:
        return "bee-only";
    }
    return "?";
}

inline SystemId parse_system(std::string_view s)
{
    for (SystemId sys : all_systems) {
        if (name(sys) == s) {
            return sys;
        }
    }
    throw DomainError("unknown system '" + std::string(s) + "'");
}

/// Full 4-compartment state. Subsystems leave their absent compartments at zero.
struct State {
    double S_h = 0;
    double I_h = 0;
    double S_m = 0;
    double I_m = 0;

    double& operator[](Compartment c)
    {
        switch (c) {
        case Compartment::S_h:
            return S_h;
        case Compartment::I_h:
            return I_h;
        case Compartment::S_m:
            return S_m;
        case Compartment::I_m:
            break;
        }
        return I_m;
    }
    double operator[](Compartment c) const
    {
        return const_cast<State&>(*this)[c];
    }
    double N_h() const
    {
        return S_h + I_h;
    }
    double N_m() const
    {
        return S_m + I_m;
    }
    // weighted total bounded by N* on the attracting set
    double N(double c) const
    {
        return c * N_h() + N_m();
    }
    // composite disease variable
    double I(double c) const
    {
        return c * I_h + I_m;
    }

    friend bool operator==(const State&, const State&) = default;
};

inline std::vector<double> project(SystemId sys, const State& x)
{
    std::vector<double> out;
    for (Compartment c : compartments(sys)) {
        out.push_back(x[c]);
    }
    return out;
}

inline State embed(SystemId sys, std::span<const double> v)
{
    auto comps = compartments(sys);
    if (v.size() != comps.size()) {
        throw DomainError("state has " + std::to_string(v.size()) + " components, " + std::string(name(sys)) +
                          " needs " + std::to_string(comps.size()));
    }
    State x;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        x[comps[i]] = v[i];
    }
    return x;
}

namespace detail {

// x/N with the zero-population convention
inline double share(double x, double N)
{
    return N <= eps_denom ? 0.0 : x / N;
}

inline double brood_survival(const Params& p, double q)
{
    return p.r * q * q / (p.K_hat + q * q);
}

} // namespace detail

// The subsystem forms below are written so that pinning the absent compartments
// of the full form to zero reproduces them bit for bit.

inline Vec<4> rhs_full(const Vec<4>& x, const Params& p)
{
    const double Sh = x[0], Ih = x[1], Sm = x[2], Im = x[3];
    const double Nh      = Sh + Ih;
    const double Nm      = Sm + Im;
    const double q       = Sh + p.rho * Ih;
    const double birth   = detail::brood_survival(p, q);
    const double ih_frac = detail::share(Ih, Nh);
    const double im_frac = detail::share(Im, Nh);
    const double force   = p.beta_h * ih_frac + p.beta_mh_hat * im_frac + p.beta_mh_tilde * Im;
    return {birth - p.d_h * Sh - Sh * force - p.alpha * Sh * Nm,
            Sh * force - p.alpha * Ih * Nm - (p.d_h + p.mu_h) * Ih,
            Sm * (p.c * p.alpha * Sh - p.beta_hm_hat * ih_frac - p.d_m),
            p.c * p.alpha * (Ih * Nm + Sh * Im) + p.beta_hm_hat * ih_frac * Sm - (p.d_m + p.mu_m) * Im};
}

// (S_h, S_m)
inline Vec<2> rhs_virus_free(const Vec<2>& x, const Params& p)
{
    const double Sh = x[0], Sm = x[1];
    const double birth = detail::brood_survival(p, Sh);
    return {birth - p.d_h * Sh - p.alpha * Sh * Sm, Sm * (p.c * p.alpha * Sh - p.d_m)};
}

// (S_h, I_h)
inline Vec<2> rhs_mite_free(const Vec<2>& x, const Params& p)
{
    const double Sh = x[0], Ih = x[1];
    const double Nh      = Sh + Ih;
    const double birth   = detail::brood_survival(p, Sh + p.rho * Ih);
    const double ih_frac = detail::share(Ih, Nh);
    const double force   = p.beta_h * ih_frac;
    return {birth - p.d_h * Sh - Sh * force, Sh * force - (p.d_h + p.mu_h) * Ih};
}

// (S_h, I_h, I_m)
inline Vec<3> rhs_healthy_mite_free(const Vec<3>& x, const Params& p)
{
    const double Sh = x[0], Ih = x[1], Im = x[2];
    const double Nh      = Sh + Ih;
    const double birth   = detail::brood_survival(p, Sh + p.rho * Ih);
    const double ih_frac = detail::share(Ih, Nh);
    const double im_frac = detail::share(Im, Nh);
    const double force   = p.beta_h * ih_frac + p.beta_mh_hat * im_frac + p.beta_mh_tilde * Im;
    return {birth - p.d_h * Sh - Sh * force - p.alpha * Sh * Im,
            Sh * force - p.alpha * Ih * Im - (p.d_h + p.mu_h) * Ih,
            p.c * p.alpha * (Ih * Im + Sh * Im) - (p.d_m + p.mu_m) * Im};
}

inline Vec<1> rhs_bee_only(const Vec<1>& x, const Params& p)
{
    return {detail::brood_survival(p, x[0]) - p.d_h * x[0]};
}

template <SystemId Sys>
inline Vec<dim_v<Sys>> rhs(const Vec<dim_v<Sys>>& x, const Params& p)
{
    if constexpr (Sys == SystemId::Full) {
        return rhs_full(x, p);
    }
    else if constexpr (Sys == SystemId::VirusFree) {
        return rhs_virus_free(x, p);
    }
    else if constexpr (Sys == SystemId::MiteFree) {
        return rhs_mite_free(x, p);
    }
    else if constexpr (Sys == SystemId::HealthyMiteFree) {
        return rhs_healthy_mite_free(x, p);
    }
    else {
        return rhs_bee_only(x, p);
    }
}

/// Runtime dispatch. Throws DomainError on a dimension mismatch.
inline std::vector<double> rhs(SystemId sys, std::span<const double> x, const Params& p)
{
    if (x.size() != dimension(sys)) {
        throw DomainError("state has " + std::to_string(x.size()) + " components, " + std::string(name(sys)) +
                          " needs " + std::to_string(dimension(sys)));
    }
    auto run = [&]<SystemId Sys>() {
        Vec<dim_v<Sys>> v;
        std::copy(x.begin(), x.end(), v.begin());
        auto dx = rhs<Sys>(v, p);
        return std::vector<double>(dx.begin(), dx.end());
    };
    switch (sys) {
    case SystemId::Full:
        return run.template operator()<SystemId::Full>();
    case SystemId::VirusFree:
        return run.template operator()<SystemId::VirusFree>();
    case SystemId::MiteFree:
        return run.template operator()<SystemId::MiteFree>();
    case SystemId::HealthyMiteFree:
        return run.template operator()<SystemId::HealthyMiteFree>();
    case SystemId::BeeOnly:
        return run.template operator()<SystemId::BeeOnly>();
    }
    return {};
}

inline State rhs(SystemId sys, const State& x, const Params& p)
{
    auto v = project(sys, x);
    return embed(sys, rhs(sys, std::span<const double>(v), p));
}

template <std::size_t N>
using Mat = std::array<std::array<double, N>, N>;

/// Analytic Jacobian of the full right-hand side, in (S_h, I_h, S_m, I_m) order.
inline Mat<4> jacobian_full(const Vec<4>& x, const Params& p)
{
    const double Sh = x[0], Ih = x[1], Sm = x[2], Im = x[3];
    const double Nh = Sh + Ih, Nm = Sm + Im;
    const double q  = Sh + p.rho * Ih;
    const double g  = p.K_hat + q * q;
    const double B1 = 2.0 * p.r * p.K_hat * q / (g * g); // d(birth)/dq
    const double u  = detail::share(Ih, Nh);
    const double w  = detail::share(Im, Nh);
    // partials of the shares; zero under the empty-colony convention
    double u_S = 0, u_I = 0, w_S = 0, w_I = 0, w_M = 0;
    if (Nh > eps_denom) {
        u_S = -Ih / (Nh * Nh);
        u_I = Sh / (Nh * Nh);
        w_S = -Im / (Nh * Nh);
        w_I = w_S;
        w_M = 1.0 / Nh;
    }
    const double F   = p.beta_h * u + p.beta_mh_hat * w + p.beta_mh_tilde * Im;
    const double F_S = p.beta_h * u_S + p.beta_mh_hat * w_S;
    const double F_I = p.beta_h * u_I + p.beta_mh_hat * w_I;
    const double F_M = p.beta_mh_hat * w_M + p.beta_mh_tilde;
    const double ca  = p.c * p.alpha;

    Mat<4> J{};
    J[0] = {B1 - p.d_h - F - Sh * F_S - p.alpha * Nm, p.rho * B1 - Sh * F_I, -p.alpha * Sh,
            -Sh * F_M - p.alpha * Sh};
    J[1] = {F + Sh * F_S, Sh * F_I - p.alpha * Nm - (p.d_h + p.mu_h), -p.alpha * Ih, Sh * F_M - p.alpha * Ih};
    J[2] = {Sm * (ca - p.beta_hm_hat * u_S), -Sm * p.beta_hm_hat * u_I, ca * Sh - p.beta_hm_hat * u - p.d_m, 0.0};
    J[3] = {ca * Im + p.beta_hm_hat * u_S * Sm, ca * Nm + p.beta_hm_hat * u_I * Sm, ca * Ih + p.beta_hm_hat * u,
            ca * Ih + ca * Sh - (p.d_m + p.mu_m)};
    return J;
}

/// Jacobian of a subsystem: the full one at the embedded point, restricted to the
/// compartments of Sys (absent ones are pinned at zero, so this is exact).
template <SystemId Sys>
inline Mat<dim_v<Sys>> jacobian_exact(const Vec<dim_v<Sys>>& x, const Params& p)
{
    constexpr std::size_t n = dim_v<Sys>;
    auto comps              = compartments(Sys);
    Vec<4> full{};
    for (std::size_t i = 0; i < n; ++i) {
        full[static_cast<std::size_t>(comps[i])] = x[i];
    }
    const auto J = jacobian_full(full, p);
    Mat<n> out{};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out[i][j] = J[static_cast<std::size_t>(comps[i])][static_cast<std::size_t>(comps[j])];
        }
    }
    return out;
}

inline double max_abs_rhs(SystemId sys, const State& x, const Params& p)
{
    auto v  = project(sys, x);
    auto dx = rhs(sys, std::span<const double>(v), p);
    double m = 0.0;
    for (double d : dx) {
        m = std::max(m, std::abs(d));
    }
    return m;
}

} // namespace apis
