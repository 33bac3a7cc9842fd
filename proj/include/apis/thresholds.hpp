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

#include "apis/params.hpp"

#include <cmath>
#include <optional>
#include <string_view>
#include <utility>

namespace apis {

using Opt = std::optional<double>;

/// Derived constants. An empty optional means "undefined" (negative discriminant,
/// division by zero, or a prerequisite that is itself undefined).
struct Thresholds {
    double d = 0;       // min(d_h, d_m)
    Opt N_c;            // weighted-total survival threshold
    Opt N_star;         // weighted-total upper bound
    Opt Nbar_h_c;       // bee-only Allee threshold
    Opt Nbar_h_star;    // bee-only carrying level
    Opt Nund_h_c;       // threshold for the guaranteed lower bound on N_h
    Opt Nund_h_star;    // guaranteed lower bound on N_h
    Opt S_h_loss;       // worst-case per-capita loss rate of susceptible bees
    Opt S_h_c;          // susceptible-bee threshold
    Opt S_h_star;       // susceptible-bee lower bound
    Opt H_star;         // bee level at which mites break even
    Opt M_star;         // mite level at the virus-free interior point
    Opt R0_V;           // virus reproduction number among bees
    Opt R0_M;           // mite reproduction number
    Opt a;              // S_h/I_h ratio at the mite-free interior points
    Opt d_tilde;        // effective bee death rate at those points
    Opt Im_breakeven;   // bee level at which infected mites break even, (d_m+mu_m)/(c alpha)
};

namespace detail {

// Relative slack accepted on a discriminant before calling it negative.
inline constexpr double disc_slack = 1e-12;

// Roots of x^2 - (r/rate) x + K_hat/y = 0, low then high.
inline std::optional<std::pair<double, double>> quadratic_roots(double r, double K_hat, double rate, double y)
{
    if (!(rate > 0.0) || !(y > 0.0)) {
        return std::nullopt;
    }
    const double b    = r / rate;
    double disc       = b * b - 4.0 * K_hat / y;
    if (disc < 0.0) {
        if (disc >= -disc_slack * b * b) {
            disc = 0.0;
        }
        else {
            return std::nullopt;
        }
    }
    const double s    = std::sqrt(disc);
    const double high = 0.5 * (b + s);
    // product of the roots is K_hat/y; this form avoids cancellation in the low root
    const double low  = high > 0.0 ? (K_hat / y) / high : 0.0;
    return std::pair{low, high};
}

} // namespace detail

/// Upper root generator: (r/x + sqrt((r/x)^2 - 4 K_hat/y))/2.
inline Opt upper_branch(const Params& p, double x, double y)
{
    auto roots = detail::quadratic_roots(p.r, p.K_hat, x, y);
    return roots ? Opt(roots->second) : std::nullopt;
}

/// Lower root generator: (r/x - sqrt((r/x)^2 - 4 K_hat/y))/2.
inline Opt lower_branch(const Params& p, double x, double y)
{
    auto roots = detail::quadratic_roots(p.r, p.K_hat, x, y);
    return roots ? Opt(roots->first) : std::nullopt;
}

inline Thresholds thresholds(const Params& p)
{
    Thresholds th;
    th.d = std::min(p.d_h, p.d_m);
    if (auto low = lower_branch(p, th.d, 1.0)) {
        th.N_c    = p.c * *low;
        th.N_star = p.c * *upper_branch(p, th.d, 1.0);
    }
    th.Nbar_h_c    = lower_branch(p, p.d_h, 1.0);
    th.Nbar_h_star = upper_branch(p, p.d_h, 1.0);

    if (th.N_star) {
        const double rate = p.d_h + p.mu_h + p.alpha * *th.N_star;
        const double y    = p.rho * p.rho;
        th.Nund_h_c       = lower_branch(p, rate, y);
        th.Nund_h_star    = upper_branch(p, rate, y);
    }
    if (th.N_star && th.Nund_h_star && *th.Nund_h_star > 0.0) {
        th.S_h_loss = p.d_h + p.beta_h + p.beta_mh_hat * *th.N_star / *th.Nund_h_star +
                      (p.beta_mh_tilde + p.alpha) * (*th.N_star - p.c * *th.Nund_h_star);
        th.S_h_c    = lower_branch(p, *th.S_h_loss, 1.0);
        th.S_h_star = upper_branch(p, *th.S_h_loss, 1.0);
    }

    const double ac = p.alpha * p.c;
    if (ac > 0.0) {
        th.H_star       = p.d_m / ac;
        th.Im_breakeven = (p.d_m + p.mu_m) / ac;
    }
    if (th.H_star && p.alpha > 0.0) {
        const double H = *th.H_star;
        th.M_star      = (p.r * H / (p.K_hat + H * H) - p.d_h) / p.alpha;
    }
    if (p.d_h + p.mu_h > 0.0) {
        th.R0_V = p.beta_h / (p.d_h + p.mu_h);
    }
    if (th.Nbar_h_star && th.H_star && *th.H_star > 0.0) {
        th.R0_M = *th.Nbar_h_star / *th.H_star;
    }
    if (th.R0_V && *th.R0_V > 1.0) {
        th.a       = 1.0 / (*th.R0_V - 1.0);
        th.d_tilde = (*th.a + 1.0) * p.d_h + p.mu_h;
    }
    return th;
}

// Named access for reports and the command line.
inline constexpr std::pair<std::string_view, Opt Thresholds::*> threshold_fields[] = {
    {"N_c", &Thresholds::N_c},
    {"N_star", &Thresholds::N_star},
    {"Nbar_h_c", &Thresholds::Nbar_h_c},
    {"Nbar_h_star", &Thresholds::Nbar_h_star},
    {"Nund_h_c", &Thresholds::Nund_h_c},
    {"Nund_h_star", &Thresholds::Nund_h_star},
    {"S_h_loss", &Thresholds::S_h_loss},
    {"S_h_c", &Thresholds::S_h_c},
    {"S_h_star", &Thresholds::S_h_star},
    {"H_star", &Thresholds::H_star},
    {"M_star", &Thresholds::M_star},
    {"R0_V", &Thresholds::R0_V},
    {"R0_M", &Thresholds::R0_M},
    {"a", &Thresholds::a},
    {"d_tilde", &Thresholds::d_tilde},
    {"Im_breakeven", &Thresholds::Im_breakeven},
};

} // namespace apis
