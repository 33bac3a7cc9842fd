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

#include "apis/equilibria.hpp"
#include "apis/interior.hpp"
#include "apis/outcome.hpp"
#include "apis/thresholds.hpp"
#include "apis/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace apis {

// ---------------------------------------------------------------------------
// Hypotheses

enum class Tri { True, False, Boundary, Undefined };

inline std::string_view name(Tri t)
{
    switch (t) {
    case Tri::True:
        return "true";
    case Tri::False:
        return "false";
    case Tri::Boundary:
        return "boundary";
    case Tri::Undefined:
        return "undefined";
    }
    return "?";
}

// relative band inside which a strict inequality counts as an equality
inline constexpr double guard_band = 1e-9;

struct Inequality {
    std::string text; // e.g. "r/(2 sqrt(K_hat)) > d_h"
    Opt lhs;
    std::string op;   // one of < <= > >=
    Opt rhs;
    Tri value = Tri::Undefined;
};

inline Tri compare(Opt lhs, std::string_view op, Opt rhs)
{
    if (!lhs || !rhs || !std::isfinite(*lhs) || !std::isfinite(*rhs)) {
        return Tri::Undefined;
    }
    const double l = *lhs, r = *rhs;
    const bool strict = op == "<" || op == ">";
    if (std::abs(l - r) <= guard_band * std::max(std::abs(l), std::abs(r))) {
        return strict ? Tri::Boundary : Tri::True;
    }
    const bool holds = (op[0] == '<') ? l < r : l > r;
    return holds ? Tri::True : Tri::False;
}

inline Inequality ineq(std::string text, Opt lhs, std::string op, Opt rhs)
{
    Inequality q{std::move(text), lhs, std::move(op), rhs};
    q.value = compare(q.lhs, q.op, q.rhs);
    return q;
}

inline Tri conjunction(const std::vector<Inequality>& qs)
{
    bool undefined = false, boundary = false;
    for (auto& q : qs) {
        if (q.value == Tri::False) {
            return Tri::False;
        }
        undefined |= q.value == Tri::Undefined;
        boundary |= q.value == Tri::Boundary;
    }
    return undefined ? Tri::Undefined : (boundary ? Tri::Boundary : Tri::True);
}

// ---------------------------------------------------------------------------
// Predicted conclusions

enum class ClaimKind { Extinct, Persistent, BoundedAbove, ConvergesToOneOf };

struct Claim {
    ClaimKind kind = ClaimKind::Extinct;
    Observable obs = Observable::N_h;
    double level   = 0; // Persistent: lower level (0 = just bounded away from zero); BoundedAbove: upper level
    std::vector<State> candidates; // ConvergesToOneOf; an all-zero state stands for extinction
    std::vector<State> saddles;    // ending near one of these is not held against the claim
};

/// Claims that are settled by equilibrium analysis instead of simulation.
enum class StructuralClaim { None, VirusFreeInterior, NoInteriorHvmi, NoInteriorFull, RawGrowthCriterion };

struct Conclusion {
    std::string tag; // human-readable summary, e.g. "N_m -> 0"
    SystemId sys = SystemId::Full;
    std::vector<Claim> claims;
    StructuralClaim structural = StructuralClaim::None;
    StabilityClass expected_class = StabilityClass::Nonhyperbolic; // VirusFreeInterior only
    std::string bundle;                                            // NoInteriorFull only
};

struct TheoremVerdict {
    std::string theorem; // T1 ... T6
    std::string clause;
    std::vector<Inequality> hypotheses;
    Tri hypothesis        = Tri::Undefined;
    bool hypothesis_holds = false;
    Conclusion predicted;
    std::vector<std::string> notes;

    bool structural() const
    {
        return predicted.structural != StructuralClaim::None;
    }
    std::string id() const
    {
        return theorem + "." + clause;
    }
};

namespace detail {

inline TheoremVerdict verdict(std::string thm, std::string clause, std::vector<Inequality> hyp, Conclusion c,
                              std::vector<std::string> notes = {})
{
    TheoremVerdict v;
    v.theorem          = std::move(thm);
    v.clause           = std::move(clause);
    v.hypotheses       = std::move(hyp);
    v.hypothesis       = conjunction(v.hypotheses);
    v.hypothesis_holds = v.hypothesis == Tri::True;
    v.predicted        = std::move(c);
    v.notes            = std::move(notes);
    for (auto& q : v.hypotheses) {
        if (q.value == Tri::Undefined) {
            v.notes.push_back("undefined quantity in: " + q.text);
        }
    }
    return v;
}

inline Claim extinct(Observable o)
{
    return {ClaimKind::Extinct, o, 0, {}, {}};
}
inline Claim persistent(Observable o, double level = 0)
{
    return {ClaimKind::Persistent, o, level, {}, {}};
}
inline Claim bounded(Observable o, double level)
{
    return {ClaimKind::BoundedAbove, o, level, {}, {}};
}

inline Opt growth_ratio(const Params& p)
{
    return p.r / (2.0 * std::sqrt(p.K_hat));
}

inline Opt add(Opt a, double b)
{
    return a ? Opt(*a + b) : std::nullopt;
}

inline Opt opt_max(Opt a, Opt b)
{
    return a && b ? Opt(std::max(*a, *b)) : std::nullopt;
}

inline Opt div(Opt a, Opt b)
{
    return a && b && *b != 0.0 ? Opt(*a / *b) : std::nullopt;
}

// (d_h + mu_h + alpha N*)/rho, the growth requirement of the bee persistence clauses
inline Opt bee_persistence_rate(const Params& p, const Thresholds& th)
{
    if (!th.N_star || p.rho <= 0.0) {
        return std::nullopt;
    }
    return (p.d_h + p.mu_h + p.alpha * *th.N_star) / p.rho;
}

// Loss rate of the disease-persistence clauses, printed with (N* - Nund_h*) where the
// susceptible-bee clause has (N* - c Nund_h*).
inline Opt disease_loss_rate(const Params& p, const Thresholds& th)
{
    if (!th.N_star || !th.Nund_h_star || *th.Nund_h_star <= 0.0) {
        return std::nullopt;
    }
    return p.d_h + p.beta_h + p.beta_mh_hat * *th.N_star / *th.Nund_h_star +
           (p.beta_mh_tilde + p.alpha) * (*th.N_star - *th.Nund_h_star);
}

inline Opt value_or_none(bool ok, double v)
{
    return ok ? Opt(v) : std::nullopt;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Evaluators

/// Basic properties of the full system. `raw` enables the adult-fraction growth note.
inline std::vector<TheoremVerdict> check_theorem1(const Params& p, const State& x0, const ParamsRaw* raw = nullptr)
{
    using namespace detail;
    const Thresholds th = thresholds(p);
    const Opt g         = growth_ratio(p);
    const Opt sk2       = 2.0 * std::sqrt(p.K_hat);
    const Opt rate      = bee_persistence_rate(p, th);
    std::vector<TheoremVerdict> out;

    out.push_back(verdict("T1", "a", {ineq("r/d > 2 sqrt(K_hat)", p.r / th.d, ">", sk2)},
                          {"c N_h + N_m <= N*", SystemId::Full, {bounded(Observable::N, th.N_star.value_or(0))}}));
    out.push_back(verdict("T1", "b", {ineq("r/(2 sqrt(K_hat)) > d_h", g, ">", p.d_h)},
                          {"N_h <= Nbar_h*", SystemId::Full, {bounded(Observable::N_h, th.Nbar_h_star.value_or(0))}}));
    out.push_back(verdict("T1", "c",
                          {ineq("r/(2 sqrt(K_hat)) > (d_h+mu_h+alpha N*)/rho", g, ">", rate),
                           ineq("N_h(0) > Nund_h_c", x0.N_h(), ">", th.Nund_h_c)},
                          {"N_h persistent >= Nund_h*", SystemId::Full,
                           {persistent(Observable::N_h, th.Nund_h_star.value_or(0))}}));
    out.push_back(verdict("T1", "d",
                          {ineq("r/(2 sqrt(K_hat)) > max{S_h loss rate, (d_h+mu_h+alpha N*)/rho}", g, ">",
                                opt_max(th.S_h_loss, rate)),
                           ineq("N_h(0) >= S_h(0)", x0.N_h(), ">=", x0.S_h),
                           ineq("S_h(0) > S_h_c", x0.S_h, ">", th.S_h_c)},
                          {"S_h persistent >= S_h*", SystemId::Full,
                           {persistent(Observable::S_h, th.S_h_star.value_or(0))}}));
    out.push_back(verdict("T1", "e", {ineq("d_h > r/(2 sqrt(K_hat))", p.d_h, ">", g)},
                          {"global extinction", SystemId::Full, {extinct(Observable::N_h), extinct(Observable::N_m)}}));
    out.push_back(verdict("T1", "f-total", {ineq("N(0) < N_c", x0.N(p.c), "<", th.N_c)},
                          {"local extinction", SystemId::Full, {extinct(Observable::N_h), extinct(Observable::N_m)}}));
    out.push_back(verdict("T1", "f-bees", {ineq("N_h(0) < Nbar_h_c", x0.N_h(), "<", th.Nbar_h_c)},
                          {"local extinction", SystemId::Full, {extinct(Observable::N_h), extinct(Observable::N_m)}}));

    if (raw != nullptr) {
        const double d   = std::min(raw->d_h, raw->d_m);
        const double rad = (raw->r / d) * (raw->r / d) - 4.0 * raw->K / (raw->xi_h * raw->xi_h);
        const Opt lhs    = value_or_none(rad >= 0.0 && raw->rho > 0.0,
                                         raw->r * raw->xi_h / (2.0 * std::sqrt(raw->K)) -
                                             p.alpha * std::sqrt(std::max(rad, 0.0)) / (2.0 * raw->rho));
        const Opt rhs    = value_or_none(raw->rho > 0.0, (raw->d_h + raw->mu_h + p.alpha * raw->r / (2.0 * d)) / raw->rho);
        Conclusion c{"adult-fraction growth criterion matches clause c", SystemId::Full, {},
                     StructuralClaim::RawGrowthCriterion};
        out.push_back(verdict("T1", "xi-note", {ineq("adult-fraction growth criterion", lhs, ">", rhs)}, c,
                              {"printed without the factor c in N*; agrees with clause c only when c = 1"}));
    }
    return out;
}

/// Persistence and extinction of mites or disease in the full system.
inline std::vector<TheoremVerdict> check_theorem2(const Params& p, const State& x0)
{
    using namespace detail;
    const Thresholds th = thresholds(p);
    const Opt g         = growth_ratio(p);
    const Opt H         = th.H_star;
    std::vector<TheoremVerdict> out;

    out.push_back(verdict("T2", "a", {ineq("N* < d_m/alpha", th.N_star, "<", value_or_none(p.alpha > 0, p.d_m / p.alpha))},
                          {"N_m -> 0", SystemId::Full, {extinct(Observable::N_m)}}));
    out.push_back(verdict("T2", "b",
                          {ineq("r/(2 sqrt(K_hat)) > d_h", g, ">", p.d_h), ineq("Nbar_h* < d_m/(alpha c)", th.Nbar_h_star, "<", H),
                           ineq("S_h(0) > S_h_c", x0.S_h, ">", th.S_h_c)},
                          {"S_m -> 0, N_h persists", SystemId::Full,
                           {extinct(Observable::S_m), persistent(Observable::N_h)}}));

    const double dv_max = std::max(p.d_h + p.mu_h, p.d_m + p.mu_m);
    const double dv_min = std::min(p.d_h + p.mu_h, p.d_m + p.mu_m);
    const double mite_route = p.c * p.beta_mh_hat + p.c * p.beta_mh_tilde;
    {
        Opt ratio;
        if (th.S_h_star) {
            ratio = std::min(p.beta_h, mite_route + p.c * p.alpha * *th.S_h_star) / dv_max;
        }
        out.push_back(verdict("T2", "c",
                              {ineq("r/(2 sqrt(K_hat)) > disease loss rate", g, ">", disease_loss_rate(p, th)),
                               ineq("S_h(0) > S_h_c", x0.S_h, ">", th.S_h_c),
                               ineq("min{beta_h, c(beta_mh_hat+beta_mh_tilde+alpha S_h*)}/max{d_h+mu_h, d_m+mu_m} >= 1",
                                    ratio, ">=", 1.0)},
                              {"I = c I_h + I_m persists", SystemId::Full, {persistent(Observable::I)}},
                              {"loss rate printed with (N* - Nund_h*), without c"}));
    }
    {
        Opt ratio;
        if (th.N_star && th.Nund_h_star && th.Nbar_h_star && *th.Nund_h_star > 0) {
            ratio = std::max(p.beta_h + p.beta_hm_hat * *th.N_star / *th.Nund_h_star,
                             mite_route + p.c * p.alpha * *th.Nbar_h_star) /
                    dv_min;
        }
        out.push_back(verdict("T2", "d",
                              {ineq("r/(2 sqrt(K_hat)) > (d_h+mu_h+alpha N*)/rho", g, ">", bee_persistence_rate(p, th)),
                               ineq("N_h(0) > Nund_h_c", x0.N_h(), ">", th.Nund_h_c),
                               ineq("max{beta_h + beta_hm_hat N*/Nund_h*, c(beta_mh_hat+beta_mh_tilde+alpha Nbar_h*)}/"
                                    "min{d_h+mu_h, d_m+mu_m} < 1",
                                    ratio, "<", 1.0)},
                              {"I = c I_h + I_m -> 0", SystemId::Full, {extinct(Observable::Virus)}}));
    }
    return out;
}

/// Global dynamics of the virus-free subsystem (S_h, S_m).
inline std::vector<TheoremVerdict> check_theorem3_virus_free(const Params& p)
{
    using namespace detail;
    const Thresholds th = thresholds(p);
    const Opt g         = growth_ratio(p);
    const Opt H         = th.H_star;
    const SystemId vf   = SystemId::VirusFree;
    std::vector<TheoremVerdict> out;
    const State zero{};
    std::vector<State> bee_saddles;
    if (th.Nbar_h_c) {
        bee_saddles.push_back({*th.Nbar_h_c, 0, 0, 0});
    }

    Conclusion extinction{"-> (0,0) for almost all x0", vf, {extinct(Observable::N_h), extinct(Observable::N_m)}};
    out.push_back(verdict("T3", "1a", {ineq("r/(2 sqrt(K_hat)) < d_h", g, "<", p.d_h)}, extinction));
    out.push_back(verdict("T3", "1b", {ineq("d_m/(alpha c) < Nbar_h_c", H, "<", th.Nbar_h_c)}, extinction));
    {
        Claim conv{ClaimKind::ConvergesToOneOf, Observable::N_h, 0, {zero}, bee_saddles};
        if (th.Nbar_h_star) {
            conv.candidates.push_back({*th.Nbar_h_star, 0, 0, 0});
        }
        out.push_back(verdict("T3", "2", {ineq("Nbar_h* < d_m/(alpha c)", th.Nbar_h_star, "<", H)},
                              {"-> (0,0) or (Nbar_h*,0)", vf, {conv}}));
    }
    {
        Conclusion c{"unique interior (H*,M*): sink if H* > sqrt(K_hat), source if H* < sqrt(K_hat)", vf, {},
                     StructuralClaim::VirusFreeInterior};
        const double sk = std::sqrt(p.K_hat);
        switch (compare(H, ">", sk)) {
        case Tri::True:
            c.expected_class = StabilityClass::Sink;
            break;
        case Tri::False:
            c.expected_class = StabilityClass::Source;
            break;
        default:
            c.expected_class = StabilityClass::Nonhyperbolic;
        }
        out.push_back(verdict("T3", "3",
                              {ineq("Nbar_h_c < d_m/(alpha c)", th.Nbar_h_c, "<", H),
                               ineq("d_m/(alpha c) < Nbar_h*", H, "<", th.Nbar_h_star)},
                              c));
    }
    return out;
}

/// Global dynamics of the mite-free subsystem (S_h, I_h).
inline std::vector<TheoremVerdict> check_theorem4_mite_free(const Params& p)
{
    using namespace detail;
    const Thresholds th = thresholds(p);
    const Opt g         = growth_ratio(p);
    const SystemId mf   = SystemId::MiteFree;
    const State zero{};
    Opt dt_ratio;
    if (th.a && th.d_tilde) {
        dt_ratio = *th.d_tilde / (*th.a + p.rho);
    }
    std::vector<TheoremVerdict> out;
    Conclusion extinction{"-> (0,0)", mf, {extinct(Observable::N_h)}};
    out.push_back(verdict("T4", "1a", {ineq("r/(2 sqrt(K_hat)) < d_h", g, "<", p.d_h)}, extinction));
    out.push_back(verdict("T4", "1b",
                          {ineq("R0_V > 1", th.R0_V, ">", 1.0), ineq("d_h < r/(2 sqrt(K_hat))", p.d_h, "<", g),
                           ineq("r/(2 sqrt(K_hat)) < d_tilde/(a+rho)", g, "<", dt_ratio)},
                          extinction));
    {
        Claim conv{ClaimKind::ConvergesToOneOf, Observable::N_h, 0, {zero}, {}};
        if (th.Nbar_h_star) {
            conv.candidates.push_back({*th.Nbar_h_star, 0, 0, 0});
        }
        if (th.Nbar_h_c) {
            conv.saddles.push_back({*th.Nbar_h_c, 0, 0, 0});
        }
        out.push_back(verdict("T4", "2", {ineq("R0_V < 1", th.R0_V, "<", 1.0), ineq("r/(2 sqrt(K_hat)) > d_h", g, ">", p.d_h)},
                              {"-> (0,0) or (Nbar_h*,0) for almost all x0", mf, {conv}}));
    }
    {
        Claim conv{ClaimKind::ConvergesToOneOf, Observable::N_h, 0, {zero}, {}};
        auto pts = mite_free_interior_points(p);
        if (pts.size() == 2) {
            conv.saddles.push_back({pts[0].first, pts[0].second, 0, 0});
            conv.candidates.push_back({pts[1].first, pts[1].second, 0, 0});
        }
        if (th.Nbar_h_star) {
            conv.saddles.push_back({*th.Nbar_h_star, 0, 0, 0});
        }
        out.push_back(verdict("T4", "3",
                              {ineq("R0_V > 1", th.R0_V, ">", 1.0),
                               ineq("r/(2 sqrt(K_hat)) > max{d_h, d_tilde/(a+rho)}", g, ">", opt_max(Opt(p.d_h), dt_ratio))},
                              {"-> (0,0) or (S_h^2, I_h^2) for almost all x0", mf, {conv}}));
    }
    return out;
}

/// Healthy-mite-free subsystem (S_h, I_h, I_m).
inline std::vector<TheoremVerdict> check_theorem5_hvmi(const Params& p, const State& x0)
{
    using namespace detail;
    const Thresholds th = thresholds(p);
    const Opt g         = growth_ratio(p);
    const Opt Nt        = th.Im_breakeven;
    const SystemId hv   = SystemId::HealthyMiteFree;
    std::vector<TheoremVerdict> out;
    out.push_back(verdict("T5", "0",
                          {ineq("r/(2 sqrt(K_hat)) > d_h", g, ">", p.d_h),
                           ineq("Nbar_h* < (d_m+mu_m)/(c alpha)", th.Nbar_h_star, "<", Nt)},
                          {"I_m -> 0", hv, {extinct(Observable::I_m)}}));
    out.push_back(verdict("T5", "2", {ineq("r c alpha < d_h (d_m+mu_m)", p.r * p.c * p.alpha, "<", p.d_h * (p.d_m + p.mu_m))},
                          {"no interior equilibrium", hv, {}, StructuralClaim::NoInteriorHvmi}));
    out.push_back(verdict("T5", "3",
                          {ineq("r/(2 sqrt(K_hat)) > (d_h+mu_h+alpha N*)/rho", g, ">", bee_persistence_rate(p, th)),
                           ineq("N_h(0) > Nund_h_c", x0.N_h(), ">", th.Nund_h_c),
                           ineq("Nbar_h* > (d_m+mu_m)/(c alpha)", th.Nbar_h_star, ">", Nt),
                           ineq("R0_V < 1", th.R0_V, "<", 1.0)},
                          {"I_h and I_m persist", hv, {persistent(Observable::I_h), persistent(Observable::I_m)}}));
    return out;
}

/// Persistence of bees in the full system, including its bee-only reduction.
inline std::vector<TheoremVerdict> check_theorem6_full(const Params& p, const State& x0)
{
    using namespace detail;
    const Thresholds th = thresholds(p);
    const Opt g         = growth_ratio(p);
    const Opt rate      = bee_persistence_rate(p, th);
    const SystemId bo   = SystemId::BeeOnly;
    std::vector<TheoremVerdict> out;

    out.push_back(verdict("T6", "reduction",
                          {ineq("r/(2 sqrt(K_hat)) > d_h", g, ">", p.d_h),
                           ineq("N* < d_m/alpha", th.N_star, "<", value_or_none(p.alpha > 0, p.d_m / p.alpha)),
                           ineq("R0_V < 1", th.R0_V, "<", 1.0)},
                          {"S_m, I_h, I_m -> 0", SystemId::Full, {extinct(Observable::N_m), extinct(Observable::I_h)}}));
    out.push_back(verdict("T6", "bee-1", {ineq("r/(2 sqrt(K_hat)) < d_h", g, "<", p.d_h)},
                          {"bee-only -> 0", bo, {extinct(Observable::S_h)}}));
    {
        Claim conv{ClaimKind::ConvergesToOneOf, Observable::S_h, 0, {}, {}};
        if (th.Nbar_h_star) {
            conv.candidates.push_back({*th.Nbar_h_star, 0, 0, 0});
        }
        out.push_back(verdict("T6", "bee-2a",
                              {ineq("r/(2 sqrt(K_hat)) > d_h", g, ">", p.d_h), ineq("S_h(0) > Nbar_h_c", x0.S_h, ">", th.Nbar_h_c)},
                              {"bee-only -> Nbar_h*", bo, {conv}}));
    }
    out.push_back(verdict("T6", "bee-2b",
                          {ineq("r/(2 sqrt(K_hat)) > d_h", g, ">", p.d_h), ineq("S_h(0) < Nbar_h_c", x0.S_h, "<", th.Nbar_h_c)},
                          {"bee-only -> 0", bo, {extinct(Observable::S_h)}}));
    out.push_back(verdict("T6", "1",
                          {ineq("r/(2 sqrt(K_hat)) > max{S_h loss rate, (d_h+mu_h+alpha N*)/rho}", g, ">",
                                opt_max(th.S_h_loss, rate)),
                           ineq("N_h(0) >= S_h(0)", x0.N_h(), ">=", x0.S_h), ineq("S_h(0) > S_h_c", x0.S_h, ">", th.S_h_c)},
                          {"S_h persistent >= S_h*", SystemId::Full,
                           {persistent(Observable::S_h, th.S_h_star.value_or(0))}}));
    {
        Opt ratio;
        if (th.Nbar_h_star) {
            ratio = std::min(p.beta_h, p.c * p.beta_mh_hat + p.c * p.beta_mh_tilde + p.c * p.alpha * *th.Nbar_h_star) /
                    std::max(p.d_h + p.mu_h, p.d_m + p.mu_m);
        }
        out.push_back(verdict("T6", "2",
                              {ineq("r/(2 sqrt(K_hat)) > disease loss rate", g, ">", disease_loss_rate(p, th)),
                               ineq("S_h(0) > S_h_c", x0.S_h, ">", th.S_h_c),
                               ineq("Nbar_h* < d_m/(alpha c)", th.Nbar_h_star, "<", th.H_star),
                               ineq("min{beta_h, c(beta_mh_hat+beta_mh_tilde+alpha Nbar_h*)}/max{d_h+mu_h, d_m+mu_m} >= 1",
                                    ratio, ">=", 1.0)},
                              {"I = c I_h + I_m persists", SystemId::Full, {persistent(Observable::I)}},
                              {"ratio uses Nbar_h* where the corresponding full-system disease clause uses S_h*"}));
    }
    for (auto& b : full_no_interior_bundles(p)) {
        Conclusion c{"no interior equilibrium", SystemId::Full, {}, StructuralClaim::NoInteriorFull};
        c.bundle = b.id;
        // each bundle is a pair of inequalities; rebuild them from the recorded numbers
        std::vector<Inequality> hyp;
        auto v = [&](std::string_view k) {
            for (auto& [key, val] : b.values) {
                if (key == k) {
                    return val;
                }
            }
            return std::numeric_limits<double>::quiet_NaN();
        };
        if (b.id == "bundle-1") {
            hyp = {ineq("R0_V > q", v("R0_V"), ">", v("q")), ineq("ratio > bound", v("ratio"), ">", v("bound"))};
        }
        else if (b.id == "bundle-2") {
            hyp = {ineq("lhs > rhs", v("lhs"), ">", v("rhs")), ineq("0 < X", 0.0, "<", v("X")),
                   ineq("X < d_m", v("X"), "<", v("d_m"))};
        }
        else if (b.id == "bundle-3") {
            hyp = {ineq("R0_V < q", v("R0_V"), "<", v("q")), ineq("0 < ratio", 0.0, "<", v("ratio")),
                   ineq("ratio < bound", v("ratio"), "<", v("bound"))};
        }
        else {
            hyp = {ineq("lhs < rhs", v("lhs"), "<", v("rhs")), ineq("X > bound", v("X"), ">", v("bound"))};
        }
        out.push_back(verdict("T6", "3-" + b.id.substr(b.id.size() - 1), hyp, c));
    }
    out.push_back(verdict("T6", "4",
                          {ineq("r/(2 sqrt(K_hat)) > (d_h+mu_h+alpha N*)/rho", g, ">", rate),
                           ineq("N_h(0) > Nund_h_c", x0.N_h(), ">", th.Nund_h_c),
                           ineq("Nbar_h* > (d_m+mu_m)/(c alpha)", th.Nbar_h_star, ">", th.Im_breakeven),
                           ineq("R0_V < 1", th.R0_V, "<", 1.0)},
                          {"N_m persists", SystemId::Full, {persistent(Observable::N_m)}}));
    return out;
}

inline std::vector<TheoremVerdict> check_theorem(int n, const Params& p, const State& x0, const ParamsRaw* raw = nullptr)
{
    switch (n) {
    case 1:
        return check_theorem1(p, x0, raw);
    case 2:
        return check_theorem2(p, x0);
    case 3:
        return check_theorem3_virus_free(p);
    case 4:
        return check_theorem4_mite_free(p);
    case 5:
        return check_theorem5_hvmi(p, x0);
    case 6:
        return check_theorem6_full(p, x0);
    }
    throw DomainError("theorem number must be 1..6");
}

inline std::vector<TheoremVerdict> check_all(const Params& p, const State& x0, const ParamsRaw* raw = nullptr)
{
    std::vector<TheoremVerdict> out;
    for (int n = 1; n <= 6; ++n) {
        auto v = check_theorem(n, p, x0, raw);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cross-validation

enum class Agreement { Confirmed, Vacuous, Violated, Undetermined };

inline std::string_view name(Agreement a)
{
    switch (a) {
    case Agreement::Confirmed:
        return "confirmed";
    case Agreement::Vacuous:
        return "vacuous";
    case Agreement::Violated:
        return "violated";
    case Agreement::Undetermined:
        return "undetermined";
    }
    return "?";
}

struct CrossConfig {
    double min_horizon_factor = 10.0; // horizon must reach this many slowest lifetimes, 1/min(d_h, d_m)
    double persist_tol        = 0.05; // relative slack on persistence levels and bounds
    double converge_tol       = 0.01; // relative distance to a candidate equilibrium
    double saddle_tol         = 0.05;
    OutcomeConfig outcome;
};

struct CrossValidation {
    TheoremVerdict verdict;
    OutcomeLabel simulated = OutcomeLabel::Undetermined;
    Agreement agreement    = Agreement::Vacuous;
    std::vector<std::string> diagnostics;
};

namespace detail {

inline std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline double state_distance(const State& a, const State& b)
{
    double m = 0, s = 1.0;
    for (int i = 0; i < 4; ++i) {
        const auto c = static_cast<Compartment>(i);
        m            = std::max(m, std::abs(a[c] - b[c]));
        s            = std::max(s, std::abs(b[c]));
    }
    return m / s;
}

struct ClaimCheck {
    Agreement result;
    std::string why;
};

inline double cut_of(const Trajectory& tr, const CrossConfig& cc)
{
    return cc.outcome.persist_factor * tr.extinction_eps;
}

inline ClaimCheck check_extinct(const Trajectory& tr, Observable o, const CrossConfig& cc)
{
    const double cut = cut_of(tr, cc);
    if (tr.has_event(EventKind::TotalExtinct)) {
        return {Agreement::Confirmed, "total extinction"};
    }
    const WindowStats w = window_stats(tr, o, cc.outcome.window_fraction);
    if (w.end <= cut) {
        return {Agreement::Confirmed, std::string(name(o)) + " end " + fmt(w.end)};
    }
    if (tr.outcome.bees_committed) {
        return {Agreement::Confirmed, "bees below the Allee threshold"};
    }
    if (w.max_second_half >= w.max_first_half && w.min > cut) {
        return {Agreement::Violated, std::string(name(o)) + " not decaying, window min " + fmt(w.min)};
    }
    return {Agreement::Undetermined, std::string(name(o)) + " decaying, end " + fmt(w.end)};
}

inline ClaimCheck check_persistent(const Trajectory& tr, const Claim& cl, const CrossConfig& cc)
{
    const double cut = cut_of(tr, cc);
    const std::string nm(name(cl.obs));
    if (tr.has_event(EventKind::TotalExtinct) || tr.outcome.bees_committed) {
        return {Agreement::Violated, nm + ": colony extinct"};
    }
    const WindowStats w = window_stats(tr, cl.obs, cc.outcome.window_fraction);
    if (w.end <= cut) {
        return {Agreement::Violated, nm + " extinct, end " + fmt(w.end)};
    }
    if (cl.level <= 0.0) {
        return w.min > cut ? ClaimCheck{Agreement::Confirmed, nm + " window min " + fmt(w.min)}
                           : ClaimCheck{Agreement::Undetermined, nm + " dipped to " + fmt(w.min)};
    }
    const double need = (1.0 - cc.persist_tol) * cl.level;
    if (w.min >= need) {
        return {Agreement::Confirmed, nm + " window min " + fmt(w.min) + " >= " + fmt(need)};
    }
    if (w.end < need && w.end <= w.first) {
        return {Agreement::Violated, nm + " window min " + fmt(w.min) + " < " + fmt(need) + " and not rising"};
    }
    return {Agreement::Undetermined, nm + " below level but rising"};
}

inline ClaimCheck check_bounded(const Trajectory& tr, const Claim& cl, const CrossConfig& cc)
{
    const std::string nm(name(cl.obs));
    const double cap    = (1.0 + cc.persist_tol) * cl.level;
    const WindowStats w = window_stats(tr, cl.obs, cc.outcome.window_fraction);
    if (w.max <= cap) {
        return {Agreement::Confirmed, nm + " window max " + fmt(w.max) + " <= " + fmt(cap)};
    }
    if (w.end > cap) {
        return {Agreement::Violated, nm + " window end " + fmt(w.end) + " > " + fmt(cap)};
    }
    return {Agreement::Undetermined, nm + " exceeded the bound early in the window"};
}

inline ClaimCheck check_converges(const Trajectory& tr, const Claim& cl, const CrossConfig& cc)
{
    const State& e = tr.back();
    for (auto& cand : cl.candidates) {
        if (cand == State{}) {
            auto ex = check_extinct(tr, Observable::N_h, cc);
            if (ex.result == Agreement::Confirmed) {
                return {Agreement::Confirmed, "-> extinction (" + ex.why + ")"};
            }
            continue;
        }
        const double dist = state_distance(e, cand);
        if (dist <= cc.converge_tol) {
            return {Agreement::Confirmed, "end within " + fmt(dist) + " of a listed equilibrium"};
        }
    }
    const bool zero_listed = std::find(cl.candidates.begin(), cl.candidates.end(), State{}) != cl.candidates.end();
    if (zero_listed && check_extinct(tr, Observable::N_h, cc).result == Agreement::Undetermined) {
        return {Agreement::Undetermined, "bees still decaying"};
    }
    for (auto& s : cl.saddles) {
        if (state_distance(e, s) <= cc.saddle_tol) {
            return {Agreement::Undetermined, "end near a saddle"};
        }
    }
    // settled: the last quarter of the window moves less than the tolerance
    const std::size_t b = window_begin(tr, cc.outcome.window_fraction);
    const std::size_t q = b + 3 * (tr.size() - b) / 4;
    double drift        = 0;
    for (std::size_t k = q; k < tr.size(); ++k) {
        drift = std::max(drift, state_distance(tr.x[k], e));
    }
    if (drift > cc.converge_tol) {
        return {Agreement::Undetermined, "not settled, drift " + fmt(drift)};
    }
    // A slow approach can look flat over a short window; only resting at some other
    // equilibrium contradicts the claim.
    for (auto& eq : equilibria(tr.sys, tr.params)) {
        const double dist = state_distance(e, eq.location);
        if (dist <= cc.converge_tol) {
            return {Agreement::Violated, "settled within " + fmt(dist) + " of unlisted equilibrium '" +
                                             eq.existence_condition + "'"};
        }
    }
    return {Agreement::Undetermined, "slow drift away from every equilibrium, end not resolved"};
}

inline ClaimCheck check_claim(const Trajectory& tr, const Claim& cl, const CrossConfig& cc)
{
    switch (cl.kind) {
    case ClaimKind::Extinct:
        return check_extinct(tr, cl.obs, cc);
    case ClaimKind::Persistent:
        return check_persistent(tr, cl, cc);
    case ClaimKind::BoundedAbove:
        return check_bounded(tr, cl, cc);
    case ClaimKind::ConvergesToOneOf:
        return check_converges(tr, cl, cc);
    }
    return {Agreement::Undetermined, ""};
}

inline ClaimCheck check_structural(const TheoremVerdict& v, const Params& p)
{
    switch (v.predicted.structural) {
    case StructuralClaim::VirusFreeInterior: {
        for (auto& e : equilibria_virus_free(p)) {
            if (e.existence_condition != "interior") {
                continue;
            }
            if (v.predicted.expected_class == StabilityClass::Nonhyperbolic) {
                return {Agreement::Undetermined, "H* = sqrt(K_hat): no class predicted"};
            }
            return e.cls == v.predicted.expected_class
                       ? ClaimCheck{Agreement::Confirmed, "interior is a " + std::string(name(e.cls))}
                       : ClaimCheck{Agreement::Violated, "interior is a " + std::string(name(e.cls)) + ", predicted " +
                                                             std::string(name(v.predicted.expected_class))};
        }
        return {Agreement::Violated, "no interior equilibrium found"};
    }
    case StructuralClaim::NoInteriorHvmi: {
        auto rep = interior_healthy_mite_free(p, false);
        return rep.roots.empty() ? ClaimCheck{Agreement::Confirmed, "scan found no interior root"}
                                 : ClaimCheck{Agreement::Violated, std::to_string(rep.roots.size()) + " interior root(s)"};
    }
    case StructuralClaim::NoInteriorFull: {
        auto rep = interior_full(p);
        if (rep.roots.empty()) {
            return {Agreement::Confirmed, "scan found no interior root"};
        }
        std::string why = std::to_string(rep.roots.size()) + " interior root(s), max residual ";
        double res      = 0;
        for (auto& r : rep.roots) {
            res = std::max(res, r.equilibrium.residual);
        }
        return {Agreement::Violated, why + fmt(res)};
    }
    case StructuralClaim::RawGrowthCriterion: {
        const Thresholds th = thresholds(p);
        const Tri ref = compare(growth_ratio(p), ">", bee_persistence_rate(p, th));
        return ref == v.hypothesis ? ClaimCheck{Agreement::Confirmed, "same truth value as clause c"}
                                   : ClaimCheck{Agreement::Violated, "clause c growth test is " + std::string(name(ref))};
    }
    case StructuralClaim::None:
        break;
    }
    return {Agreement::Undetermined, ""};
}

} // namespace detail

/// Check each verdict against the trajectory of the system it speaks about. Structural
/// verdicts are checked against the equilibrium solvers instead.
inline std::vector<CrossValidation> cross_validate(const std::vector<TheoremVerdict>& verdicts,
                                                   const std::map<SystemId, Trajectory>& trajectories,
                                                   const Params& p, const CrossConfig& cc = {})
{
    std::vector<CrossValidation> out;
    const double min_h = cc.min_horizon_factor / std::min(p.d_h, p.d_m);
    for (auto& v : verdicts) {
        CrossValidation cv;
        cv.verdict = v;
        auto it    = trajectories.find(v.predicted.sys);
        if (it != trajectories.end()) {
            cv.simulated = it->second.outcome.label;
        }
        if (!v.hypothesis_holds) {
            cv.agreement = Agreement::Vacuous;
            cv.diagnostics.push_back("hypothesis " + std::string(name(v.hypothesis)));
            out.push_back(std::move(cv));
            continue;
        }
        if (v.structural()) {
            auto r       = detail::check_structural(v, p);
            cv.agreement = r.result;
            cv.diagnostics.push_back(r.why);
            out.push_back(std::move(cv));
            continue;
        }
        if (it == trajectories.end()) {
            cv.agreement = Agreement::Undetermined;
            cv.diagnostics.push_back("no trajectory for " + std::string(name(v.predicted.sys)));
            out.push_back(std::move(cv));
            continue;
        }
        const Trajectory& tr = it->second;
        if (!tr.has_event(EventKind::TotalExtinct) && tr.t_end - tr.t0 < min_h * (1 - 1e-12)) {
            cv.agreement = Agreement::Undetermined;
            cv.diagnostics.push_back("horizon " + detail::fmt(tr.t_end - tr.t0) + " < " + detail::fmt(min_h));
            out.push_back(std::move(cv));
            continue;
        }
        bool violated = false, undetermined = false;
        for (auto& cl : v.predicted.claims) {
            detail::ClaimCheck r;
            try {
                r = detail::check_claim(tr, cl, cc);
            }
            catch (const AnalysisError& e) {
                r = {Agreement::Undetermined, e.what()};
            }
            violated |= r.result == Agreement::Violated;
            undetermined |= r.result == Agreement::Undetermined;
            cv.diagnostics.push_back(r.why);
        }
        cv.agreement = violated ? Agreement::Violated : (undetermined ? Agreement::Undetermined : Agreement::Confirmed);
        out.push_back(std::move(cv));
    }
    return out;
}

} // namespace apis
