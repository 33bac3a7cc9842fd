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

#include "apis/integrator.hpp"
#include "apis/interior.hpp"
#include "apis/parallel.hpp"
#include "apis/theorems.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace apis {

/// One randomized (params, x0) pair.
struct Draw {
    std::size_t id = 0;
    Params p;
    State x0;
    bool viable      = true;  // r/(2 sqrt(K_hat)) clears d_h with margin; otherwise it falls short
    bool established = false; // x0 starts inside the persistence region of the bees
    int attempts     = 0;
};

namespace detail {

inline double uniform(std::mt19937_64& g, double a, double b)
{
    return std::uniform_real_distribution<double>(a, b)(g);
}

inline double log_uniform(std::mt19937_64& g, double a, double b)
{
    return std::exp(uniform(g, std::log(a), std::log(b)));
}

inline Params random_params(std::mt19937_64& g, bool viable)
{
    Params p;
    p.r             = uniform(g, 500, 3000);
    p.K_hat         = log_uniform(g, 1e5, 4e6);
    p.rho           = uniform(g, 0.5, 1.0);
    p.d_h           = uniform(g, 0.01, 0.3);
    p.mu_h          = uniform(g, 0.01, 0.3);
    p.alpha         = log_uniform(g, 1e-3, 0.1);
    p.c             = log_uniform(g, 1e-3, 0.02);
    p.d_m           = uniform(g, 0.02, 0.3);
    p.mu_m          = log_uniform(g, 1e-3, 0.1);
    p.beta_h        = uniform(g, 0.01, 0.99);
    p.beta_mh_hat   = log_uniform(g, 1e-3, 0.2);
    p.beta_mh_tilde = log_uniform(g, 1e-4, 1e-2);
    p.beta_hm_hat   = log_uniform(g, 1e-3, 0.2);
    if (!viable) {
        // bring the peak per-capita birth rate below d_h
        p.r = uniform(g, 0.5, 0.95) * 2.0 * std::sqrt(p.K_hat) * p.d_h;
    }
    return p;
}

inline bool hyperbolic_everywhere(const Params& p, double margin)
{
    for (SystemId sys : all_systems) {
        for (auto& e : equilibria(sys, p)) {
            double scale = p.d_h + p.d_m;
            for (auto& z : e.eigenvalues) {
                scale = std::max(scale, std::abs(z));
            }
            for (auto& z : e.eigenvalues) {
                if (std::abs(z.real()) <= margin * scale) {
                    return false;
                }
            }
        }
    }
    return true;
}

inline bool away_from(double x, Opt threshold, double rel)
{
    return !threshold || std::abs(x - *threshold) >= rel * std::abs(*threshold);
}

} // namespace detail

/// Deterministic draw `id` of the well-conditioned sampler for a campaign seed. A tenth of
/// the draws have bee growth below d_h, the rest clear it (and the weighted-total bound)
/// by 5%. Every draw has hyperbolic equilibria in all systems and an initial state with
/// positive compartments, inside the attracting set when that is defined, and at least 1%
/// away from the initial-condition thresholds.
inline Draw sample_draw(std::uint64_t seed, std::size_t id)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(static_cast<std::uint64_t>(id) >> 32)};
    std::mt19937_64 g(seq);
    Draw d;
    d.id          = id;
    d.viable      = detail::uniform(g, 0, 1) >= 0.1;
    d.established = detail::uniform(g, 0, 1) < 0.5;
    for (d.attempts = 1; d.attempts <= 100000; ++d.attempts) {
        const Params p     = detail::random_params(g, d.viable);
        const Thresholds t = thresholds(p);
        const double grow  = p.r / (2.0 * std::sqrt(p.K_hat));
        if (d.viable && !(grow > 1.05 * p.d_h)) {
            continue;
        }
        if (d.viable && !(t.N_star && t.Nbar_h_star && t.Nbar_h_c)) {
            continue;
        }
        // bees
        double Nh;
        if (d.viable) {
            const double hi = *t.Nbar_h_star;
            double lo       = 1.1 * *t.Nbar_h_c;
            if (d.established) {
                if (t.Nund_h_star && *t.Nund_h_star < hi) {
                    lo = std::max(lo, *t.Nund_h_star);
                }
                Nh = detail::uniform(g, lo, hi);
            }
            else {
                Nh = detail::log_uniform(g, 0.2 * *t.Nbar_h_c, hi);
            }
        }
        else {
            Nh = detail::log_uniform(g, 10.0, 1e4);
        }
        const double fb = detail::uniform(g, 0.01, 0.5);
        const double fm = detail::uniform(g, 0.01, 0.5);
        double Nm;
        if (t.N_star) {
            const double budget = *t.N_star - p.c * Nh;
            if (!(budget >= 2.0)) {
                continue;
            }
            Nm = detail::uniform(g, 0.05, 0.95) * budget;
        }
        else {
            Nm = detail::log_uniform(g, 1.0, 100.0);
        }
        const State x{Nh * (1 - fb), Nh * fb, Nm * (1 - fm), Nm * fm};
        if (!(x.S_h >= 0.1 && x.I_h >= 0.1 && x.S_m >= 0.1 && x.I_m >= 0.1)) {
            continue;
        }
        const double rel = 0.01;
        if (!detail::away_from(x.N_h(), t.Nbar_h_c, rel) || !detail::away_from(x.N_h(), t.Nund_h_c, rel) ||
            !detail::away_from(x.S_h, t.S_h_c, rel) || !detail::away_from(x.S_h, t.Nbar_h_c, rel) ||
            !detail::away_from(x.N(p.c), t.N_c, rel)) {
            continue;
        }
        if (!detail::hyperbolic_everywhere(p, 1e-6)) {
            continue;
        }
        d.p  = p;
        d.x0 = x;
        return d;
    }
    throw AnalysisError("sampler found no admissible draw");
}

/// Horizon used for theorem checks: ten lifetimes of the longest-lived species.
inline double check_horizon(const Params& p)
{
    return 10.0 / std::min(p.d_h, p.d_m);
}

struct PointEvaluation {
    std::map<SystemId, Trajectory> trajectories;
    std::vector<TheoremVerdict> verdicts;
    std::vector<CrossValidation> results;
    std::vector<std::string> errors; // integration failures, per system
};

/// Simulates every system from the projections of x0 and checks all theorem clauses.
inline PointEvaluation evaluate_point(const Params& p, const State& x0, IntegrationConfig cfg,
                                      const CrossConfig& cc = {}, const ParamsRaw* raw = nullptr)
{
    PointEvaluation ev;
    for (SystemId sys : all_systems) {
        try {
            ev.trajectories.emplace(sys, integrate(sys, x0, p, cfg));
        }
        catch (const IntegrationError& e) {
            ev.errors.push_back(std::string(name(sys)) + ": " + e.what());
        }
    }
    ev.verdicts = check_all(p, x0, raw);
    ev.results  = cross_validate(ev.verdicts, ev.trajectories, p, cc);
    return ev;
}

struct CampaignConfig {
    std::size_t draws  = 1000;
    std::uint64_t seed = 1;
    unsigned threads   = 0;
    IntegrationConfig integration; // t_end is replaced by the per-draw horizon
    CrossConfig cross;
};

struct DrawResult {
    Draw draw;
    std::vector<CrossValidation> results;
    std::vector<std::string> errors;
};

struct AgreementCounts {
    std::size_t confirmed = 0, vacuous = 0, violated = 0, undetermined = 0;

    void add(Agreement a)
    {
        switch (a) {
        case Agreement::Confirmed:
            ++confirmed;
            break;
        case Agreement::Vacuous:
            ++vacuous;
            break;
        case Agreement::Violated:
            ++violated;
            break;
        case Agreement::Undetermined:
            ++undetermined;
            break;
        }
    }
};

struct CampaignReport {
    std::vector<DrawResult> draws;
    AgreementCounts simulated;  // clauses checked against trajectories
    AgreementCounts structural; // clauses checked against the equilibrium solvers
    std::map<std::string, AgreementCounts> by_clause;
    std::size_t integration_errors = 0;
};

inline CampaignReport run_campaign(const CampaignConfig& cfg)
{
    CampaignReport rep;
    rep.draws.resize(cfg.draws);
    parallel_for(
        cfg.draws,
        [&](std::size_t i) {
            DrawResult dr;
            dr.draw                = sample_draw(cfg.seed, i);
            IntegrationConfig ic   = cfg.integration;
            ic.t_end               = ic.t0 + check_horizon(dr.draw.p);
            auto ev                = evaluate_point(dr.draw.p, dr.draw.x0, ic, cfg.cross);
            dr.results             = std::move(ev.results);
            dr.errors              = std::move(ev.errors);
            rep.draws[i]           = std::move(dr);
        },
        cfg.threads);
    for (auto& dr : rep.draws) {
        rep.integration_errors += dr.errors.size();
        for (auto& r : dr.results) {
            (r.verdict.structural() ? rep.structural : rep.simulated).add(r.agreement);
            rep.by_clause[r.verdict.id()].add(r.agreement);
        }
    }
    return rep;
}

} // namespace apis
