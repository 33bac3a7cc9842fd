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
#include "apis/io.hpp"
#include "apis/parallel.hpp"
#include "apis/theorems.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace apis {

struct ScenarioPreset {
    std::string id;
    Params params;
    State x0;
    SystemId sys = SystemId::Full;
    double horizon = 2000;
    OutcomeLabel expected = OutcomeLabel::Undetermined;
    std::string doc;
};

namespace detail {

inline Params fig2_base()
{
    Params p;
    p.r             = 1500;
    p.K_hat         = 1e6;
    p.rho           = 0.9;
    p.d_h           = 0.15;
    p.mu_h          = 0.1;
    p.alpha         = 0.005;
    p.d_m           = 0.1;
    p.mu_m          = 0.01;
    p.c             = 0.005;
    p.beta_h        = 0.24;
    p.beta_mh_hat   = 0.03;
    p.beta_mh_tilde = 0.005;
    p.beta_hm_hat   = 0.03;
    return p;
}

inline Params fig3_base(double K_hat = 1600001)
{
    Params p        = fig2_base();
    p.K_hat         = K_hat;
    p.alpha         = 0.05;
    p.beta_h        = 0.3;
    p.beta_mh_hat   = 0.08;
    p.beta_mh_tilde = 0.001;
    return p;
}

// Only the virus-free parameters are given for the first figure; the rest stay zero
// except rho, and do not enter the virus-free equations.
inline Params fig1_base(double d_m = 0.1)
{
    Params p;
    p.r     = 1500;
    p.K_hat = 2000.0 * 2000.0;
    p.rho   = 1;
    p.d_h   = 0.01;
    p.alpha = 0.005;
    p.c     = 0.01;
    p.d_m   = d_m;
    return p;
}

} // namespace detail

inline const std::vector<ScenarioPreset>& presets()
{
    using L = OutcomeLabel;
    using S = SystemId;
    static const std::vector<ScenarioPreset> table = {
        {"fig1", detail::fig1_base(), {2200, 0, 87, 0}, S::VirusFree, 500, L::CatastrophicCollapse,
         "Caption: r=1500, alpha=0.005, c=0.01, d_h=0.01, d_m=0.1; sqrt(K_hat)=2000. Here d_m/(alpha c) = sqrt(K_hat) "
         "exactly, so the interior point (2000, 73) is nonhyperbolic (zero trace). The run starts near it at "
         "(2200, 87) because (2000, 73) is the equilibrium itself."},
        {"fig1_dm009", detail::fig1_base(0.09), {2000, 0, 73, 0}, S::VirusFree, 500, L::CatastrophicCollapse,
         "Same as fig1 with d_m=0.09, so d_m/(alpha c) = 1800 < sqrt(K_hat) strictly and the interior is a source."},
        {"fig2_mitefree", detail::fig2_base(), {4001, 10, 0, 0}, S::MiteFree, 2000, L::DiseaseFreePersistence,
         "Caption: r=1500; K=1000000; rho=0.9; d_h=.15; mu_h=0.1; alpha=0.005; d_m=0.1; mu_m=0.01; c=0.005; "
         "beta_h=.24; beta_mh_hat=0.03; beta_mh_tilde=.005; beta_hm_hat=0.03. K is loaded as K_hat. "
         "S_h(0)=4001, I_h(0)=10."},
        {"fig2_virusfree", detail::fig2_base(), {4001, 0, 5, 0}, S::VirusFree, 2000, L::Coexistence,
         "Parameters as fig2_mitefree. S_h(0)=4001, S_m(0)=5."},
        {"fig2_full", detail::fig2_base(), {4001, 10, 5, 10}, S::Full, 2000, L::Coexistence,
         "Parameters as fig2_mitefree. S_h(0)=4001, I_h(0)=10, S_m(0)=5, I_m(0)=10. Healthy mites are expected to "
         "die out while infected mites persist."},
        {"fig3_mitefree", detail::fig3_base(), {7684, 1700, 0, 0}, S::MiteFree, 2000, L::Coexistence,
         "Caption: r=1500; rho=0.9; K_hat=1600001; d_h=0.15; mu_h=0.1; alpha=0.05; c=0.005; d_m=0.1; mu_m=0.01; "
         "beta_h=0.3; beta_mh_hat=0.08; beta_mh_tilde=0.001; beta_hm_hat=0.03. S_h(0)=7684, I_h(0)=1700."},
        {"fig3_virusfree", detail::fig3_base(), {410, 0, 35, 0}, S::VirusFree, 2000, L::CatastrophicCollapse,
         "Parameters as fig3_mitefree. S_h(0)=410, S_m(0)=35. The companion full-system caption prints K=160001; "
         "see fig3_virusfree_k160001."},
        {"fig3_full", detail::fig3_base(), {410, 10, 35, 10}, S::Full, 2000, L::AllExtinct,
         "Caption: r=1500; K=160001; rho=0.9; ... ; S_h(0)=410, I_h(0)=10, S_m(0)=35, I_m(0)=10. Uses "
         "K_hat=1600001 like the other fig3 presets."},
        {"fig3_virusfree_k160001", detail::fig3_base(160001), {410, 0, 35, 0}, S::VirusFree, 2000,
         L::CatastrophicCollapse, "fig3_virusfree with the alternative K_hat=160001."},
    };
    return table;
}

inline const ScenarioPreset& preset(std::string_view id)
{
    for (auto& s : presets()) {
        if (s.id == id) {
            return s;
        }
    }
    throw DomainError("unknown scenario '" + std::string(id) + "'");
}

/// FNV-1a over a %.17g rendering of every preset field. Pinned in the tests.
inline std::uint64_t preset_checksum()
{
    std::uint64_t h = 1469598103934665603ull;
    auto feed       = [&](std::string_view s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 1099511628211ull;
        }
    };
    auto num = [&](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g;", v);
        feed(buf);
    };
    for (auto& s : presets()) {
        feed(s.id);
        for (auto& [n, m] : params_fields) {
            num(s.params.*m);
        }
        for (int i = 0; i < 4; ++i) {
            num(s.x0[static_cast<Compartment>(i)]);
        }
        feed(name(s.sys));
        num(s.horizon);
        feed(name(s.expected));
    }
    return h;
}

struct Reproduction {
    ScenarioPreset preset;
    Trajectory trajectory;
    std::vector<CrossValidation> checks;
    bool pass = false;
};

inline IntegrationConfig preset_config(const ScenarioPreset& s)
{
    IntegrationConfig cfg;
    cfg.t_end = s.horizon;
    return cfg;
}

/// Runs a preset and checks the theorem clauses that speak about its system.
inline Reproduction reproduce(const ScenarioPreset& s, std::optional<IntegrationConfig> cfg = std::nullopt)
{
    Reproduction rep;
    rep.preset = s;
    try {
        rep.trajectory = integrate(s.sys, s.x0, s.params, cfg.value_or(preset_config(s)));
    }
    catch (const IntegrationError& e) {
        throw IntegrationError("scenario " + s.id + ": " + e.what());
    }
    std::vector<TheoremVerdict> relevant;
    for (auto& v : check_all(s.params, s.x0)) {
        if (v.predicted.sys == s.sys) {
            relevant.push_back(v);
        }
    }
    rep.checks = cross_validate(relevant, {{s.sys, rep.trajectory}}, s.params);
    rep.pass   = outcome_matches(s.expected, rep.trajectory.outcome.label);
    return rep;
}

inline Json report_json(const Reproduction& r)
{
    Json checks = Json::array();
    for (auto& c : r.checks) {
        checks.push_back(to_json(c));
    }
    return {{"id", r.preset.id},
            {"doc", r.preset.doc},
            {"sys", name(r.preset.sys)},
            {"params", to_json(r.preset.params)},
            {"x0", to_json(r.preset.sys, r.preset.x0)},
            {"horizon", r.preset.horizon},
            {"expected", name(r.preset.expected)},
            {"outcome", to_json(r.trajectory.outcome, r.preset.sys)},
            {"pass", r.pass},
            {"thresholds", to_json(thresholds(r.preset.params))},
            {"checks", checks}};
}

/// Writes <id>_trajectory.csv, <id>_events.csv and <id>_report.json into `dir`.
inline void write_reproduction(const Reproduction& r, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    std::ofstream t(dir / (r.preset.id + "_trajectory.csv"));
    write_trajectory_csv(t, r.trajectory);
    std::ofstream e(dir / (r.preset.id + "_events.csv"));
    write_events_csv(e, r.trajectory);
    std::ofstream j(dir / (r.preset.id + "_report.json"));
    j << report_json(r).dump(2) << '\n';
    if (!t || !e || !j) {
        throw std::runtime_error("could not write reproduction files to " + dir.string());
    }
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepAxis {
    std::string parameter;
    double lo = 0, hi = 0;
    std::size_t count = 1;

    double at(std::size_t k) const
    {
        return count == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
    }
};

struct SweepSpec {
    SystemId sys = SystemId::Full;
    Params base;
    std::vector<SweepAxis> axes; // one or two
    State x0;
    std::optional<double> bee_fraction; // when set, S_h(0) = fraction * Nbar_h* of the cell
    double horizon = 2000;
    IntegrationConfig integration;

    void validate() const
    {
        if (axes.empty() || axes.size() > 2) {
            throw DomainError("a sweep needs one or two axes");
        }
        std::size_t cells = 1;
        for (auto& a : axes) {
            if (a.count == 0 || !(a.hi >= a.lo)) {
                throw DomainError("axis '" + a.parameter + "' needs count >= 1 and hi >= lo");
            }
            (void)with(base, a.parameter, a.lo); // throws on unknown names
            cells *= a.count;
            if (cells > 1000000) {
                throw DomainError("sweep grid exceeds 1e6 cells");
            }
        }
        if (!(horizon > 0.0)) {
            throw DomainError("sweep horizon must be positive");
        }
    }
    std::size_t cells() const
    {
        std::size_t n = 1;
        for (auto& a : axes) {
            n *= a.count;
        }
        return n;
    }
};

struct SweepCell {
    std::vector<double> coords;
    OutcomeLabel outcome = OutcomeLabel::Undetermined;
    int hopf_sign        = 0; // sign of H* - sqrt(K_hat)
    Opt R0_V;
    std::string error;
};

inline SweepCell sweep_cell(const SweepSpec& spec, std::size_t index)
{
    SweepCell cell;
    Params p      = spec.base;
    std::size_t k = index;
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
        const auto& ax = spec.axes[a];
        const double v = ax.at(k % ax.count);
        k /= ax.count;
        p = with(p, ax.parameter, v);
    }
    for (auto& ax : spec.axes) {
        cell.coords.push_back(get(p, ax.parameter));
    }
    const Thresholds th = thresholds(p);
    cell.R0_V           = th.R0_V;
    if (th.H_star) {
        const double g = *th.H_star - std::sqrt(p.K_hat);
        cell.hopf_sign = (g > 0) - (g < 0);
    }
    try {
        p.validate();
        State x0 = spec.x0;
        if (spec.bee_fraction) {
            if (!th.Nbar_h_star) {
                throw DomainError("bee-scaled x0 needs Nbar_h* defined");
            }
            x0.S_h = *spec.bee_fraction * *th.Nbar_h_star;
        }
        IntegrationConfig cfg = spec.integration;
        cfg.t_end             = cfg.t0 + spec.horizon;
        cell.outcome          = integrate(spec.sys, x0, p, cfg).outcome.label;
    }
    catch (const std::exception& e) {
        cell.error = e.what();
    }
    return cell;
}

inline std::vector<SweepCell> sweep(const SweepSpec& spec, unsigned threads = 0)
{
    spec.validate();
    std::vector<SweepCell> cells(spec.cells());
    parallel_for(
        cells.size(), [&](std::size_t i) { cells[i] = sweep_cell(spec, i); }, threads);
    return cells;
}

inline void write_sweep_csv(std::ostream& os, const SweepSpec& spec, const std::vector<SweepCell>& cells)
{
    os << "cell";
    for (auto& a : spec.axes) {
        os << ',' << a.parameter;
    }
    os << ",outcome,hopf_sign,R0_V,error\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        os << i;
        for (double c : cells[i].coords) {
            os << ',' << format_double(c);
        }
        os << ',' << name(cells[i].outcome) << ',' << cells[i].hopf_sign << ','
           << (cells[i].R0_V ? format_double(*cells[i].R0_V) : std::string()) << ',';
        // keep the error column one field
        std::string err = cells[i].error;
        std::replace(err.begin(), err.end(), ',', ';');
        os << err << '\n';
    }
}

inline Json sweep_manifest(const SweepSpec& spec)
{
    Json axes = Json::array();
    for (auto& a : spec.axes) {
        axes.push_back({{"parameter", a.parameter}, {"lo", a.lo}, {"hi", a.hi}, {"count", a.count}});
    }
    return {{"version", APIS_VERSION},
            {"sys", name(spec.sys)},
            {"base", to_json(spec.base)},
            {"axes", axes},
            {"x0", to_json(spec.sys, spec.x0)},
            {"bee_fraction", spec.bee_fraction ? Json(*spec.bee_fraction) : Json(nullptr)},
            {"horizon", spec.horizon},
            {"rel_tol", spec.integration.rel_tol},
            {"abs_tol", spec.integration.abs_tol},
            {"extinction_eps", spec.integration.extinction_eps}};
}

} // namespace apis
