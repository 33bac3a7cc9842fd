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
#include "apis/campaign.hpp"
#include "apis/io.hpp"
#include "apis/param_file.hpp"
#include "apis/scenarios.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace apis;

namespace {

// Exit codes of the command-line contract.
constexpr int exit_ok          = 0;
constexpr int exit_mismatch    = 1;
constexpr int exit_validation  = 2;
constexpr int exit_integration = 3;

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string params;
    std::string preset;
    std::vector<std::string> set;
    std::string x0;
    std::string sys;
    std::optional<double> t_end;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    std::string out;
    std::string format = "csv";
    std::uint64_t seed = 1;

    // check
    int theorem = 0;
    std::size_t campaign = 0;

    // reproduce
    std::string scenario;

    // sweep
    std::vector<std::string> axes;
    std::optional<double> bee_fraction;

    // hopf
    std::string parameter = "d_m";
    double lo = 0, hi = 0, step = 0;
};

std::string quote(std::string s)
{
    for (auto& ch : s) {
        if (ch == '"') {
            ch = '\'';
        }
        if (ch == '\n') {
            ch = ' ';
        }
    }
    return '"' + s + '"';
}

std::string join(const std::vector<std::string>& parts)
{
    std::string s;
    for (auto& p : parts) {
        s += (s.empty() ? "" : "; ") + p;
    }
    return s;
}

std::string opt_str(const Opt& v)
{
    return v ? format_double(*v) : "undefined";
}

struct Resolved {
    Params params;
    std::optional<ParamsRaw> raw;
    const ScenarioPreset* preset = nullptr;
};

Resolved resolve_params(const Options& o, bool required = true)
{
    Resolved r;
    KeyValues kv;
    if (!o.preset.empty()) {
        r.preset = &preset(o.preset);
        for (auto& [n, m] : params_fields) {
            kv[std::string(n)] = r.preset->params.*m;
        }
    }
    if (!o.params.empty() && o.params != "none") {
        if (r.preset) {
            throw ValidationError("--params and --preset are exclusive");
        }
        kv = read_key_values_file(o.params);
    }
    apply_overrides(kv, o.set);
    if (kv.empty()) {
        if (required) {
            throw ValidationError("missing params");
        }
        return r;
    }
    auto loaded = params_from_key_values(kv);
    r.params    = loaded.params;
    r.raw       = loaded.raw;
    return r;
}

std::vector<double> parse_list(const std::string& s, const std::string& what)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(detail::parse_number(what, item));
    }
    return out;
}

SystemId resolve_sys(const Options& o, const Resolved& r, SystemId fallback = SystemId::Full)
{
    if (!o.sys.empty()) {
        return parse_system(o.sys);
    }
    return r.preset ? r.preset->sys : fallback;
}

/// x0 as a full state. Short lists fill the compartments of `sys` in order.
std::optional<State> resolve_x0(const Options& o, const Resolved& r, SystemId sys)
{
    if (o.x0.empty()) {
        if (r.preset) {
            return r.preset->x0;
        }
        return std::nullopt;
    }
    auto v = parse_list(o.x0, "x0");
    if (v.size() == 4) {
        return State{v[0], v[1], v[2], v[3]};
    }
    if (v.size() != dimension(sys)) {
        std::string need = std::to_string(dimension(sys));
        if (dimension(sys) != 4) {
            need += " or 4";
        }
        throw ValidationError("x0 has " + std::to_string(v.size()) + " values; " + std::string(name(sys)) + " needs " +
                              need);
    }
    return embed(sys, v);
}

IntegrationConfig make_config(const Options& o, double default_t_end)
{
    IntegrationConfig cfg;
    cfg.t_end   = o.t_end.value_or(default_t_end);
    cfg.rel_tol = o.rel_tol;
    cfg.abs_tol = o.abs_tol;
    cfg.validate();
    return cfg;
}

void print_state(std::ostream& os, SystemId sys, const State& x, std::string_view prefix)
{
    for (Compartment c : compartments(sys)) {
        os << ' ' << prefix << name(c) << '=' << format_double(x[c]);
    }
}

void print_outcome(std::ostream& os, const Outcome& out)
{
    os << "outcome=" << name(out.label) << " expanding_peaks=" << out.expanding_peaks
       << " collapse_time=" << (out.collapse_time ? format_double(*out.collapse_time) : "none")
       << " bees_committed=" << (out.bees_committed ? "true" : "false");
}

template <class F>
void write_file(const fs::path& path, F&& body)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream os(path);
    if (!os) {
        throw std::runtime_error("cannot write " + path.string());
    }
    body(os);
}

// ---------------------------------------------------------------------------

int cmd_simulate(const Options& o)
{
    auto r        = resolve_params(o);
    SystemId sys  = resolve_sys(o, r);
    auto x0       = resolve_x0(o, r, sys);
    if (!x0) {
        throw ValidationError("missing x0");
    }
    auto cfg = make_config(o, r.preset ? r.preset->horizon : 2000.0);
    auto tr  = integrate(sys, *x0, r.params, cfg);

    std::cout << "sys=" << name(sys) << " t_last=" << format_double(tr.t.back()) << " samples=" << tr.size()
              << " steps=" << tr.steps_accepted << " rejected=" << tr.steps_rejected
              << " terminated_early=" << (tr.terminated_early ? "true" : "false");
    print_state(std::cout, sys, tr.back(), "final_");
    std::cout << '\n';
    print_outcome(std::cout, tr.outcome);
    std::cout << '\n';

    if (!o.out.empty()) {
        fs::path dir(o.out);
        if (o.format == "doc") {
            write_file(dir / "simulation.json", [&](std::ostream& os) {
                Json traj = Json::array();
                for (std::size_t i = 0; i < tr.size(); ++i) {
                    Json row = to_json(sys, tr.x[i]);
                    row["t"] = tr.t[i];
                    traj.push_back(row);
                }
                Json ev = Json::array();
                for (auto& e : tr.events) {
                    ev.push_back({{"t", e.t}, {"kind", name(e.kind)}, {"compartment", e.compartment}});
                }
                os << Json{{"sys", name(sys)},
                           {"params", to_json(r.params)},
                           {"x0", to_json(sys, *x0)},
                           {"outcome", to_json(tr.outcome, sys)},
                           {"events", ev},
                           {"trajectory", traj}}
                          .dump(1)
                   << '\n';
            });
        }
        else {
            write_file(dir / "trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, tr); });
            write_file(dir / "events.csv", [&](std::ostream& os) { write_events_csv(os, tr); });
        }
        std::cout << "out=" << dir.string() << '\n';
    }
    return exit_ok;
}

int cmd_thresholds(const Options& o)
{
    auto r  = resolve_params(o);
    auto th = thresholds(r.params);
    if (o.format == "doc") {
        std::cout << to_json(th).dump(2) << '\n';
        return exit_ok;
    }
    std::cout << "d=" << format_double(th.d) << '\n';
    for (auto& [n, m] : threshold_fields) {
        std::cout << n << '=' << opt_str(th.*m) << '\n';
    }
    return exit_ok;
}

int cmd_equilibria(const Options& o)
{
    auto r = resolve_params(o);
    std::vector<SystemId> systems;
    if (o.sys.empty() || o.sys == "all") {
        systems.assign(all_systems.begin(), all_systems.end());
    }
    else {
        systems.push_back(parse_system(o.sys));
    }
    Json doc = Json::array();
    for (SystemId sys : systems) {
        for (auto& e : equilibria(sys, r.params)) {
            if (o.format == "doc") {
                doc.push_back(to_json(e));
                continue;
            }
            std::cout << "sys=" << name(sys) << " tag=" << quote(e.existence_condition) << " class=" << name(e.cls);
            print_state(std::cout, sys, e.location, "");
            std::cout << " residual=" << format_double(e.residual);
            for (std::size_t i = 0; i < e.eigenvalues.size(); ++i) {
                std::cout << " ev" << i << '=' << format_double(e.eigenvalues[i].real());
                if (e.eigenvalues[i].imag() != 0.0) {
                    std::cout << (e.eigenvalues[i].imag() > 0 ? "+" : "") << format_double(e.eigenvalues[i].imag())
                              << 'i';
                }
            }
            std::cout << '\n';
        }
        if (sys == SystemId::HealthyMiteFree || sys == SystemId::Full) {
            auto rep = sys == SystemId::Full ? interior_full(r.params) : interior_healthy_mite_free(r.params);
            if (o.format == "doc") {
                doc.push_back({{"interior_report", to_json(rep)}});
            }
            else {
                std::cout << "sys=" << name(sys) << " interior_branch=" << quote(rep.branch)
                          << " roots=" << rep.roots.size() << " inconsistent=" << (rep.inconsistent ? "true" : "false")
                          << '\n';
            }
        }
    }
    if (o.format == "doc") {
        std::cout << doc.dump(2) << '\n';
    }
    return exit_ok;
}

void print_counts(std::string_view label, const AgreementCounts& c)
{
    std::cout << label << " confirmed=" << c.confirmed << " vacuous=" << c.vacuous << " violated=" << c.violated
              << " undetermined=" << c.undetermined << '\n';
}

int cmd_check(const Options& o)
{
    if (o.theorem < 0 || o.theorem > 6) {
        throw ValidationError("--theorem must be 1..6");
    }
    if (o.campaign > 0) {
        CampaignConfig cc;
        cc.draws   = o.campaign;
        cc.seed    = o.seed;
        cc.threads = worker_count(0);
        cc.integration.rel_tol = o.rel_tol;
        cc.integration.abs_tol = o.abs_tol;
        auto rep = run_campaign(cc);
        std::size_t shown = 0;
        for (auto& dr : rep.draws) {
            for (auto& res : dr.results) {
                if (o.theorem && res.verdict.theorem != "T" + std::to_string(o.theorem)) {
                    continue;
                }
                if (res.agreement == Agreement::Violated && shown++ < 50) {
                    std::cout << "violation draw=" << dr.draw.id << " clause=" << res.verdict.id()
                              << " diagnostics=" << quote(join(res.diagnostics)) << '\n';
                }
            }
        }
        std::cout << "campaign draws=" << o.campaign << " seed=" << o.seed
                  << " integration_errors=" << rep.integration_errors << '\n';
        print_counts("simulated", rep.simulated);
        print_counts("structural", rep.structural);
        for (auto& [id, c] : rep.by_clause) {
            if (o.theorem && id.rfind("T" + std::to_string(o.theorem), 0) != 0) {
                continue;
            }
            print_counts("clause=" + id, c);
        }
        if (!o.out.empty()) {
            write_file(fs::path(o.out) / "campaign.json", [&](std::ostream& os) {
                Json draws = Json::array();
                for (auto& dr : rep.draws) {
                    Json res = Json::array();
                    for (auto& x : dr.results) {
                        res.push_back(to_json(x));
                    }
                    draws.push_back({{"id", dr.draw.id},
                                     {"params", to_json(dr.draw.p)},
                                     {"x0", to_json(SystemId::Full, dr.draw.x0)},
                                     {"viable", dr.draw.viable},
                                     {"results", res},
                                     {"errors", dr.errors}});
                }
                os << Json{{"seed", o.seed}, {"version", APIS_VERSION}, {"draws", draws}}.dump(1) << '\n';
            });
        }
        return rep.simulated.violated + rep.structural.violated > 0 ? exit_mismatch : exit_ok;
    }

    auto r  = resolve_params(o);
    auto x0 = resolve_x0(o, r, SystemId::Full);
    const State x = x0.value_or(State{});
    const ParamsRaw* raw = r.raw ? &*r.raw : nullptr;
    auto verdicts = o.theorem ? check_theorem(o.theorem, r.params, x, raw) : check_all(r.params, x, raw);

    std::vector<CrossValidation> results;
    if (x0) {
        std::map<SystemId, Trajectory> trs;
        auto cfg = make_config(o, check_horizon(r.params));
        for (SystemId sys : all_systems) {
            trs.emplace(sys, integrate(sys, *x0, r.params, cfg));
        }
        results = cross_validate(verdicts, trs, r.params);
    }
    Json doc = Json::array();
    bool violated = false;
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        const auto& v = verdicts[i];
        if (o.format == "doc") {
            doc.push_back(x0 ? to_json(results[i]) : to_json(v));
            continue;
        }
        std::cout << "clause=" << v.id() << " hypothesis=" << name(v.hypothesis) << " conclusion=" << quote(v.predicted.tag);
        if (x0) {
            std::cout << " agreement=" << name(results[i].agreement) << " simulated=" << name(results[i].simulated);
            violated |= results[i].agreement == Agreement::Violated;
        }
        std::cout << '\n';
    }
    if (o.format == "doc") {
        std::cout << doc.dump(2) << '\n';
    }
    if (!x0) {
        std::cout << "note=\"no x0 given; hypotheses evaluated only\"\n";
    }
    return violated ? exit_mismatch : exit_ok;
}

int cmd_reproduce(const Options& o)
{
    std::vector<const ScenarioPreset*> todo;
    if (o.scenario == "all") {
        for (auto& s : presets()) {
            todo.push_back(&s);
        }
    }
    else {
        todo.push_back(&preset(o.scenario));
    }
    const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
    bool all_pass      = true;
    for (auto* s : todo) {
        std::optional<IntegrationConfig> cfg;
        if (o.t_end || o.rel_tol != 1e-8 || o.abs_tol != 1e-10) {
            cfg = make_config(o, s->horizon);
        }
        auto rep = reproduce(*s, cfg);
        write_reproduction(rep, dir);
        std::cout << "id=" << s->id << " sys=" << name(s->sys) << " expected=" << name(s->expected) << ' ';
        print_outcome(std::cout, rep.trajectory.outcome);
        std::cout << " pass=" << (rep.pass ? "true" : "false") << '\n';
        all_pass &= rep.pass;
    }
    return all_pass ? exit_ok : exit_mismatch;
}

SweepAxis parse_axis(const std::string& s)
{
    // name:lo:hi:count
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) {
        parts.push_back(item);
    }
    if (parts.size() != 4) {
        throw ValidationError("axis '" + s + "' is not name:lo:hi:count");
    }
    SweepAxis a;
    a.parameter     = parts[0];
    a.lo            = detail::parse_number("axis lo", parts[1]);
    a.hi            = detail::parse_number("axis hi", parts[2]);
    const double n  = detail::parse_number("axis count", parts[3]);
    if (!(n >= 1 && n <= 1e6) || n != std::floor(n)) {
        throw ValidationError("axis count must be a whole number in [1, 1e6]");
    }
    a.count = static_cast<std::size_t>(n);
    return a;
}

int cmd_sweep(const Options& o)
{
    auto r = resolve_params(o);
    SweepSpec spec;
    spec.sys  = resolve_sys(o, r);
    spec.base = r.params;
    for (auto& a : o.axes) {
        spec.axes.push_back(parse_axis(a));
    }
    auto x0 = resolve_x0(o, r, spec.sys);
    if (!x0) {
        throw ValidationError("missing x0");
    }
    spec.x0           = *x0;
    spec.bee_fraction = o.bee_fraction;
    spec.horizon      = o.t_end.value_or(r.preset ? r.preset->horizon : 2000.0);
    spec.integration  = make_config(o, spec.horizon);
    spec.validate();

    auto cells = sweep(spec, worker_count(0));
    const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
    write_file(dir / "sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, spec, cells); });
    write_file(dir / "sweep_manifest.json", [&](std::ostream& os) { os << sweep_manifest(spec).dump(2) << '\n'; });

    std::map<std::string, std::size_t> tally;
    std::size_t errors = 0;
    for (auto& c : cells) {
        ++tally[std::string(name(c.outcome))];
        errors += !c.error.empty();
    }
    std::cout << "cells=" << cells.size() << " errors=" << errors;
    for (auto& [k, n] : tally) {
        std::cout << ' ' << k << '=' << n;
    }
    std::cout << " out=" << dir.string() << '\n';
    return exit_ok;
}

int cmd_hopf(const Options& o)
{
    auto r = resolve_params(o);
    if (!(o.step > 0.0) || !(o.hi > o.lo)) {
        throw ValidationError("hopf needs --lo < --hi and --step > 0");
    }
    auto scan = hopf_scan(r.params, o.parameter, o.lo, o.hi, o.step);
    for (auto& c : scan.crossings) {
        std::cout << "parameter=" << scan.parameter << " crossing=" << format_double(c.value)
                  << " trace_below=" << format_double(c.trace_below) << " trace_above=" << format_double(c.trace_above)
                  << " trace_changes_sign=" << (c.trace_changes_sign ? "true" : "false") << '\n';
    }
    std::cout << "crossings=" << scan.crossings.size() << '\n';
    for (auto& n : scan.notes) {
        std::cout << "note=" << quote(n) << '\n';
    }
    return exit_ok;
}

void add_params(CLI::App* app, Options& o)
{
    app->add_option("--params", o.params, "parameter file (key = value lines)");
    app->add_option("--preset", o.preset, "take parameters (and x0, sys) from a scenario preset");
    app->add_option("--set", o.set, "override key=value, repeatable")->allow_extra_args(false);
}

void add_run(CLI::App* app, Options& o)
{
    app->add_option("--x0", o.x0, "initial state a,b[,c,d]");
    app->add_option("--sys", o.sys, "full | virus-free | mite-free | healthy-mite-free | bee-only");
    app->add_option("--t-end", o.t_end, "horizon in days");
    app->add_option("--rel-tol", o.rel_tol)->check(CLI::PositiveNumber);
    app->add_option("--abs-tol", o.abs_tol)->check(CLI::PositiveNumber);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Honeybee, mite and virus colony dynamics"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", APIS_VERSION);
    Options o;

    auto* sim = app.add_subcommand("simulate", "integrate one system");
    add_params(sim, o);
    add_run(sim, o);
    sim->add_option("--out", o.out, "directory for trajectory and events");
    sim->add_option("--format", o.format)->check(CLI::IsMember({"csv", "doc"}));

    auto* eq = app.add_subcommand("equilibria", "list and classify equilibria");
    add_params(eq, o);
    eq->add_option("--sys", o.sys, "system, or all");
    eq->add_option("--format", o.format)->check(CLI::IsMember({"csv", "doc"}));

    auto* th = app.add_subcommand("thresholds", "print derived thresholds");
    add_params(th, o);
    th->add_option("--format", o.format)->check(CLI::IsMember({"csv", "doc"}));

    auto* chk = app.add_subcommand("check", "evaluate theorem hypotheses, optionally against simulation");
    add_params(chk, o);
    add_run(chk, o);
    chk->add_option("--theorem", o.theorem, "only this theorem (1..6)");
    chk->add_option("--campaign", o.campaign, "run N randomized draws instead");
    chk->add_option("--seed", o.seed, "campaign seed");
    chk->add_option("--out", o.out, "directory for campaign.json");
    chk->add_option("--format", o.format)->check(CLI::IsMember({"csv", "doc"}));

    auto* rep = app.add_subcommand("reproduce", "run a scenario preset and compare with its expected outcome");
    rep->add_option("id", o.scenario, "preset id or all")->required();
    rep->add_option("--out", o.out, "output directory");
    rep->add_option("--t-end", o.t_end);
    rep->add_option("--rel-tol", o.rel_tol)->check(CLI::PositiveNumber);
    rep->add_option("--abs-tol", o.abs_tol)->check(CLI::PositiveNumber);

    auto* sw = app.add_subcommand("sweep", "outcome map over a one- or two-parameter grid");
    add_params(sw, o);
    add_run(sw, o);
    sw->add_option("--axis", o.axes, "name:lo:hi:count, once or twice")->required();
    sw->add_option("--bee-fraction", o.bee_fraction, "S_h(0) as a fraction of the bee carrying level per cell");
    sw->add_option("--out", o.out, "output directory");

    auto* hp = app.add_subcommand("hopf", "locate the virus-free Hopf crossing along a parameter");
    add_params(hp, o);
    hp->add_option("--parameter", o.parameter)->check(CLI::IsMember({"d_m", "alpha", "c", "K_hat"}));
    hp->add_option("--lo", o.lo)->required();
    hp->add_option("--hi", o.hi)->required();
    hp->add_option("--step", o.step)->required();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e) {
        std::cout << "error=validation reason=" << quote(e.what()) << '\n';
        return exit_validation;
    }

    try {
        if (*sim) {
            return cmd_simulate(o);
        }
        if (*eq) {
            return cmd_equilibria(o);
        }
        if (*th) {
            return cmd_thresholds(o);
        }
        if (*chk) {
            return cmd_check(o);
        }
        if (*rep) {
            return cmd_reproduce(o);
        }
        if (*sw) {
            return cmd_sweep(o);
        }
        if (*hp) {
            return cmd_hopf(o);
        }
    }
    catch (const IntegrationError& e) {
        std::cout << "error=integration reason=" << quote(e.what()) << '\n';
        return exit_integration;
    }
    catch (const ValidationError& e) {
        std::cout << "error=validation reason=" << quote(e.what()) << '\n';
        return exit_validation;
    }
    catch (const LoadError& e) {
        std::cout << "error=validation reason=" << quote(e.what()) << '\n';
        return exit_validation;
    }
    catch (const DomainError& e) {
        std::cout << "error=validation reason=" << quote(e.what()) << '\n';
        return exit_validation;
    }
    catch (const std::exception& e) {
        std::cout << "error=internal reason=" << quote(e.what()) << '\n';
        return 4;
    }
    return exit_validation;
}
