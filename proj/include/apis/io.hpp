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
#include "apis/theorems.hpp"
#include "apis/thresholds.hpp"
#include "apis/trajectory.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

namespace apis {

using Json = nlohmann::json;

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr)
{
    auto comps = compartments(tr.sys);
    os << "t";
    for (Compartment c : comps) {
        os << ',' << name(c);
    }
    os << '\n';
    for (std::size_t i = 0; i < tr.size(); ++i) {
        os << format_double(tr.t[i]);
        for (Compartment c : comps) {
            os << ',' << format_double(tr.x[i][c]);
        }
        os << '\n';
    }
}

inline void write_events_csv(std::ostream& os, const Trajectory& tr)
{
    os << "t,kind,compartment\n";
    for (auto& e : tr.events) {
        os << format_double(e.t) << ',' << name(e.kind) << ',' << e.compartment << '\n';
    }
}

// JSON has no NaN or infinity; those become null.
inline Json number(double v)
{
    return std::isfinite(v) ? Json(v) : Json(nullptr);
}

inline Json number(const Opt& v)
{
    return v ? number(*v) : Json(nullptr);
}

inline Json to_json(SystemId sys, const State& x)
{
    Json j = Json::object();
    for (Compartment c : compartments(sys)) {
        j[std::string(name(c))] = number(x[c]);
    }
    return j;
}

inline Json to_json(const Params& p)
{
    Json j = Json::object();
    for (auto& [n, m] : params_fields) {
        j[std::string(n)] = number(p.*m);
    }
    return j;
}

inline Json to_json(const Thresholds& th)
{
    Json j = Json::object();
    j["d"] = number(th.d);
    for (auto& [n, m] : threshold_fields) {
        j[std::string(n)] = number(th.*m);
    }
    return j;
}

inline Json to_json(const ClassifiedEquilibrium& e)
{
    Json ev = Json::array();
    for (auto& z : e.eigenvalues) {
        ev.push_back({number(z.real()), number(z.imag())});
    }
    return {{"sys", name(e.sys)},
            {"location", to_json(e.sys, e.location)},
            {"eigenvalues", ev},
            {"class", name(e.cls)},
            {"existence_condition", e.existence_condition},
            {"residual", number(e.residual)}};
}

inline Json to_json(const InteriorSolveReport& r)
{
    Json roots = Json::array();
    for (auto& root : r.roots) {
        roots.push_back({{"coordinate", number(root.coordinate)},
                         {"bracket", {number(root.bracket.lo), number(root.bracket.hi)}},
                         {"equilibrium", to_json(root.equilibrium)}});
    }
    Json bundles = Json::array();
    for (auto& b : r.bundles) {
        Json vals = Json::object();
        for (auto& [k, v] : b.values) {
            vals[k] = number(v);
        }
        bundles.push_back({{"id", b.id}, {"holds", b.holds}, {"values", vals}});
    }
    return {{"sys", name(r.sys)},
            {"branch", r.branch},
            {"interval", {number(r.interval.lo), number(r.interval.hi)}},
            {"pole", r.pole ? number(*r.pole) : Json(nullptr)},
            {"samples", r.samples},
            {"roots", roots},
            {"failures", r.failures},
            {"bundles", bundles},
            {"inconsistent", r.inconsistent}};
}

inline Json to_json(const TheoremVerdict& v)
{
    Json hyp = Json::array();
    for (auto& q : v.hypotheses) {
        hyp.push_back({{"text", q.text}, {"lhs", number(q.lhs)}, {"op", q.op}, {"rhs", number(q.rhs)}, {"value", name(q.value)}});
    }
    return {{"theorem", v.theorem},
            {"clause", v.clause},
            {"hypotheses", hyp},
            {"hypothesis", name(v.hypothesis)},
            {"hypothesis_holds", v.hypothesis_holds},
            {"predicted_conclusion", v.predicted.tag},
            {"system", name(v.predicted.sys)},
            {"structural", v.structural()},
            {"notes", v.notes}};
}

inline Json to_json(const CrossValidation& cv)
{
    return {{"verdict", to_json(cv.verdict)},
            {"simulated", name(cv.simulated)},
            {"agreement", name(cv.agreement)},
            {"diagnostics", cv.diagnostics}};
}

inline Json to_json(const Outcome& o, SystemId sys)
{
    Json status = Json::object(), floor = Json::object();
    for (Compartment c : compartments(sys)) {
        status[std::string(name(c))] = name(o.status[static_cast<int>(c)]);
        floor[std::string(name(c))]  = number(o.floor[static_cast<int>(c)]);
    }
    Json peaks = Json::array();
    for (auto& pk : o.peaks) {
        peaks.push_back({number(pk.t), number(pk.value)});
    }
    return {{"label", name(o.label)},
            {"status", status},
            {"floor", floor},
            {"peaks", peaks},
            {"expanding_peaks", o.expanding_peaks},
            {"collapse_time", o.collapse_time ? number(*o.collapse_time) : Json(nullptr)},
            {"bees_committed", o.bees_committed},
            {"note", o.note}};
}

} // namespace apis
