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
#include "apis/model.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace apis {

enum class OutcomeLabel {
    AllExtinct,
    DiseaseFreePersistence,
    MiteFreePersistence,
    Coexistence,
    CatastrophicCollapse,
    Undetermined
};

inline std::string_view name(OutcomeLabel l)
{
    switch (l) {
    case OutcomeLabel::AllExtinct:
        return "AllExtinct";
    case OutcomeLabel::DiseaseFreePersistence:
        return "DiseaseFreePersistence";
    case OutcomeLabel::MiteFreePersistence:
        return "MiteFreePersistence";
    case OutcomeLabel::Coexistence:
        return "Coexistence";
    case OutcomeLabel::CatastrophicCollapse:
        return "CatastrophicCollapse";
    case OutcomeLabel::Undetermined:
        return "Undetermined";
    }
    return "?";
}

inline OutcomeLabel parse_outcome(std::string_view s)
{
    for (auto l : {OutcomeLabel::AllExtinct, OutcomeLabel::DiseaseFreePersistence, OutcomeLabel::MiteFreePersistence,
                   OutcomeLabel::Coexistence, OutcomeLabel::CatastrophicCollapse, OutcomeLabel::Undetermined}) {
        if (name(l) == s) {
            return l;
        }
    }
    throw DomainError("unknown outcome '" + std::string(s) + "'");
}

enum class Status { Absent, Persistent, Extinct, Indeterminate };

inline std::string_view name(Status s)
{
    switch (s) {
    case Status::Absent:
        return "absent";
    case Status::Persistent:
        return "persistent";
    case Status::Extinct:
        return "extinct";
    case Status::Indeterminate:
        return "indeterminate";
    }
    return "?";
}

struct Peak {
    double t;
    double value;
};

/// Classified fate of one trajectory plus the per-compartment evidence behind it.
struct Outcome {
    OutcomeLabel label = OutcomeLabel::Undetermined;
    std::array<Status, 4> status{};
    std::array<double, 4> floor{};      // window minimum, a finite-horizon liminf proxy
    std::array<double, 4> window_end{};
    std::vector<Peak> peaks;            // local maxima of N_h
    int expanding_peaks = 0;            // trailing run of peaks each > growth ratio x previous
    std::optional<double> collapse_time; // first sample with N_h < 1 after N_h >= 1
    bool bees_committed = false;        // N_h below the Allee threshold at window end
    std::string note;
};

enum class EventKind { CompartmentExtinct, TotalExtinct, BoundExceeded };

inline std::string_view name(EventKind k)
{
    switch (k) {
    case EventKind::CompartmentExtinct:
        return "compartment-extinct";
    case EventKind::TotalExtinct:
        return "total-extinct";
    case EventKind::BoundExceeded:
        return "bound-exceeded";
    }
    return "?";
}

struct Event {
    double t;
    EventKind kind;
    std::string compartment;
};

struct Trajectory {
    SystemId sys = SystemId::Full;
    Params params;
    double t0             = 0;
    double t_end          = 0; // requested horizon; the last sample is earlier after early termination
    double extinction_eps = 1e-3;
    std::vector<double> t;
    std::vector<State> x;
    std::vector<Event> events;
    bool terminated_early = false;
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;
    std::optional<double> stiff_from; // time of the switch to implicit steps, if any
    Outcome outcome;

    std::size_t size() const
    {
        return t.size();
    }
    const State& back() const
    {
        return x.back();
    }
    bool has_event(EventKind k) const
    {
        return std::any_of(events.begin(), events.end(), [k](const Event& e) {
            return e.kind == k;
        });
    }
};

/// Scalar quantities read off a state.
enum class Observable { S_h, I_h, S_m, I_m, N_h, N_m, N, I, Virus };

inline std::string_view name(Observable o)
{
    switch (o) {
    case Observable::S_h:
        return "S_h";
    case Observable::I_h:
        return "I_h";
    case Observable::S_m:
        return "S_m";
    case Observable::I_m:
        return "I_m";
    case Observable::N_h:
        return "N_h";
    case Observable::N_m:
        return "N_m";
    case Observable::N:
        return "N";
    case Observable::I:
        return "I";
    case Observable::Virus:
        return "I_h+I_m";
    }
    return "?";
}

inline double value(const State& s, Observable o, double c)
{
    switch (o) {
    case Observable::S_h:
        return s.S_h;
    case Observable::I_h:
        return s.I_h;
    case Observable::S_m:
        return s.S_m;
    case Observable::I_m:
        return s.I_m;
    case Observable::N_h:
        return s.N_h();
    case Observable::N_m:
        return s.N_m();
    case Observable::N:
        return s.N(c);
    case Observable::I:
        return s.I(c);
    case Observable::Virus:
        return s.I_h + s.I_m;
    }
    return 0.0;
}

/// Index of the first sample in the analysis window (last `fraction` of the requested horizon).
inline std::size_t window_begin(const Trajectory& tr, double fraction = 0.2)
{
    if (tr.t.empty()) {
        throw AnalysisError("empty trajectory");
    }
    const double start = tr.t_end - fraction * (tr.t_end - tr.t0);
    auto it = std::lower_bound(tr.t.begin(), tr.t.end(), start);
    if (it == tr.t.end()) {
        if (tr.terminated_early) {
            return tr.t.size() - 1;
        }
        throw AnalysisError("trajectory ends before the analysis window");
    }
    return static_cast<std::size_t>(it - tr.t.begin());
}

struct WindowStats {
    double min   = 0;
    double max   = 0;
    double first = 0; // value at window start
    double end   = 0; // value at window end
    double max_first_half  = 0;
    double max_second_half = 0;
};

inline WindowStats window_stats(const Trajectory& tr, Observable o, double fraction = 0.2)
{
    const std::size_t b = window_begin(tr, fraction);
    const std::size_t n = tr.size();
    const double c      = tr.params.c;
    WindowStats w;
    w.first = w.min = w.max = value(tr.x[b], o, c);
    w.end                   = value(tr.x[n - 1], o, c);
    w.max_first_half = w.max_second_half = 0.0;
    const std::size_t mid = b + (n - b) / 2;
    for (std::size_t i = b; i < n; ++i) {
        const double v = value(tr.x[i], o, c);
        w.min          = std::min(w.min, v);
        w.max          = std::max(w.max, v);
        if (i < mid) {
            w.max_first_half = std::max(w.max_first_half, v);
        }
        else {
            w.max_second_half = std::max(w.max_second_half, v);
        }
    }
    return w;
}

} // namespace apis
