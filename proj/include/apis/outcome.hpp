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

#include "apis/thresholds.hpp"
#include "apis/trajectory.hpp"

#include <vector>

namespace apis {

struct OutcomeConfig {
    double window_fraction = 0.2;
    double persist_factor  = 10.0; // persistence/extinction cut = persist_factor * extinction_eps
    double peak_growth     = 1.02; // successive maxima ratio counted as expanding
    int min_expanding      = 2;
};

/// Local maxima of N_h, found from sign changes of the differenced series.
inline std::vector<Peak> find_peaks(const Trajectory& tr, double floor_value)
{
    std::vector<Peak> peaks;
    const std::size_t n = tr.size();
    int last_sign       = 0;
    std::size_t last_i  = 0;
    for (std::size_t i = 1; i < n; ++i) {
        const double dv = tr.x[i].N_h() - tr.x[i - 1].N_h();
        const int s     = dv > 0 ? 1 : (dv < 0 ? -1 : 0);
        if (s == 0) {
            continue;
        }
        if (last_sign > 0 && s < 0) {
            const double v = tr.x[last_i].N_h();
            if (v > floor_value) {
                peaks.push_back({tr.t[last_i], v});
            }
        }
        last_sign = s;
        last_i    = i;
    }
    return peaks;
}

inline int trailing_expanding(const std::vector<Peak>& peaks, double growth)
{
    int count = 0;
    for (std::size_t k = peaks.size(); k-- > 1;) {
        if (peaks[k].value > growth * peaks[k - 1].value) {
            ++count;
        }
        else {
            break;
        }
    }
    return count;
}

/// Finite-horizon fate of a trajectory. Throws AnalysisError when the run does not reach
/// the analysis window.
inline Outcome classify_outcome(const Trajectory& tr, const Thresholds& th, const OutcomeConfig& oc = {})
{
    Outcome out;
    const double cut = oc.persist_factor * tr.extinction_eps;
    const std::size_t b = window_begin(tr, oc.window_fraction);
    const std::size_t n = tr.size();

    for (int i = 0; i < 4; ++i) {
        const auto c = static_cast<Compartment>(i);
        if (!has(tr.sys, c)) {
            out.status[i] = Status::Absent;
            continue;
        }
        double lo = tr.x[b][c];
        for (std::size_t k = b; k < n; ++k) {
            lo = std::min(lo, tr.x[k][c]);
        }
        out.floor[i]      = lo;
        out.window_end[i] = tr.x[n - 1][c];
        if (tr.terminated_early || out.window_end[i] <= cut) {
            out.status[i] = tr.terminated_early && out.window_end[i] > cut ? Status::Indeterminate : Status::Extinct;
        }
        else {
            out.status[i] = lo > cut ? Status::Persistent : Status::Indeterminate;
        }
    }

    out.peaks           = find_peaks(tr, cut);
    out.expanding_peaks = trailing_expanding(out.peaks, oc.peak_growth);
    for (std::size_t k = 1; k < n; ++k) {
        if (tr.x[k].N_h() < 1.0 && tr.x[k - 1].N_h() >= 1.0) {
            out.collapse_time = tr.t[k];
            break;
        }
    }

    // Group statistics over the window.
    auto group = [&](Observable o) {
        WindowStats w = window_stats(tr, o, oc.window_fraction);
        if (tr.terminated_early || w.end <= cut) {
            return Status::Extinct;
        }
        return w.min > cut ? Status::Persistent : Status::Indeterminate;
    };
    const bool mites_modeled = has(tr.sys, Compartment::S_m) || has(tr.sys, Compartment::I_m);
    const bool virus_modeled = has(tr.sys, Compartment::I_h) || has(tr.sys, Compartment::I_m);
    const Status bees        = group(Observable::N_h);
    const Status mites       = mites_modeled ? group(Observable::N_m) : Status::Absent;
    const Status virus       = virus_modeled ? group(Observable::Virus) : Status::Absent;

    // Below the Allee threshold N_h decreases monotonically to zero whatever the
    // mites and virus do, and mites and virus cannot outlive the bees.
    const double nh_end = tr.x[n - 1].N_h();
    out.bees_committed  = !th.Nbar_h_c || nh_end < *th.Nbar_h_c * (1.0 - 1e-9);

    if (bees == Status::Extinct || out.bees_committed) {
        const bool collapse = out.expanding_peaks >= oc.min_expanding;
        out.label           = collapse ? OutcomeLabel::CatastrophicCollapse : OutcomeLabel::AllExtinct;
        if (bees != Status::Extinct) {
            out.note = "bees below the Allee threshold at window end";
        }
        return out;
    }
    if (bees != Status::Persistent) {
        out.label = OutcomeLabel::Undetermined;
        return out;
    }
    auto gone = [](Status s) {
        return s == Status::Absent || s == Status::Extinct;
    };
    const bool all_modeled_persist = (mites_modeled || virus_modeled) && (!mites_modeled || mites == Status::Persistent) &&
                                     (!virus_modeled || virus == Status::Persistent);
    if (all_modeled_persist) {
        out.label = OutcomeLabel::Coexistence;
    }
    else if (gone(virus) && (gone(mites) || mites == Status::Persistent)) {
        out.label = OutcomeLabel::DiseaseFreePersistence;
    }
    else if (gone(mites) && virus == Status::Persistent) {
        out.label = OutcomeLabel::MiteFreePersistence;
    }
    else {
        out.label = OutcomeLabel::Undetermined;
    }
    return out;
}

/// An expected AllExtinct is also met by the collapse refinement of it.
inline bool outcome_matches(OutcomeLabel expected, OutcomeLabel actual)
{
    return expected == actual ||
           (expected == OutcomeLabel::AllExtinct && actual == OutcomeLabel::CatastrophicCollapse);
}

} // namespace apis
