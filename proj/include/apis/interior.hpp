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

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace apis {

struct Bracket {
    double lo = 0;
    double hi = 0;
};

struct InteriorRoot {
    double coordinate = 0; // scan variable at the root (I_h or S_h)
    Bracket bracket;
    ClassifiedEquilibrium equilibrium;
};

/// One printed no-interior-equilibrium bundle: its two inequalities and the numbers behind them.
struct BundleCheck {
    std::string id;
    bool holds = false;
    std::vector<std::pair<std::string, double>> values;
};

struct InteriorSolveReport {
    SystemId sys = SystemId::Full;
    std::string branch;              // "solved", or the reason nothing was scanned
    Bracket interval;                // admissible interval of the scan variable
    std::optional<double> pole;      // excluded singularity, when inside the interval
    std::size_t samples = 0;         // final scan resolution
    std::vector<InteriorRoot> roots;
    std::vector<std::string> failures;     // per-bracket refinement problems
    std::vector<BundleCheck> bundles;      // full system only
    bool inconsistent = false;             // a root exists while a bundle claims none can
};

namespace detail {

struct ScanResult {
    std::vector<Bracket> brackets;
    std::size_t samples = 0;
};

// Sign changes of h on [lo, hi] minus a margin around `pole`. Resolution starts at
// 4096 and doubles until the bracket count is unchanged twice in a row.
inline ScanResult sign_scan(const std::function<double(double)>& h, double lo, double hi, std::optional<double> pole,
                            std::size_t start = 4096, std::size_t cap = std::size_t{1} << 22)
{
    const double margin = 1e-9 * (hi - lo);
    std::vector<Bracket> pieces;
    if (pole && *pole > lo && *pole < hi) {
        pieces.push_back({lo + margin, *pole - margin});
        pieces.push_back({*pole + margin, hi - margin});
    }
    else {
        pieces.push_back({lo + margin, hi - margin});
    }
    auto once = [&](std::size_t n) {
        std::vector<Bracket> out;
        for (auto [a, b] : pieces) {
            if (!(b > a)) {
                continue;
            }
            double xp = a, hp = h(a);
            for (std::size_t k = 1; k <= n; ++k) {
                const double x  = k == n ? b : a + (b - a) * static_cast<double>(k) / static_cast<double>(n);
                const double hx = h(x);
                if (!std::isfinite(hp) || !std::isfinite(hx)) {
                    xp = x;
                    hp = hx;
                    continue;
                }
                if (hp == 0.0) {
                    out.push_back({xp, xp});
                }
                else if ((hp < 0.0) != (hx < 0.0) && hx != 0.0) {
                    out.push_back({xp, x});
                }
                xp = x;
                hp = hx;
            }
            if (hp == 0.0) {
                out.push_back({b, b});
            }
        }
        return out;
    };
    ScanResult res;
    std::size_t n   = start;
    auto prev       = once(n);
    int stable_runs = 0;
    while (n < cap) {
        n *= 2;
        auto cur = once(n);
        if (cur.size() == prev.size()) {
            if (++stable_runs == 2) {
                prev = std::move(cur);
                break;
            }
        }
        else {
            stable_runs = 0;
        }
        prev = std::move(cur);
    }
    res.brackets = std::move(prev);
    res.samples  = n;
    return res;
}

// Bisection to a bracket of relative width 1e-15, then one secant step inside it.
inline double refine_root(const std::function<double(double)>& h, Bracket b)
{
    double a = b.lo, c = b.hi;
    if (a == c) {
        return a;
    }
    double ha = h(a), hc = h(c);
    for (int it = 0; it < 200 && (c - a) > 1e-15 * std::max(std::abs(a), std::abs(c)); ++it) {
        const double m  = 0.5 * (a + c);
        const double hm = h(m);
        if (hm == 0.0) {
            return m;
        }
        if ((hm < 0.0) == (ha < 0.0)) {
            a  = m;
            ha = hm;
        }
        else {
            c  = m;
            hc = hm;
        }
    }
    if (hc != ha) {
        const double s = a - ha * (c - a) / (hc - ha);
        if (s >= a && s <= c) {
            return s;
        }
    }
    return 0.5 * (a + c);
}

// Newton iterations in the full state space with a finite-difference Jacobian. Only
// steps that lower the residual and stay near the start are kept.
inline State polish(SystemId sys, State x, const Params& p)
{
    auto v        = project(sys, x);
    double best   = max_abs_rhs(sys, x, p);
    const auto v0 = v;
    for (int it = 0; it < 8 && best > 0.0; ++it) {
        Eigen::MatrixXd J;
        try {
            J = numeric_jacobian(sys, std::span<const double>(v), p);
        }
        catch (const DomainError&) {
            break;
        }
        auto f = rhs(sys, std::span<const double>(v), p);
        Eigen::VectorXd F(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            F[i] = f[i];
        }
        Eigen::VectorXd dx = J.fullPivLu().solve(-F);
        auto trial         = v;
        bool ok            = dx.allFinite();
        for (std::size_t i = 0; ok && i < v.size(); ++i) {
            trial[i] = v[i] + dx[i];
            ok       = trial[i] > 0.0 && std::abs(trial[i] - v0[i]) <= 1e-6 * std::max(1.0, std::abs(v0[i]));
        }
        if (!ok) {
            break;
        }
        const double res = max_abs_rhs(sys, embed(sys, trial), p);
        if (!(res < best)) {
            break;
        }
        best = res;
        v    = trial;
    }
    return embed(sys, v);
}

inline ClassifiedEquilibrium classify_numeric(SystemId sys, const State& x, const Params& p, std::string tag)
{
    auto v = project(sys, x);
    return make_equilibrium(sys, x, numeric_jacobian(sys, std::span<const double>(v), p), std::move(tag), p);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Healthy-mite-free subsystem. On an interior equilibrium N_h = (d_m+mu_m)/(c alpha);
// infected-mite level from the bee total balance (f1) and from the infected-bee
// balance (f2) must coincide.

struct HvmiCurves {
    double N_tilde = 0; // N_h at the interior
    double B       = 0; // per-mite transmission to bees at N_h = N_tilde
    std::optional<double> pole;

    double f1(double I, const Params& p) const
    {
        const double q = N_tilde - I + p.rho * I;
        return (detail::brood_survival(p, q) - p.d_h * N_tilde - p.mu_h * I) / (p.alpha * N_tilde);
    }
    double f2(double I, const Params& p) const
    {
        return I * (p.beta_h * (N_tilde - I) / N_tilde - (p.d_h + p.mu_h)) / ((p.alpha + B) * I - N_tilde * B);
    }
};

inline std::optional<HvmiCurves> hvmi_curves(const Params& p)
{
    const double ca = p.c * p.alpha;
    if (!(ca > 0.0)) {
        return std::nullopt;
    }
    HvmiCurves cv;
    cv.N_tilde = (p.d_m + p.mu_m) / ca;
    cv.B       = p.beta_mh_hat / cv.N_tilde + p.beta_mh_tilde;
    if (p.alpha + cv.B > 0.0) {
        cv.pole = cv.N_tilde * cv.B / (p.alpha + cv.B);
    }
    return cv;
}

/// With `shortcut` false the scan runs even where the growth test already rules out an
/// interior point, which is how that test is checked.
inline InteriorSolveReport interior_healthy_mite_free(const Params& p, bool shortcut = true)
{
    InteriorSolveReport rep;
    rep.sys = SystemId::HealthyMiteFree;
    if (shortcut && p.r * p.c * p.alpha < p.d_h * (p.d_m + p.mu_m)) {
        rep.branch = "no-interior: r c alpha < d_h (d_m + mu_m)";
        return rep;
    }
    auto cv = hvmi_curves(p);
    if (!cv) {
        rep.branch = "no-interior: c alpha = 0";
        return rep;
    }
    rep.branch   = "solved";
    rep.interval = {0.0, cv->N_tilde};
    if (cv->pole && *cv->pole > 0.0 && *cv->pole < cv->N_tilde) {
        rep.pole = cv->pole;
    }
    auto h    = [&](double I) { return cv->f1(I, p) - cv->f2(I, p); };
    auto scan = detail::sign_scan(h, 0.0, cv->N_tilde, rep.pole);
    rep.samples = scan.samples;
    for (auto br : scan.brackets) {
        const double I  = detail::refine_root(h, br);
        const double Im = cv->f1(I, p);
        const State x0{cv->N_tilde - I, I, 0.0, Im};
        if (!(x0.S_h > 0.0 && x0.I_h > 0.0 && x0.I_m > 0.0)) {
            continue;
        }
        // A sign change across a jump of f2 that escaped the pole margin is not a root.
        const double scale = std::max({std::abs(cv->f1(I, p)), std::abs(cv->f2(I, p)), 1.0});
        if (std::abs(h(I)) > 1e-6 * scale) {
            rep.failures.push_back("bracket [" + std::to_string(br.lo) + ", " + std::to_string(br.hi) +
                                   "] did not converge");
            continue;
        }
        const State x = detail::polish(rep.sys, x0, p);
        try {
            rep.roots.push_back({I, br, detail::classify_numeric(rep.sys, x, p, "interior-scan")});
        }
        catch (const std::exception& e) {
            rep.failures.push_back(e.what());
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Full system. With S_h as the scan variable the infected-bee fraction is fixed by the
// healthy-mite balance, and every other coordinate follows.

struct FullCurves {
    Params p;

    double D(double S) const
    {
        return p.beta_hm_hat + p.d_m - p.c * p.alpha * S;
    }
    double E(double S) const
    {
        return p.beta_hm_hat + (p.d_m - p.c * p.alpha * S) * (1.0 - p.rho);
    }
    // N_h
    double g1(double S) const
    {
        return p.beta_hm_hat * S / D(S);
    }
    // N_m from the bee total balance
    double g2(double S) const
    {
        const double d = D(S), e = E(S);
        const double ab = p.alpha * p.beta_hm_hat;
        return p.r * S * e * e * d / (ab * (p.K_hat * d * d + S * S * e * e)) - p.d_h / p.alpha -
               p.mu_h * (p.c * p.alpha * S - p.d_m) / ab;
    }
    // I_m / N_m
    double g3(double S) const
    {
        return (p.c * p.alpha * S - p.d_m) * (p.beta_hm_hat + p.d_m) / (p.mu_m * D(S));
    }
    double g4_num(double S) const
    {
        return p.beta_h * (p.d_m + p.beta_hm_hat) - p.beta_hm_hat * (p.d_h + p.mu_h) - p.c * p.alpha * p.beta_h * S;
    }
    double g4_d1() const
    {
        const double k = p.beta_hm_hat + p.d_m;
        return p.alpha * p.mu_m * p.beta_hm_hat + p.c * p.alpha * p.beta_mh_hat * k - p.beta_mh_tilde * p.beta_hm_hat * k;
    }
    double g4_d0() const
    {
        const double k = p.beta_hm_hat + p.d_m;
        return p.beta_mh_hat * k * k;
    }
    // N_m from the infected-bee balance
    double g4(double S) const
    {
        return p.mu_m * S * g4_num(S) / (g4_d1() * S - g4_d0());
    }
    std::optional<double> pole() const
    {
        const double d1 = g4_d1();
        if (d1 == 0.0) {
            return std::nullopt;
        }
        return g4_d0() / d1;
    }
    Bracket admissible() const
    {
        const double ca = p.c * p.alpha;
        const double k  = p.d_m + p.beta_hm_hat;
        return {p.d_m / ca, k / ca * (p.d_m + p.mu_m) / (k + p.mu_m)};
    }
    State reconstruct(double S) const
    {
        const double Nh = g1(S), Nm = g2(S), Im = g3(S) * Nm;
        return {S, Nh - S, Nm - Im, Im};
    }
};

/// The four printed parameter bundles under which the full system should have no
/// interior equilibrium. Each is reported separately; none of them is trusted to prune.
inline std::vector<BundleCheck> full_no_interior_bundles(const Params& p)
{
    const double k    = p.d_m + p.beta_hm_hat;
    const double R0   = p.beta_h / (p.d_h + p.mu_h);
    const double q    = p.beta_hm_hat / k;
    const double lhs2 = p.alpha * p.mu_m * p.beta_hm_hat / k;
    const double den  = lhs2 + p.c * p.alpha * p.beta_mh_hat - p.beta_mh_tilde * p.beta_hm_hat;
    const double X    = (R0 - q) / (p.beta_h * k * (p.d_h + p.mu_h));
    const double mix  = p.beta_mh_tilde * p.beta_hm_hat - p.c * p.alpha;
    const double ca   = p.c * p.alpha;

    std::vector<BundleCheck> out;
    {
        const double ratio = p.beta_mh_hat / den;
        const double bound = (p.d_m + p.mu_m) / (ca * (k + p.mu_m));
        out.push_back({"bundle-1", R0 > q && ratio > bound, {{"R0_V", R0}, {"q", q}, {"ratio", ratio}, {"bound", bound}}});
    }
    out.push_back({"bundle-2", lhs2 > mix && 0.0 < X && X < p.d_m, {{"lhs", lhs2}, {"rhs", mix}, {"X", X}, {"d_m", p.d_m}}});
    {
        const double ratio = p.beta_mh_hat * k / den;
        const double bound = p.d_m / ca;
        out.push_back(
            {"bundle-3", R0 < q && 0.0 < ratio && ratio < bound, {{"R0_V", R0}, {"q", q}, {"ratio", ratio}, {"bound", bound}}});
    }
    {
        const double bound = (p.d_m + p.mu_m) * k / (k + p.mu_m);
        out.push_back({"bundle-4", lhs2 < mix && X > bound, {{"lhs", lhs2}, {"rhs", mix}, {"X", X}, {"bound", bound}}});
    }
    return out;
}

inline InteriorSolveReport interior_full(const Params& p)
{
    InteriorSolveReport rep;
    rep.sys     = SystemId::Full;
    rep.bundles = full_no_interior_bundles(p);
    if (!(p.c * p.alpha > 0.0) || !(p.beta_hm_hat > 0.0) || !(p.mu_m > 0.0)) {
        rep.branch = "no-interior: needs c alpha > 0, beta_hm_hat > 0 and mu_m > 0";
        return rep;
    }
    FullCurves cv{p};
    rep.branch   = "solved";
    rep.interval = cv.admissible();
    if (auto pl = cv.pole(); pl && *pl > rep.interval.lo && *pl < rep.interval.hi) {
        rep.pole = pl;
    }
    auto h      = [&](double S) { return cv.g2(S) - cv.g4(S); };
    auto scan   = detail::sign_scan(h, rep.interval.lo, rep.interval.hi, rep.pole);
    rep.samples = scan.samples;
    for (auto br : scan.brackets) {
        const double S  = detail::refine_root(h, br);
        const State x0  = cv.reconstruct(S);
        if (!(x0.S_h > 0.0 && x0.I_h > 0.0 && x0.S_m > 0.0 && x0.I_m > 0.0)) {
            continue;
        }
        const double scale = std::max({std::abs(cv.g2(S)), std::abs(cv.g4(S)), 1.0});
        if (std::abs(h(S)) > 1e-6 * scale) {
            rep.failures.push_back("bracket [" + std::to_string(br.lo) + ", " + std::to_string(br.hi) +
                                   "] did not converge");
            continue;
        }
        const State x = detail::polish(rep.sys, x0, p);
        try {
            rep.roots.push_back({S, br, detail::classify_numeric(rep.sys, x, p, "interior-scan")});
        }
        catch (const std::exception& e) {
            rep.failures.push_back(e.what());
        }
    }
    const bool any_bundle = std::any_of(rep.bundles.begin(), rep.bundles.end(), [](auto& b) {
        return b.holds;
    });
    rep.inconsistent = any_bundle && !rep.roots.empty();
    if (rep.roots.empty() && rep.failures.empty()) {
        rep.branch = any_bundle ? "no root found (a no-interior bundle holds)" : "no root found";
    }
    return rep;
}

/// Every equilibrium the solvers know for one system.
inline std::vector<ClassifiedEquilibrium> equilibria(SystemId sys, const Params& p)
{
    switch (sys) {
    case SystemId::BeeOnly:
        return equilibria_bee_only(p);
    case SystemId::VirusFree:
        return equilibria_virus_free(p);
    case SystemId::MiteFree:
        return equilibria_mite_free(p);
    case SystemId::HealthyMiteFree:
    case SystemId::Full: {
        std::vector<ClassifiedEquilibrium> out{extinction_point(sys, p)};
        for (auto& e : equilibria_bee_only(p)) {
            if (e.existence_condition == "extinction") {
                continue;
            }
            const State loc{e.location.S_h, 0, 0, 0};
            Eigen::MatrixXd J = numeric_jacobian(sys, std::span<const double>(project(sys, loc)), p);
            out.push_back(make_equilibrium(sys, loc, J, e.existence_condition, p));
        }
        // faces of the state space that are invariant in this system
        std::vector<ClassifiedEquilibrium> faces = equilibria_mite_free(p);
        if (sys == SystemId::Full) {
            auto vf = equilibria_virus_free(p);
            faces.insert(faces.end(), vf.begin(), vf.end());
        }
        for (auto& e : faces) {
            const auto& tag = e.existence_condition;
            if (tag != "interior" && tag != "interior-low" && tag != "interior-high") {
                continue;
            }
            const std::string face = e.sys == SystemId::VirusFree ? "virus-free-" : "mite-free-";
            Eigen::MatrixXd J = numeric_jacobian(sys, std::span<const double>(project(sys, e.location)), p);
            out.push_back(make_equilibrium(sys, e.location, J, face + tag, p));
        }
        if (sys == SystemId::Full) {
            // healthy mites absent: S_m = 0 is invariant
            for (auto& r : interior_healthy_mite_free(p).roots) {
                const State& loc  = r.equilibrium.location;
                Eigen::MatrixXd J = numeric_jacobian(sys, std::span<const double>(project(sys, loc)), p);
                out.push_back(make_equilibrium(sys, loc, J, "healthy-mite-free-interior", p));
            }
        }
        auto rep = sys == SystemId::Full ? interior_full(p) : interior_healthy_mite_free(p);
        for (auto& r : rep.roots) {
            out.push_back(r.equilibrium);
        }
        return out;
    }
    }
    return {};
}

} // namespace apis
